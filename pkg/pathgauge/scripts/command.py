import argparse
import logging
import sys
from abc import abstractmethod

from pathgauge.core.exceptions import PathGaugeException
from pathgauge.services import network_io_services
from pathgauge.services.report_services import RunReport

logger = logging.getLogger("pathgauge.scripts")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


class Command:
    """One subcommand: an argparse parser plus an execute step that fills a
    RunReport. run() prints the report as YAML on stdout and returns the
    exit code."""

    name: str = ""
    help: str = ""

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser):
        pass

    @abstractmethod
    def execute(self, args: argparse.Namespace, report: RunReport) -> int:
        pass

    def parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=f"pathgauge {self.name}", description=self.help)
        self.add_arguments(parser)
        return parser

    def load_network(self, path, report: RunReport, validate: bool = True):
        report.add_input("network", path)
        return network_io_services.load_network(path, validate=validate)

    def load_dataset(self, path, report: RunReport, **expected):
        report.add_input("data", path)
        return network_io_services.load_dataset(path, **expected)

    def run(self, args: list = None) -> int:
        args = list(args or [])
        try:
            namespace = self.parser().parse_args(args)
        except SystemExit as exit:
            # argparse has already written the synopsis to stderr
            return EXIT_OK if exit.code == 0 else EXIT_USAGE

        report = RunReport(command=[self.name] + args)
        try:
            code = self.execute(namespace, report)
        except PathGaugeException as error:
            logger.error("%s: %s", self.name, error.message)
            report.results["error"] = {"type": type(error).__name__, "message": error.message}
            code = EXIT_FAILURE
        except (OSError, KeyError) as error:
            logger.error("%s: %s", self.name, error)
            report.results["error"] = {"type": type(error).__name__, "message": str(error)}
            code = EXIT_FAILURE
        sys.stdout.write(report.finish().to_yaml())
        return code
