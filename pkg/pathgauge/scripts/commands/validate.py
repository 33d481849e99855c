import argparse

from pathgauge.scripts.command import EXIT_FAILURE, EXIT_OK, Command, logger
from pathgauge.services import graph_services, path_services


class Validate(Command):
    name = "validate"
    help = "Checks a network file against the architecture invariants"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report, validate=False)
        validation = graph_services.validate(arch, params)
        report.results.update(
            {
                "ok": validation.ok,
                "neurons": len(arch.neurons),
                "edges": len(arch.edges),
                "violations": [
                    {"rule": v.rule, "subject": v.subject, "message": v.message}
                    for v in validation.violations
                ],
            }
        )
        if not validation.ok:
            logger.info("%s: %d violations", args.network, len(validation.violations))
            return EXIT_FAILURE

        stats = graph_services.pool_stats(arch)
        report.results.update(
            {
                "d_in": arch.d_in,
                "d_out": arch.d_out,
                "depth": graph_services.depth(arch),
                "P": stats.P,
                "K": stats.K,
                "M": stats.M,
                "paths": path_services.count_paths(arch),
                "sharpened_applicable": graph_services.sharpened_applicable(arch),
            }
        )
        logger.info("%s: valid, %d neurons, depth %d", args.network, len(arch.neurons), report.results["depth"])
        return EXIT_OK
