import argparse

from pathgauge.scripts.command import EXIT_OK, Command, logger, positive_float
from pathgauge.services import network_io_services, rescale_services


class Normalize(Command):
    name = "normalize"
    help = "Writes the q-normalized parameters of a network"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--q", type=positive_float, default=1.0)
        parser.add_argument("--out", required=True, help="Where to write the rescaled network")

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        outcome = rescale_services.normalize(arch, params, args.q)
        network_io_services.save_network(arch, outcome.params, args.out)
        report.results.update(
            {
                "q": args.q,
                "out": args.out,
                "scales": dict(sorted(outcome.scales.items())),
                "zero_neurons": outcome.zero_neurons,
                "normalized": rescale_services.is_normalized(arch, outcome.params, args.q),
            }
        )
        logger.info("wrote %s (%d neurons rescaled)", args.out, len(outcome.scales))
        return EXIT_OK
