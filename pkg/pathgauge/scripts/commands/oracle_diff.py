import argparse

import numpy as np

from pathgauge.models.network_models import Architecture
from pathgauge.scripts.command import EXIT_FAILURE, EXIT_OK, Command, logger
from pathgauge.services import network_io_services, oracle_services
from pathgauge.utils import generators, settings


class OracleDiff(Command):
    name = "oracle-diff"
    help = "Fast routes against the path enumeration oracles"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument(
            "networks", nargs="*", help="Network files; the bundled fixtures when omitted"
        )
        parser.add_argument("--data", help="CSV inputs for the forward check")
        parser.add_argument("--random", type=int, default=0, help="also check N random networks")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--inputs", type=int, default=10, help="random inputs per network")
        parser.add_argument("--tol", type=float, default=None, help="relative tolerance")

    def _networks(self, args, report):
        if args.networks:
            for path in args.networks:
                report.add_input(path, path)
                yield network_io_services.load_network(path)
        elif not args.random:
            for entry in network_io_services.bundled_fixtures():
                yield network_io_services.load_fixture(entry.name[: -len(".yaml")])
        rng = np.random.default_rng(args.seed)
        for position in range(args.random):
            arch, params = generators.random_network(rng)
            yield Architecture.build(arch.neurons, arch.edges, name=f"random-{position}"), params

    def execute(self, args, report) -> int:
        tol = settings.REL_TOL if args.tol is None else args.tol
        data = self.load_dataset(args.data, report) if args.data else None
        rng = np.random.default_rng(args.seed)

        results = []
        for arch, params in self._networks(args, report):
            if data is not None:
                X = data.X
            else:
                X = oracle_services.random_inputs(rng, arch.d_in, args.inputs)
            results.append(oracle_services.compare_network(arch, params, X))

        worst = max((result.worst for result in results), default=0.0)
        report.results.update(
            {
                "networks": len(results),
                "tolerance": tol,
                "max_relative_discrepancy": worst,
                "passed": worst < tol,
                "per_network": [result.as_dict() for result in results],
            }
        )
        logger.info("%d networks, max relative discrepancy %.3g", len(results), worst)
        return EXIT_OK if worst < tol else EXIT_FAILURE
