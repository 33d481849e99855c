import argparse

from pathgauge.scripts.command import EXIT_OK, Command, logger
from pathgauge.services import graph_services, network_io_services, transform_services

OPERATIONS = ("absorb-biases", "drop-identity", "pool-to-id")


class Transform(Command):
    name = "transform"
    help = "Applies absorb-biases, drop-identity or pool-to-id"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--op", choices=OPERATIONS, required=True)
        parser.add_argument("--out", required=True, help="Where to write the transformed network")
        parser.add_argument(
            "--force", action="store_true", help="absorb-biases: add the constant input even without biases"
        )

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        if args.op == "absorb-biases":
            arch, params, bias_map = transform_services.absorb_biases(arch, params, force=args.force)
            report.results.update(
                {"bias_neuron": bias_map.bias_neuron, "bias_position": bias_map.position}
            )
        elif args.op == "drop-identity":
            before = graph_services.depth(arch)
            arch, params = transform_services.eliminate_identity_neurons(arch, params)
            report.results.update({"depth_before": before})
        else:
            arch = transform_services.pool_to_identity(arch)

        network_io_services.save_network(arch, params, args.out)
        report.results.update(
            {
                "op": args.op,
                "out": args.out,
                "neurons": len(arch.neurons),
                "edges": len(arch.edges),
                "d_in": arch.d_in,
                "depth": graph_services.depth(arch),
            }
        )
        logger.info("%s: wrote %s", args.op, args.out)
        return EXIT_OK
