import argparse

from pathgauge.models.norm_models import NormSpec
from pathgauge.scripts.command import EXIT_OK, Command, logger, positive_float
from pathgauge.services import norm_services


def _norm_fields(result) -> dict:
    return {
        "value": result.value,
        "overflow": result.overflow,
        "log10_value": result.log10_value,
    }


class PathNorm(Command):
    name = "pathnorm"
    help = "Mixed path-norm ||Phi||_{q,r} of a network"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--q", type=positive_float, default=1.0)
        parser.add_argument("--r", type=positive_float, default=float("inf"))
        mode = parser.add_mutually_exclusive_group()
        mode.add_argument("--exact", action="store_true", help="enumerate every path")
        mode.add_argument("--naive", action="store_true", help="forward formula without the pool rewrite")
        mode.add_argument("--log-domain", action="store_true", help="accumulate log-values")
        parser.add_argument("--cap", type=int, default=None, help="path budget for --exact")

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        spec = NormSpec(args.q, args.r)
        if args.exact:
            mode, fields = "exact", {"value": norm_services.path_norm_exact(arch, params, spec, args.cap)}
        elif args.naive:
            mode, fields = "naive", _norm_fields(norm_services.naive_forward_norm(arch, params, spec))
        else:
            mode = "log-domain" if args.log_domain else "fast"
            result = norm_services.path_norm_fast(arch, params, spec, log_domain=args.log_domain)
            fields = _norm_fields(result)
        report.results.update({"q": spec.q, "r": spec.r, "mode": mode, **fields})
        logger.info("||Phi||_{%g,%g} (%s) = %g", spec.q, spec.r, mode, fields["value"])
        return EXIT_OK


class Lipschitz(Command):
    name = "lipschitz"
    help = "Lipschitz bound ||Phi||_{1,r} in the input"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--r", type=positive_float, default=float("inf"))

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        result = norm_services.lipschitz_bound(arch, params, args.r)
        report.results.update({"r": args.r, "lipschitz": result.value, "overflow": result.overflow})
        logger.info("||R(x) - R(x')||_%g <= %g ||x - x'||_inf", args.r, result.value)
        return EXIT_OK


class OpNorm(Command):
    name = "opnorm"
    help = "DAG product of operator norms Pi_{q,r} next to the path-norm"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--q", type=positive_float, default=1.0)
        parser.add_argument("--r", type=positive_float, default=float("inf"))

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        spec = NormSpec(args.q, args.r)
        product = norm_services.dag_operator_product(arch, params, spec)
        path_norm = norm_services.path_norm_fast(arch, params, spec).value
        report.results.update(
            {
                "q": spec.q,
                "r": spec.r,
                "operator_product": product,
                "pathnorm": path_norm,
                "ratio": product / path_norm if path_norm > 0 else None,
            }
        )
        logger.info("Pi_{%g,%g} = %g, ||Phi||_{%g,%g} = %g", spec.q, spec.r, product, spec.q, spec.r, path_norm)
        return EXIT_OK
