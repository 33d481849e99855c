import argparse
import dataclasses
import math
import sys

from pathgauge.core.exceptions import NonPositiveGamma, ParseError
from pathgauge.models.bound_models import ArchMeta
from pathgauge.models.norm_models import NormSpec
from pathgauge.scripts.command import EXIT_OK, EXIT_USAGE, Command, logger, positive_float
from pathgauge.services import (
    bound_services,
    forward_services,
    graph_services,
    norm_services,
    transform_services,
)

L1 = NormSpec(q=1.0, r=1.0)


def meta_type(text: str) -> ArchMeta:
    try:
        return ArchMeta.parse(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error))


def loss_type(text: str) -> float:
    try:
        return bound_services.loss_constant_from_flag(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error))


def gamma_type(text: str):
    return None if text == "auto" else positive_float(text)


def add_sigma_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--sigma-variant", choices=bound_services.SIGMA_VARIANTS, default="sup_norm"
    )
    parser.add_argument(
        "--no-bias", action="store_true", help="use d_in instead of d_in + 1 inside C"
    )


def prepare_network(arch, params, drop_identity: bool):
    """Checks the null pooling biases and optionally merges identity neurons
    so that they do not count in the depth."""
    bound_services.check_pool_biases(arch, params)
    if drop_identity:
        arch, params, bias_map = transform_services.absorb_biases(arch, params)
        arch, params = transform_services.eliminate_identity_neurons(arch, params)
        # the constant input is accounted for by with_bias
        arch, params = transform_services.release_bias_input(arch, params, bias_map)
    return arch, params



class Bound(Command):
    name = "bound"
    help = "Generalization bound and its constants"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", nargs="?", help="Network file (YAML)")
        parser.add_argument("--loss", type=loss_type, default="xent", help="xent, margin:GAMMA or const:L")
        parser.add_argument("--data", help="CSV training inputs, for sigma and n")
        parser.add_argument("--meta", type=meta_type, help="D,P,K,M,din,dout without a network")
        parser.add_argument("--resnet", help="ImageNet ResNet preset: 18, 34, 50, 101 or 152")
        parser.add_argument("--B", type=positive_float, help="largest L-infinity norm of the inputs")
        parser.add_argument("--n", type=int, help="number of training samples")
        parser.add_argument(
            "--drop-identity", action="store_true", help="merge identity neurons before measuring depth"
        )
        add_sigma_arguments(parser)

    def execute(self, args, report) -> int:
        with_bias = not args.no_bias
        L = args.loss
        B, n = args.B, args.n
        meta, applicable = None, True

        if args.resnet:
            preset = bound_services.resnet_meta(args.resnet, with_bias)
            meta = preset.meta
            B = B if B is not None else preset.B
            n = n if n is not None else preset.n
            report.results["resnet"] = preset.name
        elif args.meta is not None:
            meta = dataclasses.replace(args.meta, with_bias=with_bias)

        arch = params = None
        if args.network:
            arch, params = self.load_network(args.network, report)
            arch, params = prepare_network(arch, params, args.drop_identity)
            if meta is None:
                meta = ArchMeta.from_architecture(arch, with_bias)
                applicable = graph_services.sharpened_applicable(arch)
        if meta is None:
            sys.stderr.write("bound: give a network, --meta or --resnet\n")
            return EXIT_USAGE

        C = bound_services.bound_constant_C(meta)
        C_sharpened = bound_services.bound_constant_C_sharpened(meta, applicable)
        report.results["meta"] = dataclasses.asdict(meta)
        report.results.update(
            {
                "C": C,
                "C_sharpened": C_sharpened,
                "C_sharpened_status": "heuristic" if C_sharpened is not None else "not-applicable",
                "L": L,
            }
        )
        if B is not None and n:
            report.results["scaled_C"] = bound_services.scaled_constant(C, B, n)
            if C_sharpened is not None:
                report.results["scaled_C_sharpened"] = bound_services.scaled_constant(C_sharpened, B, n)

        if arch is not None:
            path_norm = norm_services.path_norm_fast(arch, params, L1)
            if args.data:
                data = self.load_dataset(args.data, report, d_in=arch.d_in)
                sigma = bound_services.sigma_estimate(data.X, args.sigma_variant)
                bound_report = bound_services.build_report(
                    sigma, data.n, meta, L, path_norm, sharpened_applicable=applicable
                )
                report.results.update(bound_report.as_dict())
            else:
                path_norm_l1, in_log10 = bound_services.bound_path_norm(path_norm)
                scaled = report.results.get("scaled_C")
                if in_log10:
                    report.results["log10_pathnorm_l1"] = path_norm_l1
                    if scaled is not None:
                        factor = scaled * L
                        report.results["log10_bound"] = (
                            math.log10(factor) + path_norm_l1 if factor > 0 else -math.inf
                        )
                else:
                    report.results["pathnorm_l1"] = path_norm_l1
                    if scaled is not None:
                        report.results["bound"] = scaled * L * path_norm_l1
                report.results["overflow"] = in_log10

        logger.info(
            "C = %.4g, C_sharpened = %s, L = %.4g",
            C,
            "n/a" if C_sharpened is None else f"{C_sharpened:.4g}",
            L,
        )
        if "scaled_C" in report.results:
            logger.info("4BC/sqrt(n) = %.2g", report.results["scaled_C"])
        return EXIT_OK


class MarginBoundCommand(Command):
    name = "margin-bound"
    help = "Margin-based bound on the misclassification probability"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("network", help="Network file (YAML)")
        parser.add_argument("--gamma", type=gamma_type, required=True, help="margin scale, or auto")
        parser.add_argument("--data", required=True, help="CSV training inputs with a label column")
        add_sigma_arguments(parser)

    def execute(self, args, report) -> int:
        arch, params = self.load_network(args.network, report)
        bound_services.check_pool_biases(arch, params)
        data = self.load_dataset(args.data, report, d_in=arch.d_in, d_out=arch.d_out)
        if data.labels is None:
            raise ParseError("the dataset needs a final label column", field="label")

        outputs = forward_services.batch_realize(arch, params, data.X)
        suggestion = bound_services.suggest_gamma(outputs, data.labels)
        gamma = args.gamma if args.gamma is not None else suggestion.gamma
        if not gamma > 0:
            raise NonPositiveGamma(f"the suggested gamma {gamma:g} is not usable")

        meta = ArchMeta.from_architecture(arch, with_bias=not args.no_bias)
        sigma = bound_services.sigma_estimate(data.X, args.sigma_variant)
        C = bound_services.bound_constant_C(meta)
        path_norm_l1, in_log10 = bound_services.bound_path_norm(
            norm_services.path_norm_fast(arch, params, L1)
        )
        result = bound_services.margin_bound(
            outputs, data.labels, gamma, sigma, data.n, C, path_norm_l1, log10=in_log10
        )
        report.results.update(
            {
                "sigma": sigma,
                "sigma_kind": "empirical",
                "n": data.n,
                "C": C,
                "log10_pathnorm_l1" if in_log10 else "pathnorm_l1": path_norm_l1,
                "overflow": in_log10,
                "top1_error": suggestion.top1_error,
                "suggested_gamma": suggestion.gamma,
                "margin_bound": result.as_dict(),
            }
        )
        if in_log10:
            logger.info("log10 P(misclassified) <= %.4g", result.total)
        else:
            logger.info("P(misclassified) <= %.4g + %.4g = %.4g", result.term1, result.term2, result.total)
        return EXIT_OK
