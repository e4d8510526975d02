"""Command line interface."""

from __future__ import annotations

import argparse
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from rdapprox.config import DEFAULT_CONFIG_PATH, RunConfig, load_config, parse_float_list
from rdapprox.constants import MODES
from rdapprox.errors import RdApproxError
from rdapprox.pipeline.classify import cmd_compare, cmd_eval, cmd_train
from rdapprox.pipeline.preprocess import cmd_pca
from rdapprox.pipeline.rdcurve import cmd_alpha, cmd_bounds, cmd_rdcurve

Command = Callable[[RunConfig], int]


def _configure_logging(debug: bool) -> None:
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(message)s")


def _int_list(text: str) -> List[int]:
    return [int(value) for value in parse_float_list(text)]


def _overrides(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """Flags that were given, as a nested mapping mirroring the TOML sections."""

    def get(name: str) -> Any:
        return getattr(args, name, None)

    return {
        "rd": {
            "delta": get("delta"),
            "grid_points": get("grid"),
            "grid_spacing": "linear" if get("linear_grid") else None,
            "bits": get("bits"),
        },
        "pca": {
            "sweep": tuple(_int_list(get("pca_sweep"))) if get("pca_sweep") else None,
        },
        "train": {
            "epsilon_sq": get("eps2"),
            "eta": get("eta"),
            "lambda_u": get("lambda_u"),
            "delta": get("delta"),
            "layer_count": get("layers"),
            "mode": get("mode"),
            "ns_energy_threshold": get("ns_energy"),
            "ns_rank": get("ns_rank"),
        },
        "synthetic": {"seed": get("seed")},
        "inputs": {
            "eigenvalues": parse_float_list(get("eigenvalues")) if get("eigenvalues") else None,
            "cov": get("cov"),
            "data": get("data"),
            "labels": get("labels"),
            "test_data": get("test_data"),
            "test_labels": get("test_labels"),
            "model": get("model"),
            "synthetic": get("synthetic"),
            "random_spectra": get("random_spectra"),
            "similarity": get("similarity"),
            "eps2_sweep": parse_float_list(get("eps2_sweep")) if get("eps2_sweep") else None,
            "depth_sweep": get("depth_sweep"),
            "pca_ratio_sweep": (
                parse_float_list(get("pca_ratio_sweep")) if get("pca_ratio_sweep") else None
            ),
        },
        "output": {"out": get("out")},
    }


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(Path(args.config), _overrides(args))
    # Either selector on the command line replaces whatever the file chose
    if args.pca_dim is not None:
        config = replace(config, pca=replace(config.pca, dim=args.pca_dim, ratio=None))
    elif args.pca_ratio is not None:
        config = replace(config, pca=replace(config.pca, dim=None, ratio=args.pca_ratio))
    return config


def _runner(command: Command) -> Callable[[argparse.Namespace], int]:
    def run(args: argparse.Namespace) -> int:
        _configure_logging(args.debug)
        try:
            return command(resolve_config(args))
        except (RdApproxError, OSError) as exc:
            logging.error(f"{type(exc).__name__}: {exc}")
            return 1

    return run


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=str(DEFAULT_CONFIG_PATH), help="path to config TOML")
    common.add_argument("--debug", action="store_true", help="enable debug logging")
    common.add_argument("--out", help="output directory (default <root_dir>/<command>)")
    common.add_argument("--seed", type=int, help="seed for synthetic data and random spectra")

    source = common.add_argument_group("inputs")
    source.add_argument("--eigenvalues", help="comma-separated covariance eigenvalues")
    source.add_argument("--cov", help="comma-separated n x n covariance file")
    source.add_argument("--data", help="sample file: IDX images or one sample per CSV row")
    source.add_argument("--labels", help="IDX labels or one integer per line")
    source.add_argument("--test-data", help="evaluation samples")
    source.add_argument("--test-labels", help="evaluation labels")
    source.add_argument("--model", help="trained network file")
    source.add_argument(
        "--synthetic", action="store_true", default=None, help="use the [synthetic] dataset"
    )

    rd = common.add_argument_group("rate-distortion")
    rd.add_argument("--grid", type=int, help="number of distortion grid points")
    rd.add_argument("--delta", type=float, help="bisection precision for alpha*")
    rd.add_argument("--linear-grid", action="store_true", default=None, help="linear D grid")
    rd.add_argument("--bits", action="store_true", default=None, help="report rates in bits")
    rd.add_argument("--random-spectra", type=int, help="audit N random spectra instead")

    pca = common.add_argument_group("pca")
    selector = pca.add_mutually_exclusive_group()
    selector.add_argument("--pca-dim", type=int, help="keep the top n components")
    selector.add_argument("--pca-ratio", type=float, help="keep a cumulative variance ratio")
    pca.add_argument("--pca-sweep", help="comma-separated dims for the condition sweep")

    net = common.add_argument_group("network")
    net.add_argument("--eps2", type=float, help="distortion budget epsilon^2")
    net.add_argument("--eta", type=float, help="step size")
    net.add_argument("--lambda-u", type=float, help="softmax uniformity at test time")
    net.add_argument("--layers", type=int, help="number of layers L")
    net.add_argument("--mode", choices=MODES, help="ar (adaptive alpha) or fixed (alpha = 1)")
    net.add_argument("--ns-energy", type=float, help="subspace energy threshold")
    net.add_argument("--ns-rank", type=int, help="fixed subspace rank (0 = energy threshold)")
    net.add_argument(
        "--similarity", action="store_true", default=None, help="write the similarity table"
    )
    net.add_argument("--eps2-sweep", help="comma-separated epsilon^2 values for compare")
    net.add_argument(
        "--depth-sweep", action="store_true", default=None, help="compare accuracy per layer"
    )
    net.add_argument("--pca-ratio-sweep", help="comma-separated PCA ratios P for compare")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdapprox")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    commands = [
        ("rdcurve", "tabulate R, R0, R1 and R_alpha* over a D grid", cmd_rdcurve),
        ("alpha", "find alpha* by bisection", cmd_alpha),
        ("bounds", "audit the approximation-error bounds", cmd_bounds),
        ("pca", "fit PCA and sweep the condition number", cmd_pca),
        ("train", "train an AR-ReduNet (or fixed-alpha ReduNet)", cmd_train),
        ("eval", "evaluate a trained network", cmd_eval),
        ("compare", "adaptive vs fixed alpha over an epsilon^2 sweep", cmd_compare),
    ]
    for name, help_text, command in commands:
        sub = subparsers.add_parser(name, help=help_text, parents=[common])
        sub.set_defaults(func=_runner(command))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
