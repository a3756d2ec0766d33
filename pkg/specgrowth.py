#!/usr/bin/env python
# -*- coding:utf-8 -*-

from typing import Dict, Any
import os, sys
from pprint import pprint
import argparse
import logging

wd = os.path.dirname(os.path.abspath(__file__))
if wd not in sys.path:
    sys.path.insert(0, wd)

from graph.exceptions import SpecGrowthError
from config_files.reference_families import examples
from report.config import RunConfig, parse_window, parse_radii
from report.pipeline import cmd_generate, cmd_metric, cmd_growth, cmd_bounds, cmd_spectrum, cmd_analyze
from report.verify import cmd_verify, SUITES
from report.serialization import write_json, emit_csv, error_line

_DEFAULT_CONFIG = os.path.join(wd, "config_files", "template_analysis.py")

SPHERES_HELP = "sphere-size profile. poly:k -> s_r=(r+1)^k, const:c -> s_0=1 and s_r=c, geom:q -> s_r=q^r, " \
               "regular:d -> s_r=d(d-1)^(r-1), list:[a,b,...] -> explicit sizes with the last one repeated."


def setup_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s: %(message)s",
        datefmt="%H:%M:%S",
    )


def parse_args(argv=None):

    def check_window(value: str):
        try:
            parse_window(value)
        except SpecGrowthError as e:
            raise argparse.ArgumentTypeError(e.message)
        return value

    def check_radii(value: str):
        try:
            return parse_radii(value)
        except SpecGrowthError as e:
            raise argparse.ArgumentTypeError(e.message)

    def check_positive(value: str):
        number = float(value)
        if not number > 0.0:
            raise argparse.ArgumentTypeError(f"invalid value was specified: {value}")
        return number

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config_file", "-c", required=False, type=str, default=_DEFAULT_CONFIG,
                        help="path to the config file (*.py) defining `analysis_parameters`.")
    common.add_argument("--graph", required=False, type=str, default=None,
                        help="graph JSON file. DEFAULT: the generator configured in the config file.")
    common.add_argument("--allow-disconnected", required=False, action="store_true",
                        help="accept a disconnected graph file and report every component.")
    common.add_argument("--example", required=False, type=str, choices=sorted(examples.keys()), default=None,
                        help="named reference family used as the generator.")
    common.add_argument("--spheres", required=False, type=str, default=None, help=SPHERES_HELP)
    common.add_argument("--radius", required=False, type=int, default=None, help="truncation radius of the generator.")
    common.add_argument("--measure-rule", required=False, type=str, choices=("unit", "weighted-degree"),
                        default=None, help="vertex measure of the generated family.")
    common.add_argument("--metric", required=False, type=str, choices=("natural", "huang"), default=None,
                        help="edge length rule.")
    common.add_argument("--convention", required=False, type=str, choices=("half", "full"), default=None,
                        help="normalization of the intrinsic-metric inequality.")
    common.add_argument("--root", required=False, type=int, default=None, help="root vertex of the metric.")
    common.add_argument("--rmax", required=False, type=check_positive, default=None, help="largest ball radius.")
    common.add_argument("--window", required=False, type=check_window, default=None,
                        help="growth window LO:HI. DEFAULT: [r_max/2, r_max]")
    common.add_argument("--method", required=False, type=str, choices=("pointwise", "secant"), default=None,
                        help="growth rate estimator.")
    common.add_argument("--alpha-grid", required=False, type=str, default=None,
                        help="test-function exponents: auto | lin:BEGIN:END:N | geom:BEGIN:END:N | v1,v2,...")
    common.add_argument("--radii", required=False, type=check_radii, default=None,
                        help="exhaustion radii, comma separated.")
    common.add_argument("--tol", required=False, type=check_positive, default=None,
                        help="relative residual tolerance of the eigensolver.")
    common.add_argument("--seed", required=False, type=int, default=None, help="random seed.")
    common.add_argument("--n-jobs", required=False, type=int, default=None, help="worker threads.")
    common.add_argument("--out", "-o", required=False, type=str, default=None,
                        help="output JSON file. DEFAULT: stdout")
    common.add_argument("--emit-csv", required=False, type=str, default=None,
                        help="directory receiving the CSV tables of the report.")
    common.add_argument("--verbose", action="store_true", help="show verbose output.")

    parser = argparse.ArgumentParser(description="volume growth and the bottom of the spectrum of weighted graphs.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    parser_generate = subparsers.add_parser("generate", parents=[common], help="write a family truncation as graph JSON.")
    parser_generate.add_argument("family", type=str, choices=("antitree", "tree", "line"), nargs="?", default=None,
                                 help="family kind. DEFAULT: the configured family")
    parser_generate.add_argument("--branching", required=False, type=int, default=None,
                                 help="tree branching number; shorthand for --spheres geom:BRANCHING.")
    parser_generate.add_argument("--depth", required=False, type=int, default=None,
                                 help="tree depth; shorthand for --radius.")

    subparsers.add_parser("metric", parents=[common], help="distances, adaptedness and jump size.")
    subparsers.add_parser("growth", parents=[common], help="ball table and growth rate estimates.")
    parser_bounds = subparsers.add_parser("bounds", parents=[common], help="Brooks-type bounds.")
    parser_bounds.add_argument("--mu", required=False, type=float, default=None,
                               help="explicit growth rate; skips the graph.")
    parser_bounds.add_argument("--mu-tilde", required=False, type=float, default=None,
                               help="explicit minimal growth rate.")
    parser_bounds.add_argument("--delta", required=False, type=float, default=None, help="lower jump size in [0,1].")
    parser_bounds.add_argument("--halved", action="store_true", help="bounds of the full convention.")
    subparsers.add_parser("spectrum", parents=[common], help="variational bound, exhaustion and certificates.")
    subparsers.add_parser("analyze", parents=[common], help="full pipeline report.")
    parser_verify = subparsers.add_parser("verify", parents=[common], help="property suites.")
    parser_verify.add_argument("--suite", required=False, action="append", default=None,
                               choices=[suite.name for suite in SUITES], help="run only the given suite(s).")

    args = parser.parse_args(argv)
    return args


def config_overrides(args) -> Dict[str, Any]:
    """
    maps command-line flags to config key paths. unset flags map to None and are not applied.
    """
    dict_overrides = {
        "metric.rule": args.metric,
        "metric.convention": args.convention,
        "metric.root": args.root,
        "growth.r_max": args.rmax,
        "growth.window": args.window,
        "growth.method": args.method,
        "spectral.alpha_grid": args.alpha_grid,
        "spectral.radii": args.radii,
        "spectral.tol": args.tol,
        "runtime.seed": args.seed,
        "runtime.n_jobs": args.n_jobs
    }
    if args.graph is not None:
        dict_overrides.update({"graph.source": "file", "graph.path": args.graph})
    if args.allow_disconnected:
        dict_overrides["graph.allow_disconnected"] = True
    if args.example is not None:
        cfg_example = examples[args.example]
        dict_overrides.update({"graph.source": "generator", "graph.family": cfg_example["family"],
                               "graph.spheres": cfg_example["spheres"],
                               "graph.measure_rule": cfg_example["measure_rule"]})
    spheres, radius, family = args.spheres, args.radius, getattr(args, "family", None)
    if getattr(args, "branching", None) is not None:
        spheres = f"geom:{args.branching}"
        family = "tree" if family is None else family
    if getattr(args, "depth", None) is not None:
        radius = args.depth
    if family is not None or spheres is not None or radius is not None:
        dict_overrides["graph.source"] = "generator"
    dict_overrides.update({"graph.family": family if family is not None else dict_overrides.get("graph.family"),
                           "graph.spheres": spheres if spheres is not None else dict_overrides.get("graph.spheres"),
                           "graph.radius": radius,
                           "graph.measure_rule": args.measure_rule if args.measure_rule is not None
                           else dict_overrides.get("graph.measure_rule")})
    if args.command == "bounds":
        dict_overrides.update({"bounds.mu": args.mu, "bounds.mu_tilde": args.mu_tilde, "bounds.delta": args.delta,
                               "bounds.halved": True if args.halved else None})
    return dict_overrides


def run(args) -> int:
    config = RunConfig.from_file(args.config_file)
    config.override(config_overrides(args))
    if args.verbose:
        print("\n=== configurations ===", file=sys.stderr)
        pprint(config.to_dict(), stream=sys.stderr)

    with_tables = args.emit_csv is not None
    dict_tables = {}
    if args.command == "generate":
        path_out = args.out if args.out is not None else "graph.json"
        result = cmd_generate(config, path_out)
        write_json(result, stream=sys.stdout)
        return 0
    elif args.command == "metric":
        result, dict_tables = cmd_metric(config, with_tables=with_tables)
    elif args.command == "growth":
        result, dict_tables = cmd_growth(config, with_tables=with_tables)
    elif args.command == "bounds":
        result, dict_tables = cmd_bounds(config, with_tables=with_tables)
    elif args.command == "spectrum":
        result, dict_tables = cmd_spectrum(config, with_tables=with_tables)
    elif args.command == "analyze":
        result, dict_tables = cmd_analyze(config, with_tables=with_tables)
    elif args.command == "verify":
        result = cmd_verify(config, suites=args.suite)
        result["seed"] = config.seed
    else:
        raise NotImplementedError(f"unsupported command: {args.command}")

    write_json(result, path=args.out, stream=sys.stdout)
    if with_tables and len(dict_tables) > 0:
        lst_paths = emit_csv(args.emit_csv, dict_tables)
        logging.getLogger(__name__).info(f"{len(lst_paths)} csv tables written to {args.emit_csv}")
    return 0


def main(argv=None) -> int:

    args = parse_args(argv)
    setup_logging(args.verbose)

    if args.verbose:
        print("\n=== arguments ===", file=sys.stderr)
        cfg_args = {arg: getattr(args, arg) for arg in vars(args)}
        pprint(cfg_args, stream=sys.stderr)

    try:
        return run(args)
    except SpecGrowthError as e:
        sys.stderr.write(error_line(e) + "\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
