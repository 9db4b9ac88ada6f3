import argparse

from SwaptionPricer.Pricers.PricerManager import METHODS

################################################################################


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="swaption",
        description="Price European and Bermudan swaptions under the "
        "multi-factor Cheyette model with deep-BSDE solvers and "
        "Monte-Carlo / Longstaff-Schwartz benchmarks",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="print developer logs (training progress, regressions)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    # simulate
    simulate = commands.add_parser(
        "simulate", help="simulate factor paths and dump them"
    )
    _add_config(simulate)
    _add_output(simulate)
    simulate.add_argument(
        "-n",
        "--paths",
        type=int,
        default=1000,
        help="number of paths to simulate",
    )
    simulate.add_argument(
        "--binary",
        action="store_true",
        help="write a .npz archive instead of CSV",
    )

    # price
    price = commands.add_parser("price", help="price one experiment")
    _add_config(price)
    _add_output(price)
    _add_overrides(price)
    _add_jobs(price)

    # bench
    bench = commands.add_parser(
        "bench", help="compare several experiments in one table"
    )
    source = bench.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "-c",
        "--config",
        action="append",
        type=str,
        help="experiment file or bundled name; may be repeated",
    )
    source.add_argument(
        "--set",
        type=str,
        help="bundled set name or set file, e.g. 'table2'",
    )
    bench.add_argument(
        "--params-only",
        action="store_true",
        help="only count parameters, skip pricing",
    )
    bench.add_argument(
        "-s", "--seed", type=int, help="master seed of every entry"
    )
    bench.add_argument(
        "-r", "--runs", type=int, help="independent runs R of every entry"
    )
    _add_output(bench)
    _add_jobs(bench)

    # params
    params = commands.add_parser(
        "params", help="count trainable parameters of architectures"
    )
    params.add_argument(
        "-a",
        "--arch",
        action="append",
        required=True,
        type=str,
        help="architecture such as 'tnn:2x64' or 'dnn:24,27'; may be repeated",
    )
    params.add_argument(
        "--chi", type=int, default=2, help="MPO bond dimension"
    )
    params.add_argument(
        "--factors",
        type=int,
        default=3,
        help="model factors d; networks take 2d+1 inputs",
    )

    return parser.parse_args(argv)


def overrides_from(args: argparse.Namespace) -> dict:
    """Dotted config keys for the flags that were given."""
    flags = {
        "method": "method",
        "seed": "training.seed",
        "runs": "training.runs",
        "epochs": "training.epochs",
        "batch_size": "training.batch_size",
        "degree": "ls.degree",
    }
    overrides = {
        key: getattr(args, flag)
        for flag, key in flags.items()
        if getattr(args, flag, None) is not None
    }
    if getattr(args, "paths", None) is not None and args.command == "price":
        overrides["mc.n_paths"] = args.paths
        overrides["ls.n_paths"] = args.paths
    return overrides


################################################################################


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-c",
        "--config",
        required=True,
        type=str,
        help="experiment file or bundled name, e.g. 'eur_k000'",
    )
    parser.add_argument(
        "-s", "--seed", type=int, help="master seed (training.seed)"
    )


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-o",
        "--out-dir",
        type=str,
        default="results",
        help="directory for CSVs, manifest.json and run.log",
    )


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-m", "--method", choices=METHODS)
    parser.add_argument("-r", "--runs", type=int, help="independent runs R")
    parser.add_argument(
        "-d", "--degree", type=int, help="Longstaff-Schwartz regression degree"
    )
    parser.add_argument("-e", "--epochs", type=int, help="training epochs")
    parser.add_argument(
        "-b", "--batch-size", type=int, help="paths per training epoch"
    )
    parser.add_argument(
        "-n", "--paths", type=int, help="Monte-Carlo / regression paths"
    )


def _add_jobs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-j",
        "--jobs",
        type=int,
        default=1,
        help="worker processes for independent runs",
    )
