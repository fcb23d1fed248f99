"""Command-line entry point: ``boolearn learn|bench|eval|suite|serve``."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from boolearn.benchgen import parse_benchmark
from boolearn.controllers.bench_controller import (
    BenchController,
    SuiteController,
    load_manifest,
    write_result,
)
from boolearn.controllers.evaluation_controller import evaluate
from boolearn.controllers.portfolio_controller import run_portfolio
from boolearn.core.config import configure_logging, get_settings
from boolearn.core.errors import BoolearnError, ModelConfigError
from boolearn.models.aiger import read_aag
from boolearn.models.pla import read_pla_file
from boolearn.schemas.bench import DEFAULT_SAMPLES, BenchmarkSpec, Family
from boolearn.schemas.portfolio import PortfolioConfig

logger = logging.getLogger(__name__)

EXIT_ERROR = 2


def _csv(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _counts(value: str) -> list[int]:
    return [int(item) for item in _csv(value)]


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per action."""
    parser = argparse.ArgumentParser(
        prog="boolearn",
        description="Learn Boolean functions from PLA care sets and compile them to AIGs.",
    )
    parser.add_argument("--log-level", default=None, help="Override BOOLEARN_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="Train the portfolio and write circuit + report")
    learn.add_argument("--train", type=Path, required=True)
    learn.add_argument("--valid", type=Path, required=True)
    learn.add_argument("--test", type=Path, default=None)
    learn.add_argument("--out", type=Path, required=True, help="Output directory")
    learn.add_argument("--config", type=Path, default=None, help="PortfolioConfig JSON file")
    learn.add_argument("--budget", type=int, default=None)
    learn.add_argument("--models", type=_csv, default=None, help="e.g. dt,fringe,rf,sym")
    learn.add_argument("--seed", type=int, default=None)
    learn.add_argument("--resplit", choices=["none", "holdout80", "fold3"], default=None)
    learn.add_argument("--rf-trees", type=_counts, default=None, help="Odd forest sizes")
    learn.add_argument("--cgp-generations", type=int, default=None)
    learn.add_argument("--name", default="", help="Benchmark name for the report")

    bench = sub.add_parser("bench", help="Sample train/valid/test PLAs for a benchmark")
    bench.add_argument("name", nargs="?", help="Preset or 'family:k=K' / 'symmetric:sig=BITS'")
    bench.add_argument("--family", choices=[f.value for f in Family], default=None)
    bench.add_argument("--k", type=int, default=None)
    bench.add_argument("--signature", default=None, help="Symmetric value string")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    bench.add_argument("--out", type=Path, required=True)

    ev = sub.add_parser("eval", help="Accuracy of an AIGER circuit on a PLA")
    ev.add_argument("--aig", type=Path, required=True)
    ev.add_argument("--pla", type=Path, required=True)

    suite = sub.add_parser("suite", help="Run the portfolio over a suite manifest")
    suite.add_argument("--manifest", type=Path, required=True)
    suite.add_argument("--out", type=Path, required=True)

    serve = sub.add_parser("serve", help="Start the HTTP API")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _portfolio_config(args: argparse.Namespace) -> PortfolioConfig:
    config = (
        PortfolioConfig.model_validate_json(args.config.read_text())
        if args.config
        else PortfolioConfig()
    )
    updates = {
        "budget": args.budget,
        "models": args.models,
        "seed": args.seed,
        "resplit": args.resplit,
        "rf_tree_counts": args.rf_trees,
    }
    data = config.model_dump()
    data.update({key: value for key, value in updates.items() if value is not None})
    if args.cgp_generations is not None:
        data["cgp"]["generations"] = args.cgp_generations
    return PortfolioConfig.model_validate(data)


def cmd_learn(args: argparse.Namespace) -> int:
    """Train a portfolio and write the report and circuit."""
    config = _portfolio_config(args)
    test = read_pla_file(args.test) if args.test else None
    result = run_portfolio(
        read_pla_file(args.train), read_pla_file(args.valid), config, test, args.name
    )
    write_result(result, args.out)
    report = result.report
    print(
        f"{report.model_kind}: valid {report.valid_acc:.4f}, "
        f"{report.and_nodes} AND nodes, {report.levels} levels"
    )
    return 0


def _bench_spec(args: argparse.Namespace) -> BenchmarkSpec:
    if args.name:
        return parse_benchmark(args.name, args.seed, args.samples)
    if args.family is None:
        raise ModelConfigError("bench needs a benchmark name or --family")
    family = Family(args.family)
    k = args.k
    if family == Family.SYMMETRIC and args.signature and k is None:
        k = len(args.signature) - 1
    if k is None:
        raise ModelConfigError("bench --family needs --k")
    return BenchmarkSpec(
        family=family,
        k=k,
        seed=args.seed,
        samples_per_split=args.samples,
        signature=args.signature,
    )


def cmd_bench(args: argparse.Namespace) -> int:
    """Write the three PLA splits of a benchmark."""
    spec = _bench_spec(args)
    for path in BenchController().write(spec, args.out):
        print(path)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    """Print the accuracy and size of a circuit on a PLA."""
    aig = read_aag(args.aig.read_text())
    accuracy = evaluate(aig, read_pla_file(args.pla))
    metrics = aig.metrics()
    print(f"accuracy {accuracy:.6f} and_nodes {metrics.and_nodes} levels {metrics.levels}")
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    """Run every benchmark of a manifest."""
    manifest = load_manifest(args.manifest)
    score = SuiteController().run(manifest, args.out, base_dir=args.manifest.parent)
    print(score.model_dump_json(indent=2))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("boolearn.main:app", host=args.host, port=args.port)
    return 0


COMMANDS = {
    "learn": cmd_learn,
    "bench": cmd_bench,
    "eval": cmd_eval,
    "suite": cmd_suite,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line; returns the exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper() if args.log_level else get_settings().log_level)
    try:
        return COMMANDS[args.command](args)
    except BoolearnError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
