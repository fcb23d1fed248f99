"""Benchmark generation and suite orchestration."""

import csv
import logging
from pathlib import Path

from boolearn.benchgen import parse_benchmark, sample_splits
from boolearn.controllers.evaluation_controller import score_suite
from boolearn.controllers.portfolio_controller import PortfolioResult, run_portfolio
from boolearn.core.config import get_settings
from boolearn.models.aiger import write_aag
from boolearn.models.pla import read_pla_file, write_pla
from boolearn.schemas.bench import BenchmarkSpec, BenchmarkSplits, SuiteEntry, SuiteManifest
from boolearn.schemas.report import ModelReport, SuiteScore

logger = logging.getLogger(__name__)

SPLIT_NAMES = ("train", "valid", "test")


def report_json(report: ModelReport) -> str:
    """Report JSON; ``wall_time`` is left out unless timing is enabled."""
    exclude = None if get_settings().report_timing else {"wall_time"}
    return report.model_dump_json(indent=2, exclude=exclude) + "\n"


def write_result(result: PortfolioResult, out_dir: Path) -> None:
    """Write ``report.json`` and ``circuit.aag`` into ``out_dir``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "circuit.aag").write_text(write_aag(result.aig))
    (out_dir / "report.json").write_text(report_json(result.report))
    if result.trace:
        lines = (record.model_dump_json() for record in result.trace)
        (out_dir / "trace.jsonl").write_text("\n".join(lines) + "\n")


class BenchController:
    """Controller for benchmark generation."""

    def generate(self, spec: BenchmarkSpec) -> BenchmarkSplits:
        """PLA texts of the three splits."""
        train, valid, test = sample_splits(spec)
        logger.info("Generated %s with %d inputs", spec.name, spec.num_inputs)
        return BenchmarkSplits(
            name=spec.name,
            num_inputs=spec.num_inputs,
            train=write_pla(train),
            valid=write_pla(valid),
            test=write_pla(test),
        )

    def write(self, spec: BenchmarkSpec, out_dir: Path) -> list[Path]:
        """Write the splits as PLA files."""
        splits = self.generate(spec)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for split in SPLIT_NAMES:
            path = out_dir / f"{split}.pla"
            path.write_text(getattr(splits, split))
            paths.append(path)
        return paths


class SuiteController:
    """Runs the portfolio over every manifest entry and scores the suite."""

    def _load(self, entry: SuiteEntry, base_dir: Path):
        if entry.benchmark is not None:
            spec = parse_benchmark(entry.benchmark, entry.seed, entry.samples_per_split)
            return sample_splits(spec)
        paths = [entry.train, entry.valid, entry.test]
        return tuple(read_pla_file(base_dir / p) if p else None for p in paths)

    def run(
        self, manifest: SuiteManifest, out_dir: Path, base_dir: Path = Path(".")
    ) -> SuiteScore:
        out_dir.mkdir(parents=True, exist_ok=True)
        reports = []
        for index, entry in enumerate(manifest.benchmarks):
            label = entry.label
            logger.info("Suite benchmark %d of %d: %s", index + 1, len(manifest.benchmarks), label)
            train, valid, test = self._load(entry, base_dir)
            result = run_portfolio(train, valid, manifest.config, test, label)
            write_result(result, out_dir / label)
            reports.append(result.report)

        score = score_suite(reports)
        (out_dir / "suite.json").write_text(score.model_dump_json(indent=2) + "\n")
        with open(out_dir / "pareto.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["benchmark", "accuracy", "and_nodes"])
            for point in score.pareto_points:
                writer.writerow([point.benchmark, f"{point.accuracy:.6f}", point.nodes])
        logger.info(
            "Suite finished: mean test accuracy %.4f, mean nodes %.1f",
            score.mean_test_acc,
            score.mean_nodes,
        )
        return score


def load_manifest(path: Path) -> SuiteManifest:
    """Read and validate a suite manifest."""
    return SuiteManifest.model_validate_json(Path(path).read_text())
