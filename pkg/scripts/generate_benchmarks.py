"""
Script to generate a benchmark directory and a suite manifest for it.

Every benchmark gets ``<dir>/<label>/{train,valid,test}.pla``; ``<dir>/suite.json`` lists
them as PLA triples so ``boolearn suite --manifest <dir>/suite.json`` can run the lot.
"""

import logging
import os
from pathlib import Path

from boolearn.benchgen import SYMMETRIC_PRESETS, parse_benchmark
from boolearn.controllers.bench_controller import BenchController
from boolearn.core.config import configure_logging
from boolearn.core.rng import derive_seed
from boolearn.schemas.bench import DEFAULT_SAMPLES, SuiteEntry, SuiteManifest

configure_logging()
logger = logging.getLogger(__name__)

OUTPUT_DIR = Path(os.getenv("BOOLEARN_BENCH_DIR", "benchmarks"))
SEED = int(os.getenv("BOOLEARN_BENCH_SEED", "0"))
SAMPLES = int(os.getenv("BOOLEARN_BENCH_SAMPLES", str(DEFAULT_SAMPLES)))

# Arithmetic families at the word widths used by the contest suite
ARITHMETIC = [
    "adder_msb:k=8",
    "adder_msb:k=16",
    "adder_msb2:k=16",
    "comparator:k=10",
    "comparator:k=16",
    "multiplier_msb:k=8",
    "multiplier_mid:k=8",
]
PARITY = ["parity:k=16", "parity:k=32"]


def benchmark_names() -> list[str]:
    """Names of every benchmark the script writes."""
    return ARITHMETIC + PARITY + sorted(SYMMETRIC_PRESETS)


def generate(output_dir: Path, seed: int, samples: int) -> SuiteManifest:
    """Write every benchmark's splits and return the manifest describing them."""
    controller = BenchController()
    entries = []
    for index, name in enumerate(benchmark_names()):
        spec = parse_benchmark(name, derive_seed(seed, index), samples)
        label = name.replace(":", "_").replace("=", "")
        controller.write(spec, output_dir / label)
        entries.append(
            SuiteEntry(
                name=label,
                train=f"{label}/train.pla",
                valid=f"{label}/valid.pla",
                test=f"{label}/test.pla",
            )
        )
        logger.info("Wrote %s (%d inputs)", label, spec.num_inputs)
    return SuiteManifest(benchmarks=entries)


def main():
    """Main function to generate the benchmark suite."""
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    manifest = generate(OUTPUT_DIR, SEED, SAMPLES)
    path = OUTPUT_DIR / "suite.json"
    path.write_text(manifest.model_dump_json(indent=2, exclude_none=True) + "\n")
    logger.info("Suite manifest with %d benchmarks written to %s", len(manifest.benchmarks), path)


if __name__ == "__main__":
    main()
