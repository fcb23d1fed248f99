"""Accuracy measurement and suite scoring."""

import logging
from typing import Iterable, Sequence, Union

import numpy as np

from boolearn.core.bits import popcount, tail_mask
from boolearn.core.errors import ReportError, WidthMismatchError
from boolearn.models.aig import Aig
from boolearn.models.aiger import read_aag
from boolearn.models.pla import Dataset, PlaFile, parse_pla, to_dataset
from boolearn.schemas.api import EvalRequest, EvalResponse
from boolearn.schemas.report import ModelReport, ParetoPoint, SuiteScore

logger = logging.getLogger(__name__)


def evaluate_dataset(aig: Aig, data: Dataset) -> float:
    """Word-parallel accuracy of ``aig`` on ``data``."""
    if aig.num_inputs != data.num_inputs:
        raise WidthMismatchError(
            f"circuit has {aig.num_inputs} inputs, samples have {data.num_inputs}"
        )
    if len(data) == 0:
        return 0.0
    out = aig.simulate(data.columns())
    correct = popcount(~(out ^ data.label_words()) & tail_mask(len(data)))
    return float(correct) / len(data)


def evaluate(aig: Aig, pla: Union[PlaFile, Dataset]) -> float:
    """Fraction of care-set rows where the circuit output equals the label."""
    data = pla if isinstance(pla, Dataset) else _checked_dataset(aig, pla)
    return evaluate_dataset(aig, data)


def evaluate_scalar(aig: Aig, pla: PlaFile) -> float:
    """Row-at-a-time reference for :func:`evaluate`."""
    data = _checked_dataset(aig, pla)
    if len(data) == 0:
        return 0.0
    hits = sum(aig.evaluate(row) == int(label) for row, label in zip(data.matrix, data.labels))
    return hits / len(data)


def _checked_dataset(aig: Aig, pla: PlaFile) -> Dataset:
    if pla.num_inputs != aig.num_inputs:
        raise WidthMismatchError(f"circuit has {aig.num_inputs} inputs, PLA has {pla.num_inputs}")
    return to_dataset(pla)


def pareto_frontier(points: Iterable[ParetoPoint]) -> list[ParetoPoint]:
    """Non-dominated points, by increasing size with strictly increasing accuracy."""
    frontier: list[ParetoPoint] = []
    for point in sorted(points, key=lambda p: (p.nodes, -p.accuracy)):
        if not frontier or point.accuracy > frontier[-1].accuracy:
            frontier.append(point)
    return frontier


def score_suite(reports: Sequence[ModelReport]) -> SuiteScore:
    """Contest means over benchmarks plus the accuracy/size frontier.

    Overfit is validation accuracy minus test accuracy.
    """
    if not reports:
        raise ReportError("cannot score an empty suite")
    missing = [r.benchmark or r.model_kind for r in reports if r.test_acc is None]
    if missing:
        raise ReportError(f"reports without test accuracy: {', '.join(missing)}")
    test = np.array([r.test_acc for r in reports])
    valid = np.array([r.valid_acc for r in reports])
    points = [
        ParetoPoint(accuracy=r.test_acc, nodes=r.and_nodes, benchmark=r.benchmark) for r in reports
    ]
    return SuiteScore(
        benchmarks=len(reports),
        mean_test_acc=float(test.mean()),
        mean_nodes=float(np.mean([r.and_nodes for r in reports])),
        mean_levels=float(np.mean([r.levels for r in reports])),
        mean_overfit=float((valid - test).mean()),
        pareto_points=pareto_frontier(points),
    )


class EvaluationController:
    """Controller for circuit evaluation requests."""

    def evaluate_circuit(self, request: EvalRequest) -> EvalResponse:
        """Parse both texts and measure the circuit."""
        aig = read_aag(request.aag)
        pla = parse_pla(request.pla)
        metrics = aig.metrics()
        accuracy = evaluate(aig, pla)
        logger.info("Evaluated circuit: accuracy %.4f, %d AND nodes", accuracy, metrics.and_nodes)
        return EvalResponse(accuracy=accuracy, and_nodes=metrics.and_nodes, levels=metrics.levels)
