"""Portfolio training and model selection under the AND-node budget."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from boolearn import compiler
from boolearn.controllers.evaluation_controller import evaluate_dataset
from boolearn.core.config import get_settings
from boolearn.core.errors import ContradictionError, EmptyDatasetError, WidthMismatchError
from boolearn.core.rng import derive_seed, make_rng
from boolearn.learners import cgp, dtree, espresso, forest, lutnet
from boolearn.models.aig import Aig, approximate_to_budget
from boolearn.models.aiger import write_aag
from boolearn.models.pla import Dataset, PlaFile, parse_pla, to_dataset
from boolearn.schemas.api import LearnRequest, LearnResponse
from boolearn.schemas.params import LutParams, LutSearchParams
from boolearn.schemas.portfolio import PortfolioConfig
from boolearn.schemas.report import CandidateReport, EvolutionRecord, ModelReport

logger = logging.getLogger(__name__)

HOLDOUT_SHARE = 0.8
RESPLIT_STREAM = 1_000_003
APPROX_STREAM = 1

# (train, valid, seed) -> circuit, or None when the candidate does not apply
Builder = Callable[[Dataset, Dataset, int], Optional[Aig]]


class PortfolioResult(NamedTuple):
    aig: Aig
    report: ModelReport
    candidates: list[CandidateReport]
    trace: list[EvolutionRecord]


@dataclass
class Candidate:
    kind: str
    order: int
    fold: int
    aig: Aig
    train_acc: float
    valid_acc: float
    compiled_nodes: int
    approximated: bool
    seed: int

    @property
    def and_nodes(self) -> int:
        return self.aig.metrics().and_nodes

    def report(self) -> CandidateReport:
        metrics = self.aig.metrics()
        return CandidateReport(
            model_kind=self.kind,
            train_acc=self.train_acc,
            valid_acc=self.valid_acc,
            and_nodes=metrics.and_nodes,
            levels=metrics.levels,
            approximated=self.approximated,
            compiled_nodes=self.compiled_nodes,
        )


def detect_symmetric(data: Dataset, min_support: Optional[int] = None) -> Optional[str]:
    """Signature of a symmetric function consistent with ``data``, if there is one.

    Every popcount group must be label-pure and at least ``min_support`` distinct
    popcounts (default half of ``n + 1``, rounded up) must be observed. Unobserved
    counts copy the nearest observed count, the lower one on ties.
    """
    if len(data) == 0:
        return None
    n = data.num_inputs
    counts = data.matrix.sum(axis=1)
    totals = np.bincount(counts, minlength=n + 1)
    ones = np.bincount(counts, weights=data.labels, minlength=n + 1)
    if np.any((ones > 0) & (ones < totals)):
        return None
    observed = np.flatnonzero(totals)
    required = min_support if min_support is not None else math.ceil((n + 1) / 2)
    if observed.size < required:
        return None
    signature = []
    for count in range(n + 1):
        nearest = observed[int(np.argmin(np.abs(observed - count)))]
        signature.append("1" if ones[nearest] > 0 else "0")
    return "".join(signature)


def search_lutnet(
    train: Dataset, valid: Dataset, params: LutSearchParams, seed: int
) -> lutnet.LutNetwork:
    """Grow layers, width or k while validation accuracy improves."""

    def fit(candidate: LutParams) -> tuple[lutnet.LutNetwork, float]:
        net = lutnet.train_lutnet(train, candidate)
        return net, lutnet.evaluate_lutnet(net, valid)

    current = params.start.model_copy(update={"seed": seed})
    net, accuracy = fit(current)
    for step in range(params.max_steps):
        neighbours = []
        if current.layers < params.max_layers:
            neighbours.append(current.model_copy(update={"layers": current.layers + 1}))
        if current.luts_per_layer * 2 <= params.max_luts_per_layer:
            wider = current.luts_per_layer * 2
            neighbours.append(current.model_copy(update={"luts_per_layer": wider}))
        if current.k < params.max_k:
            neighbours.append(current.model_copy(update={"k": current.k + 1}))
        if not neighbours:
            break
        scored = [(fit(p), p) for p in neighbours]
        (best_net, best_acc), best_params = max(scored, key=lambda item: item[0][1])
        if best_acc <= accuracy:
            break
        net, accuracy, current = best_net, best_acc, best_params
        logger.debug(
            "LUT search step %d: k=%d layers=%d width=%d valid %.4f",
            step + 1,
            current.k,
            current.layers,
            current.luts_per_layer,
            accuracy,
        )
    return net


@dataclass
class _Plan:
    """Candidate builders in fixed model order."""

    config: PortfolioConfig
    builders: list[tuple[str, Builder]] = field(default_factory=list)

    def add(self, kind: str, builder: Builder) -> None:
        self.builders.append((kind, builder))


def _plan(config: PortfolioConfig) -> _Plan:
    plan = _Plan(config)
    groups = set(config.models)
    dt_params = config.dt
    preset = dt_params.model_copy(update={"max_depth": config.dt_preset_depth})

    if "sym" in groups:

        def build_sym(train: Dataset, valid: Dataset, seed: int) -> Optional[Aig]:
            signature = detect_symmetric(train, config.sym_min_support)
            if signature is None:
                return None
            logger.info("Training data matches symmetric signature %s", signature)
            return compiler.symmetric_to_aig(signature, train.num_inputs)

        plan.add("sym", build_sym)

    if "espresso" in groups:

        def build_espresso(train: Dataset, valid: Dataset, seed: int) -> Aig:
            return compiler.sop_to_aig(espresso.minimize(espresso.Cover.from_dataset(train)))

        plan.add("espresso", build_espresso)

    if "dt" in groups:

        def build_dt(train: Dataset, valid: Dataset, seed: int) -> Aig:
            params = dt_params.model_copy(update={"seed": seed})
            return compiler.dt_to_aig(dtree.train_dt(train, params))

        def build_dt_preset(train: Dataset, valid: Dataset, seed: int) -> Aig:
            params = preset.model_copy(update={"seed": seed})
            return compiler.dt_to_aig(dtree.train_dt(train, params))

        plan.add("dt", build_dt)
        plan.add(f"dt{config.dt_preset_depth}", build_dt_preset)

        if config.dt_sop:

            def build_dt_sop(train: Dataset, valid: Dataset, seed: int) -> Aig:
                tree = dtree.train_dt(train, dt_params.model_copy(update={"seed": seed}))
                return compiler.sop_to_aig(espresso.minimize(dtree.tree_to_cover(tree)))

            plan.add("dt_sop", build_dt_sop)

    if "fringe" in groups:

        def build_fringe(train: Dataset, valid: Dataset, seed: int) -> Aig:
            params = dt_params.model_copy(update={"seed": seed})
            return compiler.dt_to_aig(dtree.fringe_train(train, params))

        plan.add("fringe", build_fringe)

    if "rf" in groups:
        for count in config.forest_sizes():

            def build_rf(train: Dataset, valid: Dataset, seed: int, count: int = count) -> Aig:
                params = config.rf.model_copy(update={"n_trees": count, "seed": seed})
                return compiler.forest_to_aig(forest.train_rf_params(train, params))

            plan.add(f"rf{count}", build_rf)

    if "lutnet" in groups:

        def build_lutnet(train: Dataset, valid: Dataset, seed: int) -> Optional[Aig]:
            if train.num_inputs == 0:
                return None
            return compiler.lutnet_to_aig(search_lutnet(train, valid, config.lut_search, seed))

        plan.add("lutnet", build_lutnet)

    return plan


class _Runner:
    def __init__(self, config: PortfolioConfig):
        self.config = config
        self.settings = get_settings()

    def finish(
        self, kind: str, order: int, fold: int, aig: Aig, train: Dataset, valid: Dataset, seed: int
    ) -> Candidate:
        """Approximate to the budget and score a trained circuit."""
        aig = aig.compact()
        compiled = aig.num_ands
        approximated = compiled > self.config.budget
        if approximated:
            aig = approximate_to_budget(
                aig,
                self.config.budget,
                patterns=self.config.approx.patterns,
                level_exclusion=self.config.approx.level_exclusion,
                seed=derive_seed(seed, APPROX_STREAM),
            )
        candidate = Candidate(
            kind=kind,
            order=order,
            fold=fold,
            aig=aig,
            train_acc=evaluate_dataset(aig, train),
            valid_acc=evaluate_dataset(aig, valid),
            compiled_nodes=compiled,
            approximated=approximated,
            seed=seed,
        )
        logger.info(
            "Candidate %s: train %.4f, valid %.4f, %d AND nodes%s",
            kind,
            candidate.train_acc,
            candidate.valid_acc,
            candidate.and_nodes,
            " (approximated)" if approximated else "",
        )
        return candidate

    def run_fold(
        self, fold: int, train: Dataset, valid: Dataset, trace: list[EvolutionRecord]
    ) -> list[Candidate]:
        """Train every candidate on one train and validation pair."""
        plan = _plan(self.config)
        seeds = [derive_seed(self.config.seed, order) for order in range(len(plan.builders) + 2)]

        def job(order: int) -> Optional[Candidate]:
            kind, builder = plan.builders[order]
            logger.info("Training candidate %s", kind)
            aig = builder(train, valid, seeds[order])
            if aig is None:
                return None
            return self.finish(kind, order, fold, aig, train, valid, seeds[order])

        workers = min(self.settings.threads, max(1, len(plan.builders)))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(job, range(len(plan.builders))))
        else:
            results = [job(order) for order in range(len(plan.builders))]
        candidates = [c for c in results if c is not None]
        order = len(plan.builders)

        if "cgp" in self.config.models and train.num_inputs > 0:
            incumbent = select(candidates)
            params = self.config.cgp.model_copy(update={"seed": seeds[order]})
            seed_aig = incumbent.aig if incumbent is not None else None
            logger.info("Refining with CGP")
            aig, bootstrapped = cgp.train_cgp(train, seed_aig, params, trace)
            logger.info("CGP %s", "bootstrapped" if bootstrapped else "started from random genomes")
            candidates.append(self.finish("cgp", order, fold, aig, train, valid, seeds[order]))
        order += 1

        majority = train.majority_label()
        constant = compiler.constant_aig(train.num_inputs, majority)
        candidates.append(self.finish("const", order, fold, constant, train, valid, seeds[order]))
        return candidates

    def rebuild(self, candidate: Candidate, merged: Dataset, valid: Dataset) -> Optional[Candidate]:
        """Retrain the winning model kind on train and validation rows together."""
        plan = _plan(self.config)
        builders = dict(plan.builders)
        if candidate.kind == "const":
            aig = compiler.constant_aig(merged.num_inputs, merged.majority_label())
        elif candidate.kind in builders:
            aig = builders[candidate.kind](merged, merged, candidate.seed)
        else:
            logger.info("Candidate %s is not retrained on merged data", candidate.kind)
            return None
        if aig is None:
            return None
        return self.finish(
            candidate.kind, candidate.order, candidate.fold, aig, merged, valid, candidate.seed
        )


def select(candidates: list[Candidate]) -> Optional[Candidate]:
    """Best validation accuracy, then fewer nodes, then earlier fold and model order."""
    if not candidates:
        return None
    return min(candidates, key=lambda c: (-c.valid_acc, c.and_nodes, c.fold, c.order))


def _folds(
    train: Dataset, valid: Dataset, config: PortfolioConfig
) -> list[tuple[Dataset, Dataset]]:
    if config.resplit == "none":
        return [(train, valid)]
    try:
        merged = train.merge(valid)
    except ContradictionError:
        logger.warning("Training and validation rows contradict, keeping the given split")
        return [(train, valid)]
    order = make_rng(derive_seed(config.seed, RESPLIT_STREAM)).permutation(len(merged))
    if config.resplit == "holdout80":
        cut = math.ceil(HOLDOUT_SHARE * len(merged))
        return [(merged.subset(order[:cut]), merged.subset(order[cut:]))]
    parts = np.array_split(order, 3)
    folds = []
    for i, part in enumerate(parts):
        rest = np.concatenate([p for j, p in enumerate(parts) if j != i])
        folds.append((merged.subset(rest), merged.subset(part)))
    return folds


def run_portfolio(
    train: PlaFile,
    valid: PlaFile,
    config: Optional[PortfolioConfig] = None,
    test: Optional[PlaFile] = None,
    name: str = "",
) -> PortfolioResult:
    """Train every configured candidate, keep them within budget and pick one.

    Selection maximizes validation accuracy, then prefers fewer AND nodes, then the
    fixed model order. When the winner stays below the validation gate its model is
    retrained on train and validation rows together; the report keeps the validation
    accuracy measured before retraining.
    """
    config = config or PortfolioConfig()
    started = time.perf_counter()
    if train.num_inputs != valid.num_inputs:
        raise WidthMismatchError(
            f"train has {train.num_inputs} inputs, valid has {valid.num_inputs}"
        )
    if test is not None and test.num_inputs != train.num_inputs:
        raise WidthMismatchError(
            f"test has {test.num_inputs} inputs, train has {train.num_inputs}"
        )
    train_ds, valid_ds = to_dataset(train), to_dataset(valid)
    if len(train_ds) == 0:
        raise EmptyDatasetError("training PLA has no rows")

    runner = _Runner(config)
    trace: list[EvolutionRecord] = []
    folds = _folds(train_ds, valid_ds, config)
    candidates: list[Candidate] = []
    for index, (fold_train, fold_valid) in enumerate(folds):
        if len(folds) > 1:
            logger.info("Portfolio fold %d of %d", index + 1, len(folds))
        candidates.extend(runner.run_fold(index, fold_train, fold_valid, trace))

    winner = select(candidates)
    valid_acc = winner.valid_acc
    retrained = False
    retrained_valid_acc = None
    if winner.valid_acc < config.validation_gate:
        fold_train, fold_valid = folds[winner.fold]
        try:
            merged = fold_train.merge(fold_valid)
        except ContradictionError:
            logger.warning("Validation gate skipped: training and validation rows contradict")
        else:
            logger.info(
                "Validation accuracy %.4f below gate %.2f, retraining %s on merged data",
                winner.valid_acc,
                config.validation_gate,
                winner.kind,
            )
            rebuilt = runner.rebuild(winner, merged, fold_valid)
            if rebuilt is not None:
                winner, retrained = rebuilt, True
                retrained_valid_acc = rebuilt.valid_acc

    metrics = winner.aig.metrics()
    test_acc = evaluate_dataset(winner.aig, to_dataset(test)) if test is not None else None
    elapsed = time.perf_counter() - started
    report = ModelReport(
        benchmark=name,
        model_kind=winner.kind,
        train_acc=evaluate_dataset(winner.aig, train_ds),
        valid_acc=valid_acc,
        test_acc=test_acc,
        and_nodes=metrics.and_nodes,
        levels=metrics.levels,
        budget=config.budget,
        seed=config.seed,
        params_digest=config.digest(),
        retrained=retrained,
        retrained_valid_acc=retrained_valid_acc,
        wall_time=elapsed if get_settings().report_timing else None,
    )
    logger.info(
        "Selected %s: valid %.4f, %d AND nodes, %d levels in %.2fs",
        winner.kind,
        valid_acc,
        metrics.and_nodes,
        metrics.levels,
        elapsed,
    )
    return PortfolioResult(winner.aig, report, [c.report() for c in candidates], trace)


class PortfolioController:
    """Controller for learning requests."""

    def learn(self, request: LearnRequest) -> LearnResponse:
        """Run the portfolio on PLA texts."""
        test = parse_pla(request.test) if request.test else None
        result = run_portfolio(
            parse_pla(request.train), parse_pla(request.valid), request.config, test, request.name
        )
        return LearnResponse(
            aag=write_aag(result.aig), report=result.report, candidates=result.candidates
        )
