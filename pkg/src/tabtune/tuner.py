"""Shuffled k-fold cross-validation, grid/random search drivers with timing,
and the final model-selection loop across classifier families.

Every trial in one tuning run trains with the same seed, so an identical
config always scores identically: grid search provably dominates the
baseline whenever the default config lies on the grid, and trial order
(sequential or parallel) cannot change any result. Durations are the only
non-deterministic fields.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classifiers
from .classifiers import ModelSpec, SingleClassError
from .hpspace import SearchSpace, fixed_space, grid_enumerate, grid_size, random_sample
from .preprocess import DesignMatrix

logger = logging.getLogger(__name__)

#: Environment variable capping worker processes for trial evaluation.
MAX_WORKERS_ENV = "TABTUNE_MAX_WORKERS"

#: Random search evaluates min(grid_size, this cap) configs unless overridden.
DEFAULT_RS_BUDGET_CAP = 200


class TuningError(RuntimeError):
    """Tuning could not produce a report (every family failed, bad inputs)."""


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int

    @property
    def n_rows(self) -> int:
        return len(self.assignments)


def shuffle_kfold(n_rows: int, k: int, seed: int) -> FoldPlan:
    """Seeded shuffle, then deal rows into k contiguous blocks.

    Fold sizes differ by at most one; the first n_rows % k folds take the
    extra row.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if k > n_rows:
        raise ValueError(f"k={k} exceeds the number of rows ({n_rows})")
    perm = np.random.default_rng(seed).permutation(n_rows)
    assignments = np.zeros(n_rows, dtype=np.int64)
    base = n_rows // k
    extra = n_rows % k
    start = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        assignments[perm[start : start + size]] = fold
        start += size
    assignments.setflags(write=False)
    return FoldPlan(k=k, assignments=assignments, seed=seed)


@dataclass(frozen=True)
class TrialResult:
    family: str
    config: dict
    fold_accuracies: tuple[float, ...]
    mean_accuracy: float
    duration_seconds: float
    trial_index: int = 0

    def to_dict(self) -> dict:
        return {
            "trial_index": self.trial_index,
            "config": dict(self.config),
            "fold_accuracies": list(self.fold_accuracies),
            "mean_accuracy": self.mean_accuracy,
            "duration_seconds": self.duration_seconds,
        }


def cross_val_trial(
    spec: ModelSpec,
    train: DesignMatrix,
    folds: FoldPlan,
    seed: int,
    trial_index: int = 0,
) -> TrialResult:
    """Accuracy of one config averaged over the folds, with wall time.

    A fold whose training part collapses to a single class scores 0 with a
    warning instead of aborting the sweep.
    """
    if folds.n_rows != train.n_rows:
        raise ValueError(
            f"fold plan covers {folds.n_rows} rows, matrix has {train.n_rows}"
        )
    config = classifiers.validate_config(spec.family, spec.config)
    started = time.perf_counter()
    accuracies = []
    for fold in range(folds.k):
        held_out = folds.assignments == fold
        fit_part = train.take(~held_out)
        eval_part = train.take(held_out)
        try:
            model = classifiers.train(ModelSpec(spec.family, config), fit_part, seed)
        except SingleClassError:
            logger.warning(
                "%s fold %d: training part is single-class, scoring 0", spec.family, fold
            )
            accuracies.append(0.0)
            continue
        predicted = classifiers.predict(model, eval_part.features)
        accuracies.append(classifiers.accuracy(predicted, eval_part.labels))
    duration = time.perf_counter() - started
    return TrialResult(
        family=spec.family,
        config=config,
        fold_accuracies=tuple(accuracies),
        mean_accuracy=float(np.mean(accuracies)),
        duration_seconds=duration,
        trial_index=trial_index,
    )


def _trial_task(args):
    family, config, train, folds, seed, index = args
    return cross_val_trial(ModelSpec(family, config), train, folds, seed, trial_index=index)


def _effective_workers(requested: int) -> int:
    cap = os.environ.get(MAX_WORKERS_ENV)
    workers = max(1, int(requested))
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return workers


def _evaluate_configs(family, configs, train, folds, seed, workers):
    """All configs evaluated in trial-index order; parallelism cannot change
    results because configs are pre-generated and every trial shares the seed."""
    tasks = [
        (family, config, train, folds, seed, index)
        for index, config in enumerate(configs)
    ]
    workers = _effective_workers(workers)
    if workers <= 1 or len(tasks) < 2:
        results = [_trial_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_task, tasks))
    results.sort(key=lambda r: r.trial_index)
    return results


def _best_trial(trials):
    best = trials[0]
    for trial in trials[1:]:
        if trial.mean_accuracy > best.mean_accuracy:  # ties keep the lowest index
            best = trial
    return best


def grid_search(family, space, train, folds, seed, workers=1):
    """Evaluate every grid config; returns (best, all trials)."""
    configs = grid_enumerate(space)
    if not configs:
        raise ValueError(f"{family}: empty grid")
    trials = _evaluate_configs(family, configs, train, folds, seed, workers)
    return _best_trial(trials), trials


def random_search(family, space, budget, train, folds, seed, workers=1):
    """Evaluate ``budget`` sampled configs; returns (best, all trials)."""
    if budget < 1:
        raise ValueError(f"random search budget must be at least 1, got {budget}")
    configs = random_sample(space, budget, seed)
    trials = _evaluate_configs(family, configs, train, folds, seed, workers)
    return _best_trial(trials), trials


def evaluate_baseline(family, train, folds, seed) -> TrialResult:
    """Cross-validate the family's default configuration."""
    return cross_val_trial(
        ModelSpec(family, classifiers.default_config(family)), train, folds, seed
    )


def default_rs_budget(space: SearchSpace, cap: int = DEFAULT_RS_BUDGET_CAP) -> int:
    return max(1, min(grid_size(space), cap))


@dataclass(frozen=True)
class SearchOutcome:
    best: TrialResult
    trials: tuple[TrialResult, ...]
    total_seconds: float

    @property
    def n_trials(self) -> int:
        return len(self.trials)


@dataclass(frozen=True)
class FamilyOutcome:
    family: str
    baseline: TrialResult
    grid: SearchOutcome
    random: SearchOutcome
    winner_method: str  # "grid" or "random"

    @property
    def winner(self) -> TrialResult:
        return self.grid.best if self.winner_method == "grid" else self.random.best


@dataclass(frozen=True)
class TuningReport:
    families: tuple[FamilyOutcome, ...]
    errors: dict[str, str]
    final_family: str
    final_config: dict
    final_test_accuracy: float
    k: int
    seeds: dict[str, int]
    config_echo: dict = field(default_factory=dict)

    def family_outcome(self, family: str) -> FamilyOutcome:
        for outcome in self.families:
            if outcome.family == family:
                return outcome
        raise KeyError(family)

    def to_dict(self, tool_version: str = "", max_trials: int = 10_000) -> dict:
        """JSON-ready report; per-trial records are dropped past ``max_trials``."""
        total_trials = sum(o.grid.n_trials + o.random.n_trials for o in self.families)
        truncated = total_trials > max_trials
        families = []
        trials = {}
        for outcome in self.families:
            families.append(
                {
                    "family": outcome.family,
                    "baseline": outcome.baseline.to_dict(),
                    "grid": {
                        "best": outcome.grid.best.to_dict(),
                        "n_trials": outcome.grid.n_trials,
                        "total_seconds": outcome.grid.total_seconds,
                    },
                    "random": {
                        "best": outcome.random.best.to_dict(),
                        "n_trials": outcome.random.n_trials,
                        "total_seconds": outcome.random.total_seconds,
                    },
                    "winner": outcome.winner_method,
                }
            )
            if not truncated:
                trials[outcome.family] = {
                    "grid": [t.to_dict() for t in outcome.grid.trials],
                    "random": [t.to_dict() for t in outcome.random.trials],
                }
        return {
            "tool": {"name": "tabtune", "version": tool_version},
            "created_unix": time.time(),
            "k": self.k,
            "seeds": dict(self.seeds),
            "config": self.config_echo,
            "families": families,
            "errors": dict(self.errors),
            "final": {
                "family": self.final_family,
                "config": dict(self.final_config),
                "test_accuracy": self.final_test_accuracy,
            },
            "trials": trials,
            "trials_truncated": truncated,
        }


def grs_auto_hp(
    families,
    spaces,
    train: DesignMatrix,
    test: DesignMatrix,
    k: int = 3,
    fold_seed: int = 0,
    search_seed: int = 0,
    rs_budget: int | None = None,
    workers: int = 1,
    config_echo: dict | None = None,
) -> TuningReport:
    """Run baseline, grid search and random search per family, keep the
    better search per family (grid wins ties), pick the best family overall
    (earlier input order wins ties), refit it on the full training matrix,
    and score that single model once on the held-out test matrix.

    ``spaces`` maps family name to a SearchSpace; families without an entry
    search the single default configuration. A family whose evaluation fails
    is skipped and recorded under ``errors``.
    """
    families = list(families)
    if not families:
        raise TuningError("no classifier families requested")
    if train.feature_names != test.feature_names:
        raise TuningError("train and test matrices disagree on feature names")
    folds = shuffle_kfold(train.n_rows, k, fold_seed)

    outcomes = []
    errors = {}
    for family in families:
        space = spaces.get(family) or fixed_space(family)
        try:
            baseline = evaluate_baseline(family, train, folds, search_seed)
            started = time.perf_counter()
            gs_best, gs_trials = grid_search(
                family, space, train, folds, search_seed, workers
            )
            gs_seconds = time.perf_counter() - started
            budget = rs_budget if rs_budget is not None else default_rs_budget(space)
            started = time.perf_counter()
            rs_best, rs_trials = random_search(
                family, space, budget, train, folds, search_seed, workers
            )
            rs_seconds = time.perf_counter() - started
        except Exception as exc:  # record and move on; one family must survive
            logger.warning("family %s failed: %s", family, exc)
            errors[family] = str(exc)
            continue
        winner_method = "grid" if gs_best.mean_accuracy >= rs_best.mean_accuracy else "random"
        outcomes.append(
            FamilyOutcome(
                family=family,
                baseline=baseline,
                grid=SearchOutcome(gs_best, tuple(gs_trials), gs_seconds),
                random=SearchOutcome(rs_best, tuple(rs_trials), rs_seconds),
                winner_method=winner_method,
            )
        )

    if not outcomes:
        raise TuningError(f"every family failed: {errors}")

    overall = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.winner.mean_accuracy > overall.winner.mean_accuracy:
            overall = outcome  # ties keep the earlier family
    final_spec = ModelSpec(overall.family, overall.winner.config)
    final_model = classifiers.train(final_spec, train, search_seed)
    test_accuracy = classifiers.accuracy(
        classifiers.predict(final_model, test.features), test.labels
    )
    return TuningReport(
        families=tuple(outcomes),
        errors=errors,
        final_family=overall.family,
        final_config=overall.winner.config,
        final_test_accuracy=test_accuracy,
        k=k,
        seeds={"fold": fold_seed, "search": search_seed},
        config_echo=config_echo or {},
    )
