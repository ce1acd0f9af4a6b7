"""Experiment grid: (classifier x feature mode) cells evaluated by one shared
cross-validation plan, reproducing the paper-style comparison table.

Feature selection runs once per grid and is shared by every cell that asks
for it. Cells may run on a thread pool; reports are assembled and written in
grid order, so output is byte-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .bayes import nb_train
from .cfs import CorrelationCache, best_first_select
from .crossval import CVPlan, CVResult, cross_validate, make_cv_plan
from .dataset import Dataset, feature_indices_by_name
from .errors import ConfigError
from .forest import rf_train
from .reports import EvaluationReport
from .tree import c45_train

CLASSIFIER_KINDS = ("j48", "nb", "rf")
FEATURE_MODES = ("all", "cfs", "explicit")


@dataclass(frozen=True)
class ClassifierConfig:
    """One classifier plus its hyperparameters (kept as given; defaults are
    filled in by the trainer factory)."""

    kind: str
    smoothing: float = 1.0
    min_leaf: int | None = None   # None = per-classifier default (j48: 2, rf: 1)
    cf: float = 0.25
    prune: bool = True
    allow_zero_gain: bool = False
    trees: int = 100
    k_per_split: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ConfigError(f"unknown classifier {self.kind!r}; expected one of {CLASSIFIER_KINDS}")

    def params_for_report(self) -> tuple[tuple[str, object], ...]:
        if self.kind == "nb":
            items = {"smoothing": self.smoothing}
        elif self.kind == "j48":
            items = {
                "min_leaf": self.min_leaf if self.min_leaf is not None else 2,
                "cf": self.cf,
                "prune": self.prune,
                "allow_zero_gain": self.allow_zero_gain,
            }
        else:
            items = {
                "trees": self.trees,
                "k_per_split": self.k_per_split,
                "min_leaf": self.min_leaf if self.min_leaf is not None else 1,
                "seed": self.seed,
            }
        return tuple(sorted(items.items()))

    def trainer(self):
        """A Dataset -> model callable implementing this configuration."""
        if self.kind == "nb":
            return lambda ds: nb_train(ds, smoothing=self.smoothing)
        if self.kind == "j48":
            min_leaf = self.min_leaf if self.min_leaf is not None else 2
            return lambda ds: c45_train(
                ds, min_leaf=min_leaf, cf=self.cf, prune=self.prune,
                allow_zero_gain_splits=self.allow_zero_gain)
        min_leaf = self.min_leaf if self.min_leaf is not None else 1
        return lambda ds: rf_train(
            ds, trees=self.trees, k_per_split=self.k_per_split,
            seed=self.seed, min_leaf=min_leaf,
            allow_zero_gain_splits=self.allow_zero_gain)


@dataclass(frozen=True)
class FeatureSelection:
    """Resolved feature set for one mode: schema indices plus CFS merit."""

    mode: str
    indices: tuple[int, ...]
    merit: float | None = None


def resolve_features(dataset: Dataset, mode: str, *, explicit_names=None,
                     max_stale: int = 5) -> FeatureSelection:
    """Map a feature mode to concrete schema indices.

    ``all`` keeps every feature, ``cfs`` runs correlation-based selection with
    best-first search, ``explicit`` resolves the given names.
    """
    schema = dataset.schema
    if mode == "all":
        return FeatureSelection("all", tuple(schema.feature_indices))
    if mode == "cfs":
        cache = CorrelationCache(dataset)
        selected = best_first_select(cache, max_stale=max_stale)
        merit = cache.merit(selected) if selected else 0.0
        return FeatureSelection("cfs", tuple(selected), merit)
    if mode == "explicit":
        if not explicit_names:
            raise ConfigError("explicit feature mode needs at least one attribute name")
        try:
            indices = feature_indices_by_name(schema, explicit_names)
        except KeyError as exc:
            raise ConfigError(f"unknown attribute {exc.args[0]!r}") from exc
        return FeatureSelection("explicit", tuple(sorted(set(indices))))
    raise ConfigError(f"unknown feature mode {mode!r}; expected one of {FEATURE_MODES}")


def evaluate_cell(dataset: Dataset, config: ClassifierConfig,
                  selection: FeatureSelection, plan: CVPlan) -> EvaluationReport:
    """Cross-validate one (classifier, feature set) cell into a report."""
    subset = dataset.select_features(selection.indices)
    result: CVResult = cross_validate(subset, config.trainer(), plan)
    feature_names = tuple(subset.schema.attributes[i].name
                          for i in subset.schema.feature_indices)
    return EvaluationReport(
        relation=dataset.name,
        classifier=config.kind,
        classifier_params=config.params_for_report(),
        feature_mode=selection.mode,
        feature_names=feature_names,
        merit=selection.merit,
        folds=plan.k,
        seed=plan.seed,
        stratified=plan.stratified,
        n_instances=len(dataset),
        positive_label=dataset.schema.class_labels[1],
        pooled=result.pooled,
        fold_matrices=result.fold_matrices,
        metrics=result.metrics,
    )


@dataclass(frozen=True)
class ExperimentGrid:
    classifiers: tuple[ClassifierConfig, ...]
    feature_modes: tuple[str, ...] = ("all", "cfs")
    explicit_names: tuple[str, ...] = ()
    folds: int = 10
    seed: int = 42
    stratified: bool = True
    max_stale: int = 5


@dataclass
class CellOutcome:
    name: str
    report: EvaluationReport | None = None
    error: Exception | None = None


@dataclass
class ExperimentResult:
    cells: list[CellOutcome] = field(default_factory=list)

    @property
    def failed(self) -> list[CellOutcome]:
        return [c for c in self.cells if c.error is not None]

    @property
    def reports(self) -> list[EvaluationReport]:
        return [c.report for c in self.cells if c.report is not None]


def run_experiment(dataset: Dataset, grid: ExperimentGrid, *, workers: int = 1) -> ExperimentResult:
    """Evaluate every grid cell; cell order (and output) is independent of
    worker count. Per-cell failures are captured, not raised."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    dataset.require_known_targets()
    plan = make_cv_plan(dataset, grid.folds, seed=grid.seed, stratified=grid.stratified)
    selections = {
        mode: resolve_features(dataset, mode, explicit_names=grid.explicit_names,
                               max_stale=grid.max_stale)
        for mode in dict.fromkeys(grid.feature_modes)
    }
    cells = [(config, mode) for config in grid.classifiers for mode in grid.feature_modes]

    def run(cell):
        config, mode = cell
        name = f"{config.kind}_{mode}"
        try:
            return CellOutcome(name, report=evaluate_cell(dataset, config, selections[mode], plan))
        except Exception as exc:  # reported per cell by the caller
            return CellOutcome(name, error=exc)

    result = ExperimentResult()
    if workers == 1:
        result.cells = [run(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            result.cells = list(pool.map(run, cells))
    return result
