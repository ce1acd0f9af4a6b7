"""Confusion-matrix metrics with exact (Clopper-Pearson) confidence intervals.

All metrics are percentages. The positive class is the target's category at
index 1 ("infected" in the built-in heart schema).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import (
    EmptyMatrixError,
    InvalidCountError,
    NoNegativesError,
    NoPositivesError,
)
from .stats import beta_quantile


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.tn + other.tn,
                               self.fp + other.fp, self.fn + other.fn)

    @classmethod
    def zero(cls) -> "ConfusionMatrix":
        return cls(0, 0, 0, 0)

    @classmethod
    def from_pairs(cls, pairs) -> "ConfusionMatrix":
        """Count (actual, predicted) class-index pairs; positive class index 1."""
        tp = tn = fp = fn = 0
        for actual, predicted in pairs:
            if actual == 1:
                if predicted == 1:
                    tp += 1
                else:
                    fn += 1
            else:
                if predicted == 1:
                    fp += 1
                else:
                    tn += 1
        return cls(tp, tn, fp, fn)


def accuracy(cm: ConfusionMatrix) -> float:
    """Percentage of correct predictions, 100 (tp+tn) / total."""
    if cm.total == 0:
        raise EmptyMatrixError("accuracy is undefined for an empty confusion matrix")
    return 100.0 * (cm.tp + cm.tn) / cm.total


def misclassification_rate(cm: ConfusionMatrix) -> float:
    """Percentage of wrong predictions, 100 (fp+fn) / total."""
    if cm.total == 0:
        raise EmptyMatrixError("misclassification rate is undefined for an empty confusion matrix")
    return 100.0 * (cm.fp + cm.fn) / cm.total


def sensitivity(cm: ConfusionMatrix) -> float:
    """True-positive rate, 100 tp / (tp+fn)."""
    if cm.tp + cm.fn == 0:
        raise NoPositivesError("sensitivity is undefined without positive instances")
    return 100.0 * cm.tp / (cm.tp + cm.fn)


def specificity(cm: ConfusionMatrix) -> float:
    """True-negative rate, 100 tn / (tn+fp)."""
    if cm.tn + cm.fp == 0:
        raise NoNegativesError("specificity is undefined without negative instances")
    return 100.0 * cm.tn / (cm.tn + cm.fp)


def exact_binomial_ci(successes: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a binomial proportion, in percentages.

    Lower bound is 0 when successes = 0, upper bound 100 when successes = n;
    otherwise the bounds are Beta-distribution quantiles.
    """
    if not isinstance(successes, int) or not isinstance(n, int):
        raise InvalidCountError(f"counts must be integers, got ({successes!r}, {n!r})")
    if n <= 0 or not 0 <= successes <= n:
        raise InvalidCountError(f"need 0 <= successes <= n with n > 0, got ({successes}, {n})")
    if not 0.0 < level < 1.0:
        raise InvalidCountError(f"confidence level must be in (0, 1), got {level}")
    alpha = 1.0 - level
    if successes == 0:
        lower = 0.0
    else:
        lower = beta_quantile(alpha / 2.0, successes, n - successes + 1)
    if successes == n:
        upper = 1.0
    else:
        upper = beta_quantile(1.0 - alpha / 2.0, successes + 1, n - successes)
    return 100.0 * lower, 100.0 * upper


def format_percent(value: float, places: int = 2) -> str:
    """Render a percentage with fixed decimals, rounding halves up."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def round_percent(value: float, places: int = 2) -> float:
    return float(format_percent(value, places))


@dataclass(frozen=True)
class MetricsReport:
    """Point metrics with their 95% (by default) intervals; None = undefined.

    Interval sources: accuracy from (tp+tn, total), sensitivity from
    (tp, tp+fn), specificity from (tn, tn+fp).
    """

    level: float
    accuracy: float | None
    accuracy_ci: tuple[float, float] | None
    sensitivity: float | None
    sensitivity_ci: tuple[float, float] | None
    specificity: float | None
    specificity_ci: tuple[float, float] | None
    misclassification: float | None


def metrics_report(cm: ConfusionMatrix, level: float = 0.95) -> MetricsReport:
    """Compute all metrics, marking those with zero denominators undefined."""
    acc = acc_ci = sens = sens_ci = spec = spec_ci = mis = None
    if cm.total > 0:
        acc = accuracy(cm)
        acc_ci = exact_binomial_ci(cm.tp + cm.tn, cm.total, level)
        mis = misclassification_rate(cm)
    if cm.tp + cm.fn > 0:
        sens = sensitivity(cm)
        sens_ci = exact_binomial_ci(cm.tp, cm.tp + cm.fn, level)
    if cm.tn + cm.fp > 0:
        spec = specificity(cm)
        spec_ci = exact_binomial_ci(cm.tn, cm.tn + cm.fp, level)
    return MetricsReport(level, acc, acc_ci, sens, sens_ci, spec, spec_ci, mis)
