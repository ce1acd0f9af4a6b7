"""Correlation-based feature selection.

Features are scored as a set: merit = k r_cf / sqrt(k + k (k-1) r_ff), where
r_cf is the mean feature-class correlation and r_ff the mean feature-feature
correlation, both measured by symmetric uncertainty on discretized columns.
Subsets are explored by forward best-first search that stops after a fixed
number of consecutive non-improving expansions.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter

from .dataset import Dataset
from .discretize import apply_cuts, entropy_from_counts, equal_frequency_cuts, mdl_cuts
from .errors import EmptySubsetError


def symmetric_uncertainty(a, b) -> float:
    """SU(a, b) = 2 IG(a; b) / (H(a) + H(b)) over pairwise-known values.

    ``a`` and ``b`` are parallel sequences of discrete values; pairs with a
    None on either side are excluded. Defined as 0.0 when both entropies are
    zero (or no pairs remain).
    """
    pairs = [(x, y) for x, y in zip(a, b) if x is not None and y is not None]
    if not pairs:
        return 0.0
    joint = Counter(pairs)
    h_a = entropy_from_counts(Counter(x for x, _ in pairs).values())
    h_b = entropy_from_counts(Counter(y for _, y in pairs).values())
    if h_a + h_b == 0.0:
        return 0.0
    h_ab = entropy_from_counts(joint.values())
    gain = h_a + h_b - h_ab
    return 2.0 * gain / (h_a + h_b)


class CorrelationCache:
    """Lazily computed SU correlations for one dataset.

    Numeric features are discretized up front (entropy-MDL by default, or
    equal-frequency with ``bins``); nominal features and the class are used
    as-is. Feature identity is the schema attribute index.
    """

    def __init__(self, dataset: Dataset, *, method: str = "mdl", bins: int = 10):
        if method not in ("mdl", "equal-frequency"):
            raise ValueError(f"unknown discretization method {method!r}")
        schema = dataset.schema
        self.schema = schema
        self.feature_indices = list(schema.feature_indices)
        target = dataset.column(schema.target_index)
        self._class_column = target
        self._columns: dict[int, tuple] = {}
        self.cut_points: dict[int, list[float]] = {}
        for i in self.feature_indices:
            col = dataset.column(i)
            if schema.attributes[i].is_numeric:
                if method == "mdl":
                    cuts = mdl_cuts(col, target)
                else:
                    cuts = equal_frequency_cuts(col, bins)
                self.cut_points[i] = cuts
                col = tuple(apply_cuts(v, cuts) for v in col)
            self._columns[i] = col
        self._su_cf: dict[int, float] = {}
        self._su_ff: dict[tuple[int, int], float] = {}

    def su_cf(self, f: int) -> float:
        if f not in self._su_cf:
            self._su_cf[f] = symmetric_uncertainty(self._columns[f], self._class_column)
        return self._su_cf[f]

    def su_ff(self, f: int, g: int) -> float:
        key = (f, g) if f < g else (g, f)
        if key not in self._su_ff:
            self._su_ff[key] = symmetric_uncertainty(self._columns[key[0]], self._columns[key[1]])
        return self._su_ff[key]

    def merit(self, subset) -> float:
        """Merit of a non-empty feature subset (schema indices)."""
        members = sorted(set(subset))
        k = len(members)
        if k == 0:
            raise EmptySubsetError("merit of the empty subset is undefined")
        r_cf = sum(self.su_cf(f) for f in members) / k
        if k == 1:
            return r_cf
        pairs = [(members[i], members[j]) for i in range(k) for j in range(i + 1, k)]
        r_ff = sum(self.su_ff(f, g) for f, g in pairs) / len(pairs)
        return k * r_cf / math.sqrt(k + k * (k - 1) * r_ff)


def best_first_select(cache: CorrelationCache, *, max_stale: int = 5) -> list[int]:
    """Forward best-first search over feature subsets; returns schema indices.

    Starts from the empty set, expands the open node of highest merit (ties to
    the lexicographically smallest index tuple), and stops once ``max_stale``
    consecutive expansions fail to improve on the best merit seen. Improvement
    is strict, so duplicate-feature additions never displace a smaller subset.
    """
    features = cache.feature_indices
    start: frozenset[int] = frozenset()
    best_subset, best_merit = start, 0.0
    open_heap: list[tuple[float, tuple[int, ...], frozenset[int]]] = [(0.0, (), start)]
    seen = {start}
    stale = 0
    while open_heap and stale < max_stale:
        _, _, subset = heapq.heappop(open_heap)
        improved = False
        for f in features:
            if f in subset:
                continue
            child = subset | {f}
            if child in seen:
                continue
            seen.add(child)
            merit = cache.merit(child)
            if merit > best_merit:
                best_subset, best_merit = child, merit
                improved = True
            heapq.heappush(open_heap, (-merit, tuple(sorted(child)), child))
        stale = 0 if improved else stale + 1
    return sorted(best_subset)
