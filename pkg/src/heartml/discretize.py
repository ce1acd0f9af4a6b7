"""Entropy helpers and supervised/unsupervised discretization of numeric columns.

The supervised method is recursive entropy minimization with the MDL stopping
rule: a cut survives only if its information gain exceeds the coding cost
(log2(N-1) + log2(3^k - 2) - (k H(S) - k1 H(S1) - k2 H(S2))) / N. Candidate
cuts are midpoints at class-boundary points only, so a cut can never fall
inside a run of equal values or between two pure same-class runs.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter


def entropy_from_counts(counts) -> float:
    """Shannon entropy (bits) of a distribution given as non-negative counts."""
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def _subtract(counts: Counter, other: Counter) -> Counter:
    out = counts.copy()
    out.subtract(other)
    return out


def _boundary_candidates(groups: list[tuple[float, Counter]]) -> list[int]:
    """Indices i such that the midpoint between group i and i+1 is a boundary point.

    A midpoint is skipped only when both neighbouring value-groups are pure and
    agree on the class.
    """
    out = []
    for i in range(len(groups) - 1):
        left, right = groups[i][1], groups[i + 1][1]
        if len(left) == 1 and len(right) == 1 and next(iter(left)) == next(iter(right)):
            continue
        out.append(i)
    return out


def mdl_cuts(values, classes, *, force_single_cut: bool = False) -> list[float]:
    """Cut points for one numeric column chosen by recursive MDL splitting.

    ``values`` and ``classes`` are parallel sequences; pairs where either side
    is None are ignored. Returns an ascending list of cut values (possibly
    empty). Instances with value <= cut fall left of it.

    ``force_single_cut`` is a test hook: skip the MDL acceptance test and the
    recursion, returning just the single entropy-minimizing cut (or none if no
    boundary exists).
    """
    pairs = [(float(v), c) for v, c in zip(values, classes) if v is not None and c is not None]
    pairs.sort(key=lambda p: p[0])
    groups: list[tuple[float, Counter]] = []
    for v, c in pairs:
        if groups and groups[-1][0] == v:
            groups[-1][1][c] += 1
        else:
            groups.append((v, Counter({c: 1})))
    cuts: list[float] = []
    _mdl_recurse(groups, cuts, force_single_cut)
    cuts.sort()
    return cuts


def _mdl_recurse(groups: list[tuple[float, Counter]], cuts: list[float],
                 force_single_cut: bool) -> None:
    total = Counter()
    for _, counter in groups:
        total.update(counter)
    n = sum(total.values())
    if n < 2:
        return
    h_s = entropy_from_counts(total.values())
    if h_s == 0.0:
        return

    best = None  # (weighted_entropy, index)
    left = Counter()
    n_left = 0
    candidates = set(_boundary_candidates(groups))
    for i in range(len(groups) - 1):
        left.update(groups[i][1])
        n_left += sum(groups[i][1].values())
        if i not in candidates:
            continue
        right = _subtract(total, left)
        w = (n_left * entropy_from_counts(left.values())
             + (n - n_left) * entropy_from_counts(right.values())) / n
        if best is None or w < best[0]:
            best = (w, i)
    if best is None:
        return

    w, i = best
    if not force_single_cut:
        gain = h_s - w
        left = Counter()
        for _, counter in groups[: i + 1]:
            left.update(counter)
        right = _subtract(total, left)
        k = len([c for c in total.values() if c > 0])
        k1 = len([c for c in left.values() if c > 0])
        k2 = len([c for c in right.values() if c > 0])
        delta = (math.log2(3 ** k - 2)
                 - (k * h_s - k1 * entropy_from_counts(left.values())
                    - k2 * entropy_from_counts(right.values())))
        threshold = (math.log2(n - 1) + delta) / n
        if gain <= threshold:
            return

    cuts.append((groups[i][0] + groups[i + 1][0]) / 2.0)
    if force_single_cut:
        return
    _mdl_recurse(groups[: i + 1], cuts, False)
    _mdl_recurse(groups[i + 1:], cuts, False)


def equal_frequency_cuts(values, bins: int) -> list[float]:
    """Cut points that split the non-missing values into ``bins`` groups of
    near-equal size. Cuts between equal values are dropped, so fewer than
    bins-1 cuts can come back."""
    if bins < 2:
        return []
    vs = sorted(float(v) for v in values if v is not None)
    n = len(vs)
    cuts: list[float] = []
    for b in range(1, bins):
        idx = round(b * n / bins)
        if 0 < idx < n and vs[idx - 1] < vs[idx]:
            cut = (vs[idx - 1] + vs[idx]) / 2.0
            if not cuts or cut > cuts[-1]:
                cuts.append(cut)
    return cuts


def apply_cuts(value, cuts: list[float]):
    """Bin index for one value (None stays None); value <= cut goes left."""
    if value is None:
        return None
    return bisect_left(cuts, float(value))


def discretize_mdl(dataset, attr_index: int, *, force_single_cut: bool = False) -> list[float]:
    """MDL cut points for one numeric attribute of a dataset, against its class."""
    from .errors import NotNumericError

    attr = dataset.schema.attributes[attr_index]
    if not attr.is_numeric:
        raise NotNumericError(attr.name)
    return mdl_cuts(dataset.column(attr_index),
                    dataset.column(dataset.schema.target_index),
                    force_single_cut=force_single_cut)
