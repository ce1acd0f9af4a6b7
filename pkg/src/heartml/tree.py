"""C4.5-style decision tree: gain-ratio splits with the mean-gain eligibility
guard, binary numeric thresholds at class-boundary midpoints, multiway nominal
splits, majority-branch routing for missing values, and confidence-bound
(error-based) pruning.

The same grower serves the random forest, which passes a per-tree RNG and a
feature-subset size to sample fresh candidate features at every node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .columns import ColumnView
from .dataset import Dataset
from .errors import ConfigError, NoInstancesError, SchemaMismatchError
from .schema import Schema
from .stats import binomial_upper_bound

# Gains below this are treated as zero when deciding whether a split is worth making.
_GAIN_EPS = 1e-12
# Slack for the mean-gain eligibility comparison (guards float noise on exact ties).
_MEAN_SLACK = 1e-12


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, ...]
    dist: tuple[float, ...]
    prediction: int


@dataclass(frozen=True)
class Split:
    attr: int
    threshold: float | None  # None marks a multiway nominal split
    children: tuple
    majority_child: int
    counts: tuple[int, ...]
    prediction: int


@dataclass(frozen=True)
class SplitCandidate:
    """One admissible split evaluated at a node (gain already scaled by the
    known-value fraction)."""

    attr: int
    threshold: float | None
    gain: float
    split_info: float

    @property
    def gain_ratio(self) -> float:
        return self.gain / self.split_info


@dataclass(frozen=True)
class DecisionTree:
    schema: Schema
    root: Leaf | Split
    min_leaf: int
    cf: float
    pruned: bool
    allow_zero_gain: bool

    def _check_row(self, row) -> tuple:
        if len(row) != len(self.schema):
            raise SchemaMismatchError(f"expected {len(self.schema)} values, got {len(row)}")
        try:
            return tuple(a.check_value(v) for a, v in zip(self.schema.attributes, row))
        except ValueError as exc:
            raise SchemaMismatchError(str(exc)) from exc

    def predict_row(self, row) -> list[float]:
        row = self._check_row(row)
        node = self.root
        while isinstance(node, Split):
            v = row[node.attr]
            if v is None:
                node = node.children[node.majority_child]
            elif node.threshold is not None:
                node = node.children[0 if v <= node.threshold else 1]
            else:
                node = node.children[int(v)]
        return list(node.dist)

    def predict_label(self, row) -> int:
        dist = self.predict_row(row)
        return _argmax(dist)

    def n_leaves(self) -> int:
        return sum(1 for n in iter_nodes(self.root) if isinstance(n, Leaf))

    def depth(self) -> int:
        def walk(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(c) for c in node.children)
        return walk(self.root)


def iter_nodes(node):
    yield node
    if isinstance(node, Split):
        for child in node.children:
            yield from iter_nodes(child)


def _argmax(seq) -> int:
    best = 0
    for i in range(1, len(seq)):
        if seq[i] > seq[best]:
            best = i
    return best


def _xlog2x_sum(m: np.ndarray) -> np.ndarray:
    """Sum of x*log2(x) along the last axis, with 0*log2(0) = 0."""
    safe = np.where(m > 0.0, m, 1.0)
    return (m * np.log2(safe)).sum(axis=-1)


def _numeric_candidate(attr: int, x: np.ndarray, y: np.ndarray, n_classes: int,
                       n_node: int, min_leaf: int) -> SplitCandidate | None:
    known = ~np.isnan(x)
    n_known = int(known.sum())
    if n_known < 2 * min_leaf:
        return None
    xs = x[known]
    ys = y[known]
    order = np.argsort(xs, kind="stable")
    xs = xs[order]
    ys = ys[order]
    if xs[0] == xs[-1]:
        return None

    onehot = (ys[:, None] == np.arange(n_classes)).astype(np.float64)
    cum = np.vstack([np.zeros((1, n_classes)), np.cumsum(onehot, axis=0)])
    total = cum[-1]
    positions = np.flatnonzero(xs[:-1] != xs[1:])  # split between p and p+1
    if positions.size == 0:
        return None
    # Boundary-point rule: a midpoint is a candidate only if some class change
    # occurs inside the two value-groups it separates.
    firsts = np.concatenate(([0], positions + 1))
    lasts = np.concatenate((positions, [len(xs) - 1]))
    changes = np.concatenate(([0], np.cumsum(ys[:-1] != ys[1:])))
    boundary = (changes[lasts[1:]] - changes[firsts[:-1]]) > 0

    left_n = positions + 1
    right_n = n_known - left_n
    ok = boundary & (left_n >= min_leaf) & (right_n >= min_leaf)
    if not ok.any():
        return None
    pos = positions[ok]
    left = cum[pos + 1]
    right = total - left
    ln = left_n[ok].astype(np.float64)
    rn = right_n[ok].astype(np.float64)
    h_node = math.log2(n_known) - float(_xlog2x_sum(total)) / n_known
    weighted = (ln * np.log2(ln) - _xlog2x_sum(left)
                + rn * np.log2(rn) - _xlog2x_sum(right)) / n_known
    gains = h_node - weighted
    best = int(np.argmax(gains))  # first max -> lowest threshold on ties
    p = int(pos[best])
    threshold = (xs[p] + xs[p + 1]) / 2.0
    pl, pr = float(ln[best]) / n_known, float(rn[best]) / n_known
    split_info = -pl * math.log2(pl) - pr * math.log2(pr)
    gain = max(float(gains[best]), 0.0) * (n_known / n_node)
    return SplitCandidate(attr, float(threshold), gain, split_info)


def _nominal_candidate(attr: int, x: np.ndarray, y: np.ndarray, n_classes: int,
                       n_cats: int, n_node: int, min_leaf: int) -> SplitCandidate | None:
    known = x >= 0
    n_known = int(known.sum())
    if n_known == 0:
        return None
    xs = x[known]
    ys = y[known]
    table = np.bincount(xs * n_classes + ys, minlength=n_cats * n_classes)
    table = table.reshape(n_cats, n_classes).astype(np.float64)
    branch_n = table.sum(axis=1)
    # J48 admissibility: at least two branches must reach min_leaf instances.
    if int((branch_n >= min_leaf).sum()) < 2:
        return None
    total = table.sum(axis=0)
    h_node = math.log2(n_known) - float(_xlog2x_sum(total)) / n_known
    nz = branch_n > 0
    weighted = (float((branch_n[nz] * np.log2(branch_n[nz])).sum())
                - float(_xlog2x_sum(table).sum())) / n_known
    gain = max(h_node - weighted, 0.0) * (n_known / n_node)
    props = branch_n[nz] / n_known
    split_info = float(-(props * np.log2(props)).sum())
    if split_info <= 0.0:
        return None
    return SplitCandidate(attr, None, gain, split_info)


def _candidate_for(view: ColumnView, rows: np.ndarray, attr: int, min_leaf: int) -> SplitCandidate | None:
    x = view.columns[attr][rows]
    y = view.y[rows]
    if view.is_nominal(attr):
        return _nominal_candidate(attr, x, y, view.n_classes, view.n_categories(attr),
                                  len(rows), min_leaf)
    return _numeric_candidate(attr, x, y, view.n_classes, len(rows), min_leaf)


def evaluate_splits(dataset: Dataset, *, min_leaf: int = 2, features=None) -> list[SplitCandidate]:
    """Admissible root-node split candidates, one per feature, in schema order.

    Exposes the induction arithmetic (gain, split info, chosen threshold) for
    inspection and testing.
    """
    view = ColumnView.from_dataset(dataset)
    rows = view.known_rows()
    if features is None:
        features = view.schema.feature_indices
    out = []
    for attr in features:
        cand = _candidate_for(view, rows, attr, min_leaf)
        if cand is not None:
            out.append(cand)
    return out


def _pick_split(candidates: list[SplitCandidate]) -> SplitCandidate:
    """Best candidate: max gain ratio among those with gain >= mean gain.

    First-wins comparison keeps ties on the lowest attribute index (candidates
    arrive in ascending attribute order).
    """
    mean_gain = sum(c.gain for c in candidates) / len(candidates)
    best = None
    for cand in candidates:
        if cand.gain < mean_gain - _MEAN_SLACK:
            continue
        if best is None or cand.gain_ratio > best.gain_ratio:
            best = cand
    assert best is not None  # the max-gain candidate is always eligible
    return best


def _grow(view: ColumnView, rows: np.ndarray, parent_dist: tuple[float, ...],
          min_leaf: int, allow_zero_gain: bool,
          rng: np.random.Generator | None = None, k_features: int | None = None):
    counts_arr = np.bincount(view.y[rows], minlength=view.n_classes)
    counts = tuple(int(c) for c in counts_arr)
    n = len(rows)
    if n == 0:
        return Leaf(counts, parent_dist, _argmax(parent_dist))
    dist = tuple(c / n for c in counts)
    prediction = _argmax(dist)
    if counts[prediction] == n:
        return Leaf(counts, dist, prediction)

    features = list(view.schema.feature_indices)
    if k_features is not None and k_features < len(features):
        picked = rng.choice(len(features), size=k_features, replace=False)
        features = sorted(features[i] for i in picked)
    candidates = [c for c in (_candidate_for(view, rows, a, min_leaf) for a in features)
                  if c is not None]
    if not candidates:
        return Leaf(counts, dist, prediction)
    best = _pick_split(candidates)
    if best.gain <= _GAIN_EPS and not allow_zero_gain:
        return Leaf(counts, dist, prediction)

    x = view.columns[best.attr][rows]
    if best.threshold is not None:
        known = ~np.isnan(x)
        branch_of = np.where(x <= best.threshold, 0, 1)
        n_branches = 2
    else:
        known = x >= 0
        branch_of = x
        n_branches = view.n_categories(best.attr)
    branch_sizes = np.bincount(branch_of[known].astype(np.int64), minlength=n_branches)
    majority = int(np.argmax(branch_sizes))  # ties -> lowest index / the <= side
    branch_of = np.where(known, branch_of, majority)
    children = tuple(
        _grow(view, rows[branch_of == b], dist, min_leaf, allow_zero_gain, rng, k_features)
        for b in range(n_branches)
    )
    return Split(best.attr, best.threshold, children, majority, counts, prediction)


def _prune(node, cf: float):
    """Bottom-up error-based pruning; returns (node, pessimistic error estimate)."""
    if isinstance(node, Leaf):
        return node, _leaf_estimate(node.counts, node.prediction, cf)
    pruned = []
    subtree_est = 0.0
    for child in node.children:
        new_child, est = _prune(child, cf)
        pruned.append(new_child)
        subtree_est += est
    leaf_est = _leaf_estimate(node.counts, node.prediction, cf)
    if leaf_est <= subtree_est:
        n = sum(node.counts)
        dist = tuple(c / n for c in node.counts)
        return Leaf(node.counts, dist, _argmax(dist)), leaf_est
    return Split(node.attr, node.threshold, tuple(pruned), node.majority_child,
                 node.counts, node.prediction), subtree_est


def _leaf_estimate(counts, prediction: int, cf: float) -> float:
    n = sum(counts)
    if n == 0:
        return 0.0
    errors = n - counts[prediction]
    return n * binomial_upper_bound(errors, n, cf)


def subtree_pessimistic_error(node, cf: float) -> float:
    """Sum of leaf pessimistic-error estimates over a (sub)tree."""
    if isinstance(node, Leaf):
        return _leaf_estimate(node.counts, node.prediction, cf)
    return sum(subtree_pessimistic_error(c, cf) for c in node.children)


def c45_train(dataset: Dataset, *, min_leaf: int = 2, cf: float = 0.25,
              prune: bool = True, allow_zero_gain_splits: bool = False) -> DecisionTree:
    """Grow (and by default prune) a tree on all rows with a known class."""
    if min_leaf < 1:
        raise ConfigError(f"min_leaf must be >= 1, got {min_leaf}")
    if not 0.0 < cf < 1.0:
        raise ConfigError(f"cf must be in (0, 1), got {cf}")
    if not dataset.schema.feature_indices:
        raise ConfigError("dataset has no feature attributes")
    view = ColumnView.from_dataset(dataset)
    rows = view.known_rows()
    if rows.size == 0:
        raise NoInstancesError()
    uniform = tuple(1.0 / view.n_classes for _ in range(view.n_classes))
    root = _grow(view, rows, uniform, min_leaf, allow_zero_gain_splits)
    if prune:
        root, _ = _prune(root, cf)
    return DecisionTree(dataset.schema, root, min_leaf=min_leaf, cf=cf,
                        pruned=prune, allow_zero_gain=allow_zero_gain_splits)
