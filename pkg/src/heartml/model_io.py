"""Versioned JSON serialization for trained models.

Document layout:

    {
      "format": "heartml-model",
      "version": 1,
      "kind": "naive-bayes" | "decision-tree" | "random-forest",
      "schema": {"attributes": [...]},
      "model": {...kind-specific...}
    }

Deserializing the serialized form reconstructs a model that compares equal to
the original and predicts identically (floats survive the JSON round trip
exactly).
"""

from __future__ import annotations

import json

from .bayes import NaiveBayesModel
from .errors import ModelFormatError
from .forest import RandomForestModel
from .schema import NOMINAL, NUMERIC, AttributeSpec, Role, Schema
from .tree import DecisionTree, Leaf, Split

MODEL_FORMAT = "heartml-model"
MODEL_VERSION = 1


def canonical_json(obj) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def schema_to_json(schema: Schema) -> dict:
    return {
        "attributes": [
            {
                "name": a.name,
                "kind": a.kind,
                **({"categories": list(a.categories)} if a.is_nominal else {}),
                "role": a.role.value,
            }
            for a in schema.attributes
        ]
    }


def schema_from_json(obj) -> Schema:
    try:
        attrs = []
        for entry in obj["attributes"]:
            kind = entry["kind"]
            attrs.append(AttributeSpec(
                entry["name"],
                kind,
                tuple(entry["categories"]) if kind == NOMINAL else (),
                Role(entry["role"]),
            ))
        return Schema(tuple(attrs))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"bad schema block: {exc}") from exc


def _node_to_json(node) -> dict:
    if isinstance(node, Leaf):
        return {
            "leaf": True,
            "counts": list(node.counts),
            "dist": list(node.dist),
            "prediction": node.prediction,
        }
    return {
        "leaf": False,
        "attr": node.attr,
        "threshold": node.threshold,
        "majority": node.majority_child,
        "counts": list(node.counts),
        "prediction": node.prediction,
        "children": [_node_to_json(c) for c in node.children],
    }


def _node_from_json(obj):
    try:
        if obj["leaf"]:
            return Leaf(tuple(int(c) for c in obj["counts"]),
                        tuple(float(p) for p in obj["dist"]),
                        int(obj["prediction"]))
        threshold = obj["threshold"]
        return Split(
            int(obj["attr"]),
            None if threshold is None else float(threshold),
            tuple(_node_from_json(c) for c in obj["children"]),
            int(obj["majority"]),
            tuple(int(c) for c in obj["counts"]),
            int(obj["prediction"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"bad tree node: {exc}") from exc


def _tree_to_json(tree: DecisionTree) -> dict:
    return {
        "min_leaf": tree.min_leaf,
        "cf": tree.cf,
        "pruned": tree.pruned,
        "allow_zero_gain": tree.allow_zero_gain,
        "root": _node_to_json(tree.root),
    }


def _tree_from_json(obj, schema: Schema) -> DecisionTree:
    try:
        return DecisionTree(
            schema=schema,
            root=_node_from_json(obj["root"]),
            min_leaf=int(obj["min_leaf"]),
            cf=float(obj["cf"]),
            pruned=bool(obj["pruned"]),
            allow_zero_gain=bool(obj["allow_zero_gain"]),
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"bad tree block: {exc}") from exc


def _nb_to_json(model: NaiveBayesModel) -> dict:
    per_attr = []
    for i in range(len(model.schema)):
        if model.nominal_counts[i] is not None:
            per_attr.append({"kind": "nominal",
                             "counts": [list(row) for row in model.nominal_counts[i]]})
        elif model.gaussians[i] is not None:
            per_attr.append({"kind": "gaussian",
                             "per_class": [[m, s] for m, s in model.gaussians[i]]})
        else:
            per_attr.append(None)
    return {
        "smoothing": model.smoothing,
        "class_counts": list(model.class_counts),
        "priors": list(model.priors),
        "attributes": per_attr,
    }


def _nb_from_json(obj, schema: Schema) -> NaiveBayesModel:
    try:
        nominal: list = [None] * len(schema)
        gaussians: list = [None] * len(schema)
        entries = obj["attributes"]
        if len(entries) != len(schema):
            raise ModelFormatError("attribute block length does not match the schema")
        for i, entry in enumerate(entries):
            if entry is None:
                continue
            if entry["kind"] == "nominal":
                nominal[i] = tuple(tuple(int(c) for c in row) for row in entry["counts"])
            elif entry["kind"] == "gaussian":
                gaussians[i] = tuple((float(m), float(s)) for m, s in entry["per_class"])
            else:
                raise ModelFormatError(f"unknown likelihood kind {entry['kind']!r}")
        return NaiveBayesModel(
            schema=schema,
            smoothing=float(obj["smoothing"]),
            class_counts=tuple(int(c) for c in obj["class_counts"]),
            priors=tuple(float(p) for p in obj["priors"]),
            nominal_counts=tuple(nominal),
            gaussians=tuple(gaussians),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"bad naive-bayes block: {exc}") from exc


def serialize_model(model) -> str:
    if isinstance(model, NaiveBayesModel):
        kind, body = "naive-bayes", _nb_to_json(model)
    elif isinstance(model, DecisionTree):
        kind, body = "decision-tree", _tree_to_json(model)
    elif isinstance(model, RandomForestModel):
        kind, body = "random-forest", {
            "seed": model.seed,
            "k_per_split": model.k_per_split,
            "min_leaf": model.min_leaf,
            "bootstrap": model.bootstrap,
            "trees": [_tree_to_json(t) for t in model.trees],
        }
    else:
        raise TypeError(f"not a serializable model: {type(model).__name__}")
    return canonical_json({
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": kind,
        "schema": schema_to_json(model.schema),
        "model": body,
    })


def deserialize_model(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    schema = schema_from_json(doc.get("schema"))
    kind = doc.get("kind")
    body = doc.get("model")
    if not isinstance(body, dict):
        raise ModelFormatError("missing model block")
    if kind == "naive-bayes":
        return _nb_from_json(body, schema)
    if kind == "decision-tree":
        return _tree_from_json(body, schema)
    if kind == "random-forest":
        try:
            return RandomForestModel(
                schema=schema,
                trees=tuple(_tree_from_json(t, schema) for t in body["trees"]),
                k_per_split=int(body["k_per_split"]),
                seed=int(body["seed"]),
                min_leaf=int(body["min_leaf"]),
                bootstrap=bool(body["bootstrap"]),
            )
        except (KeyError, TypeError) as exc:
            raise ModelFormatError(f"bad random-forest block: {exc}") from exc
    raise ModelFormatError(f"unknown model kind {kind!r}")
