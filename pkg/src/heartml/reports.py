"""Evaluation reports: one cross-validated (classifier, feature set) cell.

Three renderings: paper-style text, CSV, and a versioned JSON document (the
JSON schema ships with the package under schemas/report.schema.json). All
renderings are deterministic; no timestamps or environment details.
"""

from __future__ import annotations

import csv as _csv
import io
from dataclasses import dataclass

from .metrics import ConfusionMatrix, MetricsReport, format_percent
from .model_io import canonical_json

REPORT_FORMAT = "heartml-report"
SUMMARY_FORMAT = "heartml-summary"
REPORT_VERSION = 1


@dataclass(frozen=True)
class EvaluationReport:
    relation: str
    classifier: str
    classifier_params: tuple[tuple[str, object], ...]  # sorted (name, value) pairs
    feature_mode: str            # all | cfs | explicit
    feature_names: tuple[str, ...]
    merit: float | None          # CFS merit of the selected subset, if any
    folds: int
    seed: int
    stratified: bool
    n_instances: int
    positive_label: str
    pooled: ConfusionMatrix
    fold_matrices: tuple[ConfusionMatrix, ...]
    metrics: MetricsReport


def _matrix_dict(cm: ConfusionMatrix) -> dict:
    return {"tp": cm.tp, "tn": cm.tn, "fp": cm.fp, "fn": cm.fn}


def _metric_dict(value, ci) -> dict | None:
    if value is None:
        return None
    out = {"value_pct": value}
    if ci is not None:
        out["ci_pct"] = [ci[0], ci[1]]
    return out


def report_to_json_dict(report: EvaluationReport) -> dict:
    m = report.metrics
    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "relation": report.relation,
        "classifier": report.classifier,
        "classifier_params": dict(report.classifier_params),
        "features": {
            "mode": report.feature_mode,
            "names": list(report.feature_names),
            "merit": report.merit,
        },
        "cross_validation": {
            "folds": report.folds,
            "seed": report.seed,
            "stratified": report.stratified,
            "n_instances": report.n_instances,
        },
        "positive_label": report.positive_label,
        "confusion": {
            "pooled": _matrix_dict(report.pooled),
            "per_fold": [_matrix_dict(cm) for cm in report.fold_matrices],
        },
        "metrics": {
            "level": m.level,
            "accuracy": _metric_dict(m.accuracy, m.accuracy_ci),
            "sensitivity": _metric_dict(m.sensitivity, m.sensitivity_ci),
            "specificity": _metric_dict(m.specificity, m.specificity_ci),
            "misclassification": _metric_dict(m.misclassification, None),
        },
    }


def render_report_json(report: EvaluationReport) -> str:
    return canonical_json(report_to_json_dict(report))


def _params_text(params) -> str:
    return ", ".join(f"{k}={v}" for k, v in params)


def _metric_lines(m: MetricsReport):
    level_pct = format_percent(100.0 * m.level, 0)
    rows = [
        ("accuracy", m.accuracy, m.accuracy_ci),
        ("sensitivity", m.sensitivity, m.sensitivity_ci),
        ("specificity", m.specificity, m.specificity_ci),
        ("misclassification", m.misclassification, None),
    ]
    lines = [f"{'metric':<18}{'value':>10}   {level_pct}% CI"]
    for name, value, ci in rows:
        if value is None:
            lines.append(f"{name:<18}{'undefined':>10}")
            continue
        text = f"{name:<18}{format_percent(value) + '%':>10}"
        if ci is not None:
            text += f"   {format_percent(ci[0])}% to {format_percent(ci[1])}%"
        lines.append(text)
    return lines


def render_report_text(report: EvaluationReport) -> str:
    cm = report.pooled
    lines = [
        f"relation: {report.relation}",
        f"classifier: {report.classifier}",
        f"parameters: {_params_text(report.classifier_params)}",
        f"features ({report.feature_mode}, {len(report.feature_names)}): "
        + ", ".join(report.feature_names),
    ]
    if report.merit is not None:
        lines.append(f"selection merit: {report.merit!r}")
    strat = "stratified" if report.stratified else "unstratified"
    lines += [
        f"cross-validation: {report.folds}-fold, {strat}, seed {report.seed}, "
        f"{report.n_instances} instances",
        "",
        f"confusion matrix (pooled; positive class = {report.positive_label!r}):",
        f"{'':>14}{'predicted +':>14}{'predicted -':>14}",
        f"{'actual +':>14}{f'{cm.tp} (TP)':>14}{f'{cm.fn} (FN)':>14}",
        f"{'actual -':>14}{f'{cm.fp} (FP)':>14}{f'{cm.tn} (TN)':>14}",
        "",
    ]
    lines += _metric_lines(report.metrics)
    return "\n".join(lines) + "\n"


def render_report_csv(report: EvaluationReport) -> str:
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value", "ci_lower", "ci_upper"])
    cm = report.pooled
    for name, value in (("tp", cm.tp), ("tn", cm.tn), ("fp", cm.fp), ("fn", cm.fn)):
        writer.writerow([name, value, "", ""])
    m = report.metrics
    for name, value, ci in (
        ("accuracy", m.accuracy, m.accuracy_ci),
        ("sensitivity", m.sensitivity, m.sensitivity_ci),
        ("specificity", m.specificity, m.specificity_ci),
        ("misclassification", m.misclassification, None),
    ):
        if value is None:
            writer.writerow([name, "undefined", "", ""])
        elif ci is None:
            writer.writerow([name, format_percent(value), "", ""])
        else:
            writer.writerow([name, format_percent(value),
                             format_percent(ci[0]), format_percent(ci[1])])
    return buf.getvalue()


def _summary_cells(reports) -> list[dict]:
    cells = []
    for r in reports:
        m = r.metrics
        cells.append({
            "classifier": r.classifier,
            "features": r.feature_mode,
            "accuracy_pct": m.accuracy,
            "sensitivity_pct": m.sensitivity,
            "specificity_pct": m.specificity,
            "misclassification_pct": m.misclassification,
        })
    return cells


def summary_to_json_dict(reports, *, folds: int, seed: int) -> dict:
    return {
        "format": SUMMARY_FORMAT,
        "version": REPORT_VERSION,
        "folds": folds,
        "seed": seed,
        "cells": _summary_cells(reports),
    }


def render_summary_json(reports, *, folds: int, seed: int) -> str:
    return canonical_json(summary_to_json_dict(reports, folds=folds, seed=seed))


def _fmt_or_dash(value) -> str:
    return format_percent(value) + "%" if value is not None else "-"


def render_summary_text(reports, *, folds: int, seed: int) -> str:
    lines = [
        f"classifier performance summary ({folds}-fold cross-validation, seed {seed})",
        "",
        f"{'classifier':<12}{'features':<10}{'accuracy':>10}{'sensitivity':>13}{'specificity':>13}",
    ]
    for r in reports:
        m = r.metrics
        lines.append(
            f"{r.classifier:<12}{r.feature_mode:<10}{_fmt_or_dash(m.accuracy):>10}"
            f"{_fmt_or_dash(m.sensitivity):>13}{_fmt_or_dash(m.specificity):>13}"
        )
    return "\n".join(lines) + "\n"


def render_summary_csv(reports, *, folds: int, seed: int) -> str:
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["classifier", "features", "accuracy_pct", "sensitivity_pct",
                     "specificity_pct", "misclassification_pct"])
    for r in reports:
        m = r.metrics
        writer.writerow([
            r.classifier,
            r.feature_mode,
            format_percent(m.accuracy) if m.accuracy is not None else "",
            format_percent(m.sensitivity) if m.sensitivity is not None else "",
            format_percent(m.specificity) if m.specificity is not None else "",
            format_percent(m.misclassification) if m.misclassification is not None else "",
        ])
    return buf.getvalue()
