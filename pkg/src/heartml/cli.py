"""Command-line interface.

One binary, seven pipeline subcommands (inspect, convert, select, train,
predict, evaluate, experiment) plus ``synth`` for generating datasets.

Exit codes: 0 success, 2 missing input file, 3 parse/validation failure,
4 configuration error, 5 training failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .arff import parse_arff, write_arff
from .cfs import CorrelationCache, best_first_select
from .csvio import parse_csv
from .dataset import Dataset, nominal_to_numeric_view
from .errors import (
    ConfigError,
    DataFormatError,
    HeartmlError,
    InvalidSpecError,
    SchemaMismatchError,
    TrainingError,
)
from .experiment import (
    ClassifierConfig,
    ExperimentGrid,
    evaluate_cell,
    resolve_features,
    run_experiment,
)
from .crossval import make_cv_plan
from .metrics import format_percent
from .model_io import deserialize_model, serialize_model
from .reports import (
    render_report_csv,
    render_report_json,
    render_report_text,
    render_summary_csv,
    render_summary_json,
    render_summary_text,
)
from .schema import Schema, heart_schema
from .synthetic import SyntheticSpec, generate_synthetic, heart_synthetic_params

_FORMAT_EXT = {"text": "txt", "json": "json", "csv": "csv"}
_OUTDIR_ENV = "HEARTML_OUT"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit 4)."""

    def error(self, message):
        raise ConfigError(message)


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (FileNotFoundError, IsADirectoryError)):
        return 2
    if isinstance(exc, (DataFormatError, SchemaMismatchError)):
        return 3
    if isinstance(exc, ConfigError):
        return 4
    if isinstance(exc, TrainingError):
        return 5
    return 1


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_schema(spec: str | None) -> Schema:
    if spec is None or spec == "heart":
        return heart_schema()
    return parse_arff(_read_text(spec)).schema


def _read_dataset(path: str, *, schema: str | None = None, target: str | None = None) -> Dataset:
    """Parse an input file: ARFF by default, CSV (against a schema) for .csv."""
    text = _read_text(path)
    if path.lower().endswith(".csv"):
        return parse_csv(text, _load_schema(schema), name=Path(path).stem)
    return parse_arff(text, target=target)


def _write_output(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, encoding="utf-8")


def _parse_formats(text: str) -> list[str]:
    formats = [p.strip() for p in text.split(",") if p.strip()]
    bad = [f for f in formats if f not in _FORMAT_EXT]
    if bad:
        raise ConfigError(f"unknown report formats {bad}; expected text, json, csv")
    if not formats:
        raise ConfigError("no report formats given")
    return list(dict.fromkeys(formats))


def _parse_feature_spec(text: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split a --features value into (modes, explicit names).

    Values made only of ``all``/``cfs`` are modes; anything else is a list of
    attribute names selecting the explicit mode.
    """
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ConfigError("empty --features value")
    if all(p in ("all", "cfs") for p in parts):
        return tuple(dict.fromkeys(parts)), ()
    return ("explicit",), tuple(parts)


def _classifier_config(kind: str, args) -> ClassifierConfig:
    return ClassifierConfig(
        kind=kind,
        smoothing=args.smoothing,
        min_leaf=args.min_leaf,
        cf=args.cf,
        prune=not args.no_prune,
        allow_zero_gain=args.allow_zero_gain_splits,
        trees=args.trees,
        k_per_split=args.k_per_split,
        seed=args.seed,
    )


def _add_input_flags(p, *, schema_help=True):
    p.add_argument("--input", required=True, help="input data file (.arff, or .csv with --schema)")
    if schema_help:
        p.add_argument("--schema", default=None,
                       help="schema for CSV input: 'heart' (default) or an ARFF file to copy")
    p.add_argument("--target", default=None,
                   help="ARFF target attribute name (default: % target directive or last column)")


def _add_classifier_flags(p):
    p.add_argument("--smoothing", type=float, default=1.0, help="Laplace constant for nb (default 1.0)")
    p.add_argument("--min-leaf", type=int, default=None,
                   help="minimum instances per branch (default: 2 for j48, 1 for rf)")
    p.add_argument("--cf", type=float, default=0.25, help="pruning confidence factor (default 0.25)")
    p.add_argument("--no-prune", action="store_true", help="skip error-based pruning (j48)")
    p.add_argument("--allow-zero-gain-splits", action="store_true",
                   help="split on zero-gain candidates instead of stopping at a majority leaf")
    p.add_argument("--trees", type=int, default=100, help="forest size (default 100)")
    p.add_argument("--k-per-split", type=int, default=None,
                   help="features sampled per forest split (default floor(log2 M)+1)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")


def _add_cv_flags(p):
    p.add_argument("--folds", type=int, default=10, help="cross-validation folds (default 10)")
    p.add_argument("--no-stratify", action="store_true", help="plain instead of stratified folds")
    p.add_argument("--formats", default="text,json,csv",
                   help="report formats, comma-separated (default text,json,csv)")
    p.add_argument("--max-stale", type=int, default=5,
                   help="best-first stop: consecutive non-improving expansions (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heartml",
                     description="Heart-disease classification pipeline: data tools, "
                                 "CFS feature selection, nb/j48/rf classifiers, "
                                 "stratified cross-validation and exact-CI metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="print schema, class balance and missing-value summary")
    _add_input_flags(p)
    p.set_defaults(handler=cmd_inspect)

    p = sub.add_parser("convert", help="convert CSV to ARFF under a schema")
    _add_input_flags(p)
    p.add_argument("--out", required=True, help="output ARFF path")
    p.add_argument("--relation", default=None, help="relation name (default: input file stem)")
    p.add_argument("--nominal-to-numeric", action="store_true",
                   help="re-type nominal features as numeric category indices")
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("select", help="correlation-based feature selection")
    _add_input_flags(p)
    p.add_argument("--method", choices=["cfs"], default="cfs")
    p.add_argument("--search", choices=["best-first"], default="best-first")
    p.add_argument("--max-stale", type=int, default=5,
                   help="stop after this many non-improving expansions (default 5)")
    p.add_argument("--discretize", choices=["mdl", "equal-frequency"], default="mdl",
                   help="numeric discretization for the correlations (default mdl)")
    p.add_argument("--bins", type=int, default=10, help="bins for equal-frequency (default 10)")
    p.add_argument("--out", default=None, help="subset JSON path (default: stdout)")
    p.set_defaults(handler=cmd_select)

    p = sub.add_parser("train", help="train one classifier on the full input")
    _add_input_flags(p)
    p.add_argument("--classifier", choices=["nb", "j48", "rf"], required=True)
    p.add_argument("--features", default="all",
                   help="'all', 'cfs', or comma-separated attribute names (default all)")
    _add_classifier_flags(p)
    p.add_argument("--max-stale", type=int, default=5, help="best-first stop for --features cfs")
    p.add_argument("--out", default=None, help="model JSON path (default: stdout)")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("predict", help="apply a trained model to new rows")
    p.add_argument("--model", required=True, help="model JSON file from 'train'")
    p.add_argument("--input", required=True, help="rows to classify (.arff or .csv)")
    p.add_argument("--out", default=None, help="predictions CSV path (default: stdout)")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("evaluate", help="cross-validate one classifier and report metrics")
    _add_input_flags(p)
    p.add_argument("--classifier", choices=["nb", "j48", "rf"], required=True)
    p.add_argument("--features", default="all",
                   help="'all', 'cfs', or comma-separated attribute names (default all)")
    _add_classifier_flags(p)
    _add_cv_flags(p)
    p.add_argument("--out", default=None,
                   help="directory for report files (default: print text to stdout)")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("experiment", help="run the full classifier x feature-set grid")
    _add_input_flags(p)
    p.add_argument("--classifiers", default="j48,nb,rf",
                   help="comma-separated subset of j48,nb,rf (default all three)")
    p.add_argument("--features", default="all,cfs",
                   help="feature modes 'all'/'cfs', or attribute names for one explicit cell")
    _add_classifier_flags(p)
    _add_cv_flags(p)
    p.add_argument("--workers", type=int, default=1, help="concurrent grid cells (default 1)")
    p.add_argument("--outdir", default=None,
                   help=f"report directory (default: ${_OUTDIR_ENV})")
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--n", type=int, default=529, help="instances to generate (default 529)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--spec", default=None,
                   help="JSON distribution parameters (default: built-in heart profile)")
    p.add_argument("--schema", default=None,
                   help="schema the spec applies to: 'heart' (default) or an ARFF file")
    p.add_argument("--relation", default="heart-synthetic", help="relation name")
    p.add_argument("--out", default=None, help="output ARFF path (default: stdout)")
    p.set_defaults(handler=cmd_synth)

    return parser


def cmd_inspect(args) -> int:
    ds = _read_dataset(args.input, schema=args.schema, target=args.target)
    schema = ds.schema
    names = [a.name for a in schema.attributes]
    width = max(len(n) for n in names + ["name"])
    lines = [
        f"relation: {ds.name}",
        f"instances: {len(ds)}",
        f"attributes: {len(schema)} ({len(schema.feature_indices)} features, "
        f"target {schema.target.name!r})",
        "",
        f" {'#':>2}  {'name':<{width}}  {'type':<8}{'role':<9}categories",
    ]
    for i, attr in enumerate(schema.attributes, start=1):
        cats = ", ".join(attr.categories) if attr.is_nominal else ""
        lines.append(f" {i:>2}  {attr.name:<{width}}  {attr.kind:<8}{attr.role.value:<9}{cats}")
    lines += ["", "class balance:"]
    counts = ds.class_counts()
    total = sum(counts)
    for label, count in zip(schema.class_labels, counts):
        share = f" ({format_percent(100.0 * count / total)}%)" if total else ""
        lines.append(f"  {label!r}: {count}{share}")
    lines += ["", "missing values per attribute:"]
    missing = ds.missing_counts()
    rows = [f"  {schema.attributes[i].name}: {m}" for i, m in enumerate(missing) if m]
    lines += rows if rows else ["  none"]
    print("\n".join(lines))
    return 0


def cmd_convert(args) -> int:
    if not args.input.lower().endswith(".csv"):
        raise ConfigError("convert expects a .csv input")
    ds = parse_csv(_read_text(args.input), _load_schema(args.schema),
                   name=args.relation or Path(args.input).stem)
    if args.nominal_to_numeric:
        ds = nominal_to_numeric_view(ds)
    _write_output(args.out, write_arff(ds))
    return 0


def cmd_select(args) -> int:
    ds = _read_dataset(args.input, schema=args.schema, target=args.target)
    ds.require_known_targets()
    cache = CorrelationCache(ds, method=args.discretize, bins=args.bins)
    selected = best_first_select(cache, max_stale=args.max_stale)
    merit = cache.merit(selected) if selected else 0.0
    doc = {
        "format": "heartml-subset",
        "version": 1,
        "method": args.method,
        "search": args.search,
        "max_stale": args.max_stale,
        "attributes": [ds.schema.attributes[i].name for i in selected],
        "merit": merit,
    }
    _write_output(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_train(args) -> int:
    ds = _read_dataset(args.input, schema=args.schema, target=args.target)
    ds.require_known_targets()
    modes, explicit = _parse_feature_spec(args.features)
    selection = resolve_features(ds, modes[0], explicit_names=explicit,
                                 max_stale=args.max_stale)
    config = _classifier_config(args.classifier, args)
    model = config.trainer()(ds.select_features(selection.indices))
    _write_output(args.out, serialize_model(model))
    return 0


def cmd_predict(args) -> int:
    model = deserialize_model(_read_text(args.model))
    schema = model.schema
    text = _read_text(args.input)
    if args.input.lower().endswith(".csv"):
        ds = parse_csv(text, schema)
        rows = ds.rows
    else:
        ds = parse_arff(text)
        rows = _project_rows(ds, schema)
    labels = schema.class_labels
    lines = ["index,prediction," + ",".join(f"p_{label}" for label in labels)]
    for i, row in enumerate(rows, start=1):
        dist = model.predict_row(row)
        label = labels[dist.index(max(dist))]
        lines.append(f"{i},{label}," + ",".join(repr(p) for p in dist))
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def _project_rows(ds: Dataset, schema: Schema):
    """Align parsed rows to a model's schema by attribute name.

    Every model feature must be present with the same kind (and categories);
    a missing target column becomes all-missing.
    """
    if ds.schema == schema:
        return ds.rows
    positions = []
    for attr in schema.attributes:
        try:
            src = ds.schema.index_of(attr.name)
        except KeyError:
            if attr.role.value == "target":
                positions.append(None)
                continue
            raise SchemaMismatchError(f"input has no column named {attr.name!r}") from None
        found = ds.schema.attributes[src]
        if found.kind != attr.kind or (attr.is_nominal and found.categories != attr.categories):
            raise SchemaMismatchError(
                f"column {attr.name!r} does not match the model "
                f"(expected {attr.kind}{list(attr.categories) if attr.is_nominal else ''})")
        positions.append(src)
    return tuple(
        tuple(None if src is None else row[src] for src in positions)
        for row in ds.rows
    )


def _write_report_files(outdir: Path, name: str, report, formats) -> None:
    renderers = {"text": render_report_text, "json": render_report_json,
                 "csv": render_report_csv}
    for fmt in formats:
        path = outdir / f"{name}.{_FORMAT_EXT[fmt]}"
        path.write_text(renderers[fmt](report), encoding="utf-8")


def cmd_evaluate(args) -> int:
    ds = _read_dataset(args.input, schema=args.schema, target=args.target)
    ds.require_known_targets()
    formats = _parse_formats(args.formats)
    modes, explicit = _parse_feature_spec(args.features)
    selection = resolve_features(ds, modes[0], explicit_names=explicit,
                                 max_stale=args.max_stale)
    config = _classifier_config(args.classifier, args)
    plan = make_cv_plan(ds, args.folds, seed=args.seed, stratified=not args.no_stratify)
    report = evaluate_cell(ds, config, selection, plan)
    if args.out is None:
        sys.stdout.write(render_report_text(report))
    else:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_report_files(outdir, f"{config.kind}_{selection.mode}", report, formats)
    return 0


def cmd_experiment(args) -> int:
    ds = _read_dataset(args.input, schema=args.schema, target=args.target)
    formats = _parse_formats(args.formats)
    outdir_value = args.outdir or os.environ.get(_OUTDIR_ENV)
    if not outdir_value:
        raise ConfigError(f"no output directory: pass --outdir or set ${_OUTDIR_ENV}")
    kinds = [k.strip() for k in args.classifiers.split(",") if k.strip()]
    if not kinds:
        raise ConfigError("empty --classifiers value")
    modes, explicit = _parse_feature_spec(args.features)
    grid = ExperimentGrid(
        classifiers=tuple(_classifier_config(kind, args) for kind in kinds),
        feature_modes=modes,
        explicit_names=explicit,
        folds=args.folds,
        seed=args.seed,
        stratified=not args.no_stratify,
        max_stale=args.max_stale,
    )
    result = run_experiment(ds, grid, workers=args.workers)

    outdir = Path(outdir_value)
    outdir.mkdir(parents=True, exist_ok=True)
    for cell in result.cells:
        if cell.report is not None:
            _write_report_files(outdir, cell.name, cell.report, formats)
    reports = result.reports
    summary = {
        "text": render_summary_text, "json": render_summary_json, "csv": render_summary_csv,
    }
    for fmt in formats:
        content = summary[fmt](reports, folds=args.folds, seed=args.seed)
        (outdir / f"summary.{_FORMAT_EXT[fmt]}").write_text(content, encoding="utf-8")
    sys.stdout.write(render_summary_text(reports, folds=args.folds, seed=args.seed))

    if result.failed:
        for cell in result.failed:
            print(f"cell {cell.name} failed: {cell.error}", file=sys.stderr)
        return max(_exit_code(cell.error) for cell in result.failed)
    return 0


def cmd_synth(args) -> int:
    if args.n < 1:
        raise ConfigError(f"need n >= 1, got {args.n}")
    schema = _load_schema(args.schema)
    if args.spec is None:
        params = heart_synthetic_params()
        if args.schema not in (None, "heart"):
            raise ConfigError("a custom schema needs --spec distribution parameters")
    else:
        try:
            params = json.loads(_read_text(args.spec))
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(f"spec is not valid JSON: {exc}") from exc
    spec = SyntheticSpec.from_json(params, schema)
    ds = generate_synthetic(spec, args.n, args.seed, name=args.relation)
    _write_output(args.out, write_arff(ds))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except (FileNotFoundError, IsADirectoryError) as exc:
        name = getattr(exc, "filename", None) or exc
        print(f"error: cannot read {name}", file=sys.stderr)
        return 2
    except HeartmlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
