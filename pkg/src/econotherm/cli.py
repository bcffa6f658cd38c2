"""Batch command-line interface: fit, compare, series, synth.

Outputs are machine-readable JSON reports plus gnuplot-ready TSV curve
files. Every document embeds the run manifest (command, inputs, config,
version, seed); floats are written with 17 significant digits so that
identical runs produce byte-identical files.

Exit codes: 0 success, 2 parse/input errors, 3 fit/model errors,
4 series mixing, 5 insufficient data.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    ProxySeries,
    extract_series,
    symmetry_check,
    synth_table,
    temperature_report,
)
from .errors import (
    EconothermError,
    InsufficientOverlapError,
    MixedSeriesError,
    OrderError,
    ScaleError,
    SchemaError,
    UnitError,
)
from .fit import FitConfig, FitResult, lm_fit, select_model
from .ingest import (
    DecileTable,
    IncomeBasis,
    TableKind,
    UnitHolder,
    read_tables,
    rescale,
    to_cumulative,
    write_table_csv,
)
from .models import ModelFamily, ModelParams, _values, bg_amplitude

__all__ = ["main"]

_PARSE_ERRORS = (SchemaError, OrderError, UnitError, ScaleError)


# ---------------------------------------------------------------------------
# canonical output formatting


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return f"{x:.17g}"


def _json_dumps(obj, indent: int = 0) -> str:
    """JSON with sorted keys and fixed 17-significant-digit floats."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True or obj is False:
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [_json_dumps(v, indent + 1) for v in obj]
        if not items:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + it for it in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        items = [
            f'{json.dumps(str(k), ensure_ascii=False)}: {_json_dumps(v, indent + 1)}'
            for k, v in sorted(obj.items())
        ]
        if not items:
            return "{}"
        inner = ",\n".join("  " * (indent + 1) + it for it in items)
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _slug(s: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in str(s).lower()).strip("-")


@dataclass(frozen=True)
class RunManifest:
    command: str
    inputs: tuple[str, ...]
    config: dict
    version: str
    seed: int

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": list(self.inputs),
            "config": self.config,
            "version": self.version,
            "seed": self.seed,
        }


def _manifest(args, command: str, inputs, extra: dict | None = None) -> RunManifest:
    config = {
        "max_iterations": args.max_iter,
        "multistart": args.multistart,
        "gradient_tolerance": args.gradient_tol,
        "step_tolerance": args.step_tol,
        "lambda_init": args.lambda_init,
        "mean_offset": args.mean_offset,
        "reject_below": args.reject_below,
        "scale": args.scale,
    }
    if extra:
        config.update(extra)
    return RunManifest(
        command=command,
        inputs=tuple(str(p) for p in inputs),
        config=config,
        version=__version__,
        seed=args.seed,
    )


def _fit_config(args) -> FitConfig:
    return FitConfig(
        max_iterations=args.max_iter,
        gradient_tolerance=args.gradient_tol,
        step_tolerance=args.step_tol,
        lambda_init=args.lambda_init,
        multistart=args.multistart,
        seed=args.seed,
    )


def _table_meta(table: DecileTable) -> dict:
    return {
        "country": table.country,
        "year": table.year,
        "month": table.month,
        "kind": table.kind.value,
        "basis": table.income_basis.value,
        "holder": table.unit_holder.value,
        "currency": table.currency,
        "scale_factor": table.scale_factor,
    }


def _result_doc(fr: FitResult) -> dict:
    doc = {
        "family": fr.family.value,
        "r_squared": fr.r_squared,
        "iterations": fr.iterations,
        "converged": fr.converged,
        "termination": fr.termination.value if fr.termination else None,
        "error": fr.error,
    }
    if fr.params is not None:
        doc["params"] = {"T": fr.params.T, "mu": fr.params.mu, "c": fr.params.c}
        doc["residuals"] = [float(r) for r in fr.residuals]
        if fr.family is ModelFamily.BOLTZMANN_GIBBS:
            doc["bg_amplitude"] = bg_amplitude(fr.params)
    else:
        doc["params"] = None
        doc["residuals"] = []
    return doc


def _table_stem(table: DecileTable) -> str:
    when = f"{table.year}" if table.month is None else f"{table.year}m{table.month:02d}"
    return f"{_slug(table.country)}_{when}_{table.kind.value}"


def _write_curve_tsv(path: Path, manifest_json: str, points, fr: FitResult) -> None:
    """Data block (x, y_data, y_model) then a 200-point dense curve block."""
    p = fr.params
    yhat = _values(fr.family, p.T, p.mu, p.c, points.x)
    dense_x = np.linspace(float(points.x[0]), float(points.x[-1]), 200)
    dense_y = _values(fr.family, p.T, p.mu, p.c, dense_x)
    lines = [
        "# econotherm curve data (gnuplot: set datafile missing 'nan'; blocks: data, dense model)",
        f"# manifest: {manifest_json}",
        "# x\ty_data\ty_model",
    ]
    for xi, yi, mi in zip(points.x, points.y, yhat):
        lines.append(f"{_fmt_float(xi)}\t{_fmt_float(yi)}\t{_fmt_float(mi)}")
    lines.append("")
    lines.append("")
    for xi, mi in zip(dense_x, dense_y):
        lines.append(f"{_fmt_float(xi)}\tnan\t{_fmt_float(mi)}")
    _write_text(path, "\n".join(lines) + "\n")


def _write_series_tsv(path: Path, manifest_json: str, column: str, rows) -> None:
    lines = [
        f"# econotherm series data: {column} by year (month 0 = annual)",
        f"# manifest: {manifest_json}",
        f"# year\tmonth\t{column}\trejected",
    ]
    for year, month, value, rejected in rows:
        lines.append(f"{year}\t{0 if month is None else month}\t{_fmt_float(value)}\t{int(rejected)}")
    _write_text(path, "\n".join(lines) + "\n")


def _load_tables(paths) -> list[tuple[DecileTable, str]]:
    tables = []
    for p in paths:
        for t in read_tables(p):
            tables.append((t, str(p)))
    return tables


# ---------------------------------------------------------------------------
# subcommands


def _cmd_fit(args) -> int:
    families = (
        list(ModelFamily) if args.family == "all" else [ModelFamily.coerce(args.family)]
    )
    manifest = _manifest(args, "fit", args.files, {"family": args.family})
    manifest_json = _json_dumps(manifest.as_dict()).replace("\n", " ")
    config = _fit_config(args)
    out = Path(args.out)

    results = []
    for table, source in _load_tables(args.files):
        points = to_cumulative(table, args.mean_offset)
        if args.scale != 1.0:
            points = rescale(points, args.scale)
        for family in families:
            fr = lm_fit(points, family, config)
            stem = f"curve_{_table_stem(table)}_{family.value}.tsv"
            _write_curve_tsv(out / stem, manifest_json, points, fr)
            doc = _result_doc(fr)
            doc["table"] = _table_meta(table)
            doc["source_file"] = source
            doc["rejected"] = fr.r_squared < args.reject_below
            doc["curve_file"] = stem
            results.append(doc)
            p = fr.params
            print(
                f"{table.label()} [{family.value}] T={p.T:.4f} mu={p.mu:.4f} c={p.c:.4f}"
                f" R^2={fr.r_squared:.4f}{' REJECTED' if doc['rejected'] else ''}"
            )

    report = {"manifest": manifest.as_dict(), "results": results}
    _write_text(out / "fit_report.json", _json_dumps(report) + "\n")
    print(f"wrote {out / 'fit_report.json'}")
    return 0


def _cmd_compare(args) -> int:
    manifest = _manifest(args, "compare", args.files)
    config = _fit_config(args)
    out = Path(args.out)

    comparisons = []
    for table, source in _load_tables(args.files):
        points = to_cumulative(table, args.mean_offset)
        if args.scale != 1.0:
            points = rescale(points, args.scale)
        ranked = select_model(points, config)
        comparisons.append(
            {
                "table": _table_meta(table),
                "source_file": source,
                "ranking": [_result_doc(fr) for fr in ranked],
                "best_family": ranked[0].family.value if ranked[0].error is None else None,
            }
        )
        order = ", ".join(
            f"{fr.family.value}={'err' if fr.error else format(fr.r_squared, '.4f')}"
            for fr in ranked
        )
        print(f"{table.label()}: {order}")

    report = {"manifest": manifest.as_dict(), "comparisons": comparisons}
    _write_text(out / "compare_report.json", _json_dumps(report) + "\n")
    print(f"wrote {out / 'compare_report.json'}")
    return 0


def _cmd_series(args) -> int:
    manifest = _manifest(
        args, "series", list(args.files) + ([args.proxy] if args.proxy else []),
        {"family": args.family},
    )
    manifest_json = _json_dumps(manifest.as_dict()).replace("\n", " ")
    config = _fit_config(args)
    out = Path(args.out)

    tables = [t for t, _ in _load_tables(args.files)]
    if args.scale != 1.0:
        tables = [
            replace(t, values=tuple(v * args.scale for v in t.values),
                    currency=f"{t.currency}*{args.scale:g}")
            for t in tables
        ]
    series = extract_series(
        tables,
        args.family,
        config,
        mean_offset=args.mean_offset,
        reject_below=args.reject_below,
    )

    entries_doc = []
    for e in series.entries:
        entries_doc.append(
            {
                "year": e.year,
                "month": e.month,
                "T": e.params.T,
                "mu": e.params.mu,
                "c": e.params.c,
                "r_squared": e.r_squared,
                "rejected": e.rejected,
                "converged": e.converged,
            }
        )

    report = {
        "manifest": manifest.as_dict(),
        "country": series.country,
        "kind": series.kind.value,
        "basis": series.basis.value,
        "entries": entries_doc,
    }

    usable = [e for e in series.entries if not e.rejected]
    if len(usable) >= 2:
        trend = temperature_report(series)
        report["temperature"] = {
            "trajectory": [[y, t] for y, t in trend.temperatures],
            "deltas": [[y, d] for y, d in trend.deltas],
            "flagged_drops": list(trend.flagged_drops),
        }
        flags = ", ".join(str(y) for y in trend.flagged_drops) or "none"
        print(f"temperature drop years: {flags}")

    if args.proxy:
        proxy = ProxySeries.from_csv(args.proxy)
        sym = symmetry_check(series, proxy)
        report["symmetry"] = {
            "pearson_r": sym.pearson_r,
            "sign_agreement": sym.sign_agreement,
            "n_overlap": sym.n_overlap,
        }
        print(
            f"symmetry vs proxy: pearson_r={sym.pearson_r:.4f}"
            f" sign_agreement={sym.sign_agreement:.4f} n={sym.n_overlap}"
        )

    _write_series_tsv(
        out / "series_T.tsv",
        manifest_json,
        "T",
        [(e.year, e.month, e.params.T, e.rejected) for e in series.entries],
    )
    _write_series_tsv(
        out / "series_mu.tsv",
        manifest_json,
        "mu",
        [(e.year, e.month, e.params.mu, e.rejected) for e in series.entries],
    )
    _write_text(out / "series_report.json", _json_dumps(report) + "\n")
    print(f"wrote {out / 'series_report.json'}")
    return 0


def _cmd_synth(args) -> int:
    try:
        t_str, mu_str, c_str = args.params.split(",")
        params = ModelParams(T=float(t_str), mu=float(mu_str), c=float(c_str))
    except ValueError as exc:
        print(f"bad --params: {exc}", file=sys.stderr)
        return 2
    kind = TableKind.coerce(args.kind)
    table = synth_table(
        params,
        args.family,
        kind,
        noise_sigma=args.sigma,
        seed=args.seed,
        mean_offset=args.mean_offset,
        country=args.country,
        currency=args.currency,
        basis=IncomeBasis(args.basis),
        holder=UnitHolder(args.holder),
        year=args.year,
        month=args.month,
    )
    out = Path(args.out)
    stem = f"synth_{args.family}_{kind.value}_{args.year}"
    csv_path = out / f"{stem}.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        write_table_csv(table, fh)
    manifest = _manifest(
        args,
        "synth",
        [],
        {
            "family": args.family,
            "kind": kind.value,
            "params": {"T": params.T, "mu": params.mu, "c": params.c},
            "sigma": args.sigma,
        },
    )
    _write_text(out / f"{stem}.manifest.json", _json_dumps(manifest.as_dict()) + "\n")
    print(f"wrote {csv_path}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="econotherm",
        description="Fit statistical-mechanics curves to decile income tables.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mean-offset", dest="mean_offset", type=float, default=5.0,
                        help="cumulative percent offset for mean-income deciles (default 5)")
    common.add_argument("--reject-below", dest="reject_below", type=float, default=0.9,
                        help="R^2 threshold under which a fit is flagged rejected")
    common.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    common.add_argument("--multistart", type=int, default=8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--scale", type=float, default=1.0,
                        help="currency factor applied to incomes before fitting")
    common.add_argument("--gradient-tol", dest="gradient_tol", type=float, default=1e-10)
    common.add_argument("--step-tol", dest="step_tol", type=float, default=1e-12)
    common.add_argument("--lambda-init", dest="lambda_init", type=float, default=1e-3)
    common.add_argument("--out", default=".", help="output directory")

    p_fit = sub.add_parser("fit", parents=[common], help="fit one family per table")
    p_fit.add_argument("files", nargs="+")
    p_fit.add_argument("--family", choices=["fd", "be", "bg", "all"], default="fd")
    p_fit.set_defaults(func=_cmd_fit)

    p_cmp = sub.add_parser("compare", parents=[common], help="rank all families per table")
    p_cmp.add_argument("files", nargs="+")
    p_cmp.set_defaults(func=_cmd_compare)

    p_ser = sub.add_parser("series", parents=[common], help="multi-year parameter series")
    p_ser.add_argument("files", nargs="+")
    p_ser.add_argument("--family", choices=["fd", "be", "bg"], default="fd")
    p_ser.add_argument("--proxy", default=None, help="year,growth_percent CSV for the symmetry check")
    p_ser.set_defaults(func=_cmd_series)

    p_syn = sub.add_parser("synth", parents=[common], help="generate a synthetic table CSV")
    p_syn.add_argument("--params", required=True, help="T,mu,c")
    p_syn.add_argument("--family", choices=["fd", "be", "bg"], default="fd")
    p_syn.add_argument("--kind", choices=[k.value for k in TableKind], default="upper")
    p_syn.add_argument("--sigma", type=float, default=0.0)
    p_syn.add_argument("--country", default="synthetic")
    p_syn.add_argument("--currency", default="unit")
    p_syn.add_argument("--basis", choices=[b.value for b in IncomeBasis], default="unspecified")
    p_syn.add_argument("--holder", choices=[h.value for h in UnitHolder], default="individual")
    p_syn.add_argument("--year", type=int, default=2000)
    p_syn.add_argument("--month", type=int, default=None)
    p_syn.set_defaults(func=_cmd_synth)

    return parser


def _exit_code(exc: EconothermError) -> int:
    if isinstance(exc, _PARSE_ERRORS):
        return 2
    if isinstance(exc, MixedSeriesError):
        return 4
    if isinstance(exc, InsufficientOverlapError):
        return 5
    return 3


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EconothermError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
