"""Optimised-bound tables, convexity vs sub-convexity crossover, and reports."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

from . import __version__
from .errors import NoSignChange, SerializationError, TuringBoundError
from .optimizer import optimize_full
from .strip_bounds import CONVEXITY, SUBCONVEXITY, GrowthParams
from .turing_coeffs import ENGINE_TOL

CANONICAL_HEIGHTS = tuple(10.0**k for k in range(5, 16))

# Coefficients of the earlier theorem at each height; reference values only.
THM22_REFERENCE = {
    1e5: 2.747,
    1e6: 2.883,
    1e7: 3.018,
    1e8: 3.154,
    1e9: 3.290,
    1e10: 3.426,
    1e11: 3.562,
    1e12: 3.698,
    1e13: 3.834,
    1e14: 3.969,
    1e15: 4.105,
}

CSV_COLUMNS = ("T", "thm22", "convexity", "subconvexity", "d", "delta", "a", "b", "c")
_ROW_ATTRS = (
    "T",
    "thm22_reference",
    "bound_convexity",
    "bound_subconvexity",
    "d_star",
    "delta_star",
    "a",
    "b",
    "c",
)
CROSSOVER_RTOL = 1e-3


@dataclass(frozen=True)
class TableRow:
    T: float
    thm22_reference: float | None
    bound_convexity: float
    bound_subconvexity: float
    d_star: float
    delta_star: float
    a: float
    b: float
    c: float
    error: str | None = None


DEFAULT_PAIR = (CONVEXITY, SUBCONVEXITY)


def _failed_row(T: float, exc: Exception) -> TableRow:
    nan = math.nan
    return TableRow(T, THM22_REFERENCE.get(T), nan, nan, nan, nan, nan, nan, nan, error=str(exc))


def build_row(
    T: float, params_pair=DEFAULT_PAIR, t0: float | None = None, tol: float = ENGINE_TOL
) -> TableRow:
    conv, sub = params_pair
    try:
        rc = optimize_full(conv, T, t0, tol)
        rs = optimize_full(sub, T, t0, tol)
    except TuringBoundError as exc:
        return _failed_row(T, exc)
    return TableRow(
        T=float(T),
        thm22_reference=THM22_REFERENCE.get(float(T)),
        bound_convexity=rc.objective,
        bound_subconvexity=rs.objective,
        d_star=rs.best_d,
        delta_star=rs.best_delta,
        a=rs.triple.a,
        b=rs.triple.b,
        c=rs.triple.c,
    )


def build_table(
    T_list,
    params_pair=DEFAULT_PAIR,
    t0: float | None = None,
    tol: float = ENGINE_TOL,
    max_workers: int = 1,
) -> list[TableRow]:
    """One row per height, in the order given.

    A row whose optimisation fails carries the error message and NaN bounds;
    the remaining rows are unaffected.
    """
    T_list = [float(T) for T in T_list]
    if max_workers <= 1:
        return [build_row(T, params_pair, t0, tol) for T in T_list]
    with ThreadPoolExecutor(max_workers) as pool:
        return list(pool.map(lambda T: build_row(T, params_pair, t0, tol), T_list))


def objective_gap(
    params_pair, T: float, t0: float | None = None, tol: float = ENGINE_TOL
) -> float:
    """Sub-convexity minus convexity optimised bound at height T."""
    conv, sub = params_pair
    return optimize_full(sub, T, t0, tol).objective - optimize_full(conv, T, t0, tol).objective


def find_crossover(
    params_pair,
    T_low: float,
    T_high: float,
    t0: float | None = None,
    tol: float = ENGINE_TOL,
) -> float:
    """Height where the sub-convexity bound drops below the convexity one.

    Bisects on log T until ``T_high / T_low <= 1 + 1e-3`` and returns the
    geometric midpoint of the final bracket.
    """
    lo, hi = float(T_low), float(T_high)
    g_lo = objective_gap(params_pair, lo, t0, tol)
    g_hi = objective_gap(params_pair, hi, t0, tol)
    if not g_lo * g_hi < 0:
        raise NoSignChange(
            f"objective gap has no sign change on [{lo:.6g}, {hi:.6g}]: {g_lo:.6g}, {g_hi:.6g}"
        )
    while hi / lo > 1 + CROSSOVER_RTOL:
        mid = math.sqrt(lo * hi)
        g_mid = objective_gap(params_pair, mid, t0, tol)
        if g_mid == 0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def format_height(T: float) -> str:
    """Compact scientific form, e.g. ``1e10`` or ``2.85e10``."""
    mant, exp = f"{T:.6e}".split("e")
    mant = mant.rstrip("0").rstrip(".")
    return f"{mant}e{int(exp)}"


def report_metadata(
    params_pair=DEFAULT_PAIR, t0: float | None = None, tol: float = ENGINE_TOL
) -> dict:
    conv, sub = params_pair
    return {
        "artifact_version": __version__,
        "presets": {
            "convexity": {"name": conv.name, "k": list(conv.as_tuple()[:5]), "Q0": conv.Q0},
            "subconvexity": {"name": sub.name, "k": list(sub.as_tuple()[:5]), "Q0": sub.Q0},
        },
        "t0": "T" if t0 is None else t0,
        "engine_tolerance": tol,
        "logarithms": "natural",
    }


def _validate(row) -> None:
    if not isinstance(row, TableRow):
        raise SerializationError(f"not a TableRow: {row!r}")
    for name in _ROW_ATTRS:
        v = getattr(row, name)
        if name == "thm22_reference" and v is None:
            continue
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SerializationError(f"field {name} is not numeric: {v!r}")
        if row.error is None and not math.isfinite(v):
            raise SerializationError(f"field {name} is not finite: {v!r}")


def emit_report(rows, fmt: str = "csv", metadata: dict | None = None) -> bytes:
    """Serialise rows as CSV (6 decimals, ``#`` metadata lines) or JSON."""
    for row in rows:
        _validate(row)
    meta = report_metadata() if metadata is None else metadata
    if fmt == "json":
        doc = {"metadata": meta, "rows": [asdict(r) for r in rows]}
        return (json.dumps(doc, indent=2, allow_nan=True) + "\n").encode()
    if fmt != "csv":
        raise SerializationError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {json.dumps(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        if r.error is not None:
            buf.write(f"# failed T={format_height(r.T)}: {r.error}\n")
            continue
        cells = [format_height(r.T)]
        for name in _ROW_ATTRS[1:]:
            v = getattr(r, name)
            cells.append("" if v is None else f"{v:.6f}")
        writer.writerow(cells)
    return buf.getvalue().encode()


def parse_report(data: bytes, fmt: str = "csv") -> tuple[dict, list[TableRow]]:
    """Inverse of :func:`emit_report` (CSV values come back rounded)."""
    text = data.decode()
    if fmt == "json":
        doc = json.loads(text)
        names = {f.name for f in fields(TableRow)}
        rows = [TableRow(**{k: v for k, v in r.items() if k in names}) for r in doc["rows"]]
        return doc["metadata"], rows
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# failed"):
            continue
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    reader = csv.DictReader(body)
    rows = []
    for rec in reader:
        vals = [rec[c] for c in CSV_COLUMNS]
        nums = [float(v) if v != "" else None for v in vals]
        rows.append(TableRow(*nums))
    return meta, rows
