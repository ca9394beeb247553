"""Command-line front end.

Subcommands: ``coeffs``, ``optimize``, ``table``, ``crossover`` and
``verify``.  Options may also come from a flat ``key = value`` file given
with ``--config``; flags on the command line win.

Exit codes: 0 success, 1 other failure, 2 domain error, 3 bracketing
error, 4 verification violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, NoSignChange, TuringBoundError
from .optimizer import optimize_full
from .strip_bounds import (
    PRESETS,
    GrowthParams,
    StripConfig,
    bound_left,
    bound_right,
)
from .tabulator import (
    CANONICAL_HEIGHTS,
    build_table,
    emit_report,
    find_crossover,
    format_height,
    report_metadata,
)
from .turing_coeffs import ENGINE_TOL, THEOREM_T0, Knobs, compute_triple, headline_bound
from .zeta_engine import check_tol, zeta_complex_line

EXIT_OK, EXIT_OTHER, EXIT_DOMAIN, EXIT_BRACKET, EXIT_VIOLATION = 0, 1, 2, 3, 4
VERIFY_TOL = 1e-8


def read_config(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _height_or_auto(text: str) -> float | None:
    if text.strip().lower() in ("t", "auto"):
        return None
    return float(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=["subconvexity", "convexity", "custom"], default="subconvexity")
    p.add_argument(
        "--params",
        help="custom growth constants k1,k2,k3,k4,k5,Q0 (with --preset custom)",
    )
    p.add_argument(
        "--t0",
        help="height for the inflation factors; a number, or 'T' for the table height",
    )
    p.add_argument("--tol", type=float, help="engine tolerance")
    p.add_argument("--format", choices=["text", "csv", "json"], dest="format")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--config", help="key = value file supplying defaults")


def build_parser(config: dict[str, str] | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turingbound", description="Explicit bounds for the integral of S(t)."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = []

    p = sub.add_parser("coeffs", help="coefficients (a, b, c) at given delta, d")
    _common(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--at-t2", type=float, help="also evaluate the bound at this t2")
    subparsers.append(p)

    p = sub.add_parser("optimize", help="optimal delta, d and bound at height T")
    _common(p)
    p.add_argument("--height", type=float, default=1e10)
    subparsers.append(p)

    p = sub.add_parser("table", help="optimised bounds at a list of heights")
    _common(p)
    p.add_argument("--heights", help="comma-separated heights (default 1e5..1e15)")
    p.add_argument("--workers", type=int, default=1)
    subparsers.append(p)

    p = sub.add_parser("crossover", help="height where sub-convexity overtakes convexity")
    _common(p)
    p.add_argument("--low", type=float, default=1e10)
    p.add_argument("--high", type=float, default=1e11)
    subparsers.append(p)

    p = sub.add_parser("verify", help="spot-check |zeta| against the regional bounds")
    _common(p)
    p.add_argument("--delta", type=float, default=0.148)
    p.add_argument("--sigma-grid", type=int, default=50)
    p.add_argument("--t-samples", type=int, default=50)
    p.add_argument("--t-min", type=float, default=1e3)
    p.add_argument("--t-max", type=float, default=1e4)
    p.add_argument("--seed", type=int, default=0)
    subparsers.append(p)

    if config:
        _apply_config(subparsers, config)
    return parser


def _apply_config(subparsers, config: dict[str, str]) -> None:
    """Config values become parser defaults, so explicit flags still win."""
    known = set()
    for p in subparsers:
        actions = {a.dest: a for a in p._actions}
        for key, value in config.items():
            action = actions.get(key)
            if action is None or key == "config":
                continue
            known.add(key)
            p.set_defaults(**{key: action.type(value) if action.type else value})
    unknown = set(config) - known
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")


def parse_args(argv=None) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    config = read_config(known.config) if known.config else None
    return build_parser(config).parse_args(argv)


def resolve_params(args) -> GrowthParams:
    if args.preset == "custom":
        if not args.params:
            raise DomainError("--preset custom needs --params k1,k2,k3,k4,k5,Q0")
        vals = [float(x) for x in args.params.split(",")]
        if len(vals) != 6:
            raise DomainError("--params takes six comma-separated numbers")
        return GrowthParams(*vals)
    return PRESETS[args.preset]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _emit(args, text: str | bytes) -> None:
    data = text.encode() if isinstance(text, str) else text
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _dump(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        _emit(args, json.dumps(payload, indent=2) + "\n")
    elif args.format == "csv":
        keys = list(payload)
        vals = [payload[k] for k in keys]
        _emit(args, ",".join(keys) + "\n" + ",".join(str(v) for v in vals) + "\n")
    else:
        _emit(args, "\n".join(lines) + "\n")


def cmd_coeffs(args) -> int:
    params = resolve_params(args)
    tol = check_tol(args.tol or ENGINE_TOL)
    if args.delta is None or args.d is None:
        raise DomainError("coeffs needs --delta and --d")
    t0 = THEOREM_T0 if args.t0 is None else float(args.t0)
    knobs = Knobs(args.delta, args.d, t0)
    triple = compute_triple(params, knobs, tol)
    payload = {
        "preset": params.name,
        "delta": knobs.delta,
        "d": knobs.d,
        "t0": t0,
        "a": triple.a,
        "b": triple.b,
        "c": triple.c,
    }
    lines = [
        f"preset {params.name}  delta {_fmt(knobs.delta)}  d {_fmt(knobs.d)}  t0 {_fmt(t0)}",
        f"a = {_fmt(triple.a)}",
        f"b = {_fmt(triple.b)}",
        f"c = {_fmt(triple.c)}",
    ]
    if args.at_t2 is not None:
        value = headline_bound(triple, args.at_t2)
        payload["t2"] = args.at_t2
        payload["bound"] = value
        lines.append(f"bound at t2 = {_fmt(args.at_t2)}: {_fmt(value)}")
    _dump(args, payload, lines)
    return EXIT_OK


def cmd_optimize(args) -> int:
    params = resolve_params(args)
    tol = check_tol(args.tol or ENGINE_TOL)
    t0 = None if args.t0 is None else _height_or_auto(args.t0)
    r = optimize_full(params, args.height, t0, tol)
    payload = {
        "preset": params.name,
        "T": args.height,
        "t0": args.height if t0 is None else t0,
        "delta": r.best_delta,
        "d": r.best_d,
        "a": r.triple.a,
        "b": r.triple.b,
        "c": r.triple.c,
        "objective": r.objective,
        "evaluations": r.evaluations,
    }
    lines = [f"{k} = {_fmt(v) if isinstance(v, float) else v}" for k, v in payload.items()]
    _dump(args, payload, lines)
    return EXIT_OK


def _pair(args):
    # the custom preset replaces the sub-convexity column
    sub = resolve_params(args) if args.preset == "custom" else PRESETS["subconvexity"]
    return PRESETS["convexity"], sub


def cmd_table(args) -> int:
    tol = check_tol(args.tol or ENGINE_TOL)
    t0 = None if args.t0 is None else _height_or_auto(args.t0)
    heights = (
        [float(h) for h in args.heights.split(",")] if args.heights else list(CANONICAL_HEIGHTS)
    )
    pair = _pair(args)
    rows = build_table(heights, pair, t0, tol, max_workers=args.workers)
    meta = report_metadata(pair, t0, tol)
    fmt = args.format or "csv"
    if fmt == "text":
        lines = ["T          C       SC      d       delta   a       b       c"]
        for r in rows:
            if r.error:
                lines.append(f"{format_height(r.T):<10} failed: {r.error}")
                continue
            lines.append(
                f"{format_height(r.T):<10} "
                + "   ".join(
                    f"{v:.3f}"
                    for v in (r.bound_convexity, r.bound_subconvexity, r.d_star, r.delta_star, r.a, r.b, r.c)
                )
            )
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, emit_report(rows, fmt, meta))
    return EXIT_OK if all(r.error is None for r in rows) else EXIT_OTHER


def cmd_crossover(args) -> int:
    tol = check_tol(args.tol or ENGINE_TOL)
    t0 = None if args.t0 is None else _height_or_auto(args.t0)
    pair = _pair(args)
    T_star = find_crossover(pair, args.low, args.high, t0, tol)
    payload = {"low": args.low, "high": args.high, "crossover": T_star}
    _dump(args, payload, [f"crossover T* = {T_star:.6e}"])
    return EXIT_OK


def verify_samples(args) -> tuple[np.ndarray, np.ndarray]:
    sigmas = np.linspace(0.5, 1.0 + args.delta, args.sigma_grid)
    rng = np.random.default_rng(args.seed)
    ts = np.sort(rng.uniform(args.t_min, args.t_max, args.t_samples))
    return sigmas, ts


def cmd_verify(args) -> int:
    params = resolve_params(args)
    tol = check_tol(args.tol or VERIFY_TOL)
    t0 = args.t_min if args.t0 is None else float(args.t0)
    cfg = StripConfig(args.delta, t0)
    sigmas, ts = verify_samples(args)
    worst = (-math.inf, None, None)
    violations = []
    for t in ts:
        values = zeta_complex_line(sigmas, t, tol)
        for sigma, res in zip(sigmas, values):
            bound = (
                bound_left(params, cfg, sigma, t) if sigma <= 1.0 else bound_right(params, cfg, sigma, t)
            )
            ratio = (abs(res.value) + res.error_bound) / bound
            if ratio > worst[0]:
                worst = (ratio, float(sigma), float(t))
            if ratio >= 1.0:
                violations.append({"sigma": float(sigma), "t": float(t), "ratio": ratio})
    payload = {
        "preset": params.name,
        "delta": args.delta,
        "t0": t0,
        "seed": args.seed,
        "samples": len(sigmas) * len(ts),
        "max_ratio": worst[0],
        "max_ratio_sigma": worst[1],
        "max_ratio_t": worst[2],
        "violations": violations,
    }
    lines = [
        f"checked {payload['samples']} points, preset {params.name}, delta {_fmt(args.delta)}, t0 {_fmt(t0)}",
        f"max ratio |zeta|/bound = {worst[0]:.6f} at sigma = {worst[1]:.6f}, t = {worst[2]:.6f}",
        f"violations: {len(violations)}",
    ]
    lines += [f"  sigma {v['sigma']:.6f} t {v['t']:.6f} ratio {v['ratio']:.6f}" for v in violations]
    if args.format == "csv":
        body = "sigma,t,ratio\n" + "".join(
            f"{v['sigma']:.6f},{v['t']:.6f},{v['ratio']:.6f}\n" for v in violations
        )
        _emit(args, f"# max_ratio: {worst[0]:.6f}\n" + body)
    else:
        _dump(args, payload, lines)
    return EXIT_VIOLATION if violations else EXIT_OK


COMMANDS = {
    "coeffs": cmd_coeffs,
    "optimize": cmd_optimize,
    "table": cmd_table,
    "crossover": cmd_crossover,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoSignChange as exc:
        print(f"no sign change: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except (TuringBoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
