"""Command-line interface: ``besselterm <command> [flags]``.

Data go to ``--out`` (standard output by default); progress and diagnostics
go to standard error. Exit status is 0 on success, 1 on a computation or
tolerance failure and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import sys

from . import hankel, roots
from .empirical import HyperbolicFit, eps_grid, hyperbolic_fit, predict_terms, predictor_comparison, slope_grid
from .errors import BesselTermError, DomainError
from .fbse import TargetFunction
from .plotting import Panel, Series, grid_svg, line_chart_svg
from .term_count import (DEFAULT_L_MAX, TermCountQuery, min_terms, monotonicity_violations,
                         order_profile, sweep)

log = logging.getLogger("besselterm")

DEFAULT_A = 0.2259
DEFAULT_B = -0.55585
COMPARISON_EPS = (0.05, 0.12, 0.19, 0.26)
COMPARISON_P_PRIMES = "11..20"


class UsageError(Exception):
    pass


def _number_list(text: str, cast=float) -> list:
    """Parse ``"1,2,5"`` or an inclusive integer range ``"1..9"``."""
    items = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {part!r}")
            items.extend(cast(v) for v in range(lo, hi + 1))
        else:
            try:
                items.append(cast(part))
            except ValueError:
                raise UsageError(f"not a number: {part!r}") from None
    if not items:
        raise UsageError(f"empty list {text!r}")
    return items


def _order(v) -> float | int:
    f = float(v)
    return int(f) if f.is_integer() else f


def _summary_number(v: float) -> float:
    return float(f"{v:.6g}")


def _positive_eps(values):
    for e in values:
        if not e > 0.0:
            raise UsageError(f"eps ratio must be > 0, got {e}")
    return values


def _eps_values(args) -> list[float]:
    if args.eps_ratio is not None:
        return _positive_eps(_number_list(args.eps_ratio))
    if args.eps_start is None or args.eps_end is None or args.eps_step is None:
        raise UsageError("give --eps-ratio or all of --eps-start/--eps-end/--eps-step")
    if not args.eps_step > 0.0:
        raise UsageError("grid step must be > 0")
    if args.eps_end < args.eps_start:
        raise UsageError("--eps-end must be >= --eps-start")
    return _positive_eps(eps_grid(args.eps_start, args.eps_end, args.eps_step))


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _write(path, text: str):
    with _sink(path) as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=False) + "\n"


def _require_single(values, flag):
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value here")
    return values[0]


def cmd_terms(args) -> int:
    p = _order(args.p)
    eps = _require_single(_positive_eps(_number_list(args.eps_ratio)), "--eps-ratio")
    result = min_terms(TermCountQuery(TargetFunction(p, args.q), _order(args.p_prime), eps, args.l_max))
    if args.format == "json":
        _write(args.out, _json_text({
            "l": result.l,
            "threshold": _summary_number(result.threshold),
            "achieved_sum": _summary_number(result.achieved_sum),
            "shortcut_used": result.shortcut_used,
        }))
    else:
        _write(args.out, _csv_text(["p", "q", "p_prime", "eps_ratio", "l"],
                                   [(p, args.q, _order(args.p_prime), eps, result.l)]))
    return 0


def cmd_sweep(args) -> int:
    ps = [_order(v) for v in _number_list(args.p)]
    qs = _number_list(args.q, int)
    pps = [_order(v) for v in _number_list(args.p_prime)]
    eps = _eps_values(args)
    targets = [TargetFunction(p, q) for p in ps for q in qs]
    table = sweep(targets, pps, eps, args.l_max, workers=args.workers)
    rows = [(_order(r.p), r.q, _order(r.p_prime), r.eps_ratio, r.l) for r in table.rows]
    _write(args.out, _csv_text(["p", "q", "p_prime", "eps_ratio", "l"], rows))
    return 0


def _fit(args):
    pps = _number_list(args.p_prime, int)
    if len(set(pps)) < 2:
        raise UsageError("the slope regression needs at least two distinct p' values")
    for name in ("eps_start", "eps_end", "eps_step"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")
    if not args.eps_step > 0.0:
        raise UsageError("grid step must be > 0")
    if args.eps_end < args.eps_start or not args.eps_start > 0.0:
        raise UsageError("grid must satisfy 0 < --eps-start <= --eps-end")
    grid = slope_grid(_order(args.p), args.q, args.eps_start, args.eps_end, args.eps_step, pps, args.l_max)
    return grid, hyperbolic_fit([(e, f.slope) for e, f in grid])


def cmd_fit(args) -> int:
    grid, fit = _fit(args)
    summary = {"a": _summary_number(fit.a), "b": _summary_number(fit.b),
               "r_squared": _summary_number(fit.r_squared)}
    if args.format == "json":
        _write(args.out, _json_text(summary))
    elif args.format == "svg":
        _write(args.out, _fit_svg(grid, fit))
    else:
        _write(args.out, _csv_text(["eps_ratio", "slope", "intercept", "r_squared"],
                                   [(e, f.slope, f.intercept, f.r_squared) for e, f in grid]))
    if args.summary:
        _write(args.summary, _json_text(summary))
    if args.svg:
        _write(args.svg, _fit_svg(grid, fit))
    log.info("fit: a=%.6g b=%.6g r_squared=%.6g", fit.a, fit.b, fit.r_squared)
    return 0


def _fit_svg(grid, fit) -> str:
    xs = tuple(e for e, _ in grid)
    return grid_svg([
        Panel("Slope vs eps/R", "eps/R", "slope", (
            Series("slope", xs, tuple(f.slope for _, f in grid)),
            Series("a/x + b", xs, tuple(fit.slope_at(e) for e in xs)),
        )),
        Panel("Intercept vs eps/R", "eps/R", "intercept", (
            Series("intercept", xs, tuple(f.intercept for _, f in grid)),
        )),
    ])


def cmd_predict(args) -> int:
    fit = HyperbolicFit(args.a, args.b, float("nan"))
    eps = _require_single(_positive_eps(_number_list(args.eps_ratio)), "--eps-ratio")
    pp = int(args.p_prime)
    if pp < 1:
        raise UsageError("--p-prime must be >= 1 for the predictor")
    target = TargetFunction(_order(args.p), args.q)
    l0 = min_terms(TermCountQuery(target, 1, eps, args.l_max)).l
    pred = predict_terms(fit, eps, pp, l0)
    out = {"m0": _summary_number(pred.m0), "l0": pred.l0, "l_hat": _summary_number(pred.l_hat),
           "l_rounded": pred.l_rounded}
    if args.actual:
        actual = min_terms(TermCountQuery(target, pp, eps, args.l_max)).l
        out["actual"] = actual
        out["diff"] = pred.l_rounded - actual
    _write(args.out, _json_text(out))
    if args.svg:
        _write(args.svg, _comparison_svg(fit, args))
    return 0


def _comparison_svg(fit, args) -> str:
    pps = _number_list(args.compare_p_primes, int)
    panels = []
    for eps in COMPARISON_EPS:
        rows = predictor_comparison(fit, eps, pps, _order(args.p), args.q, args.l_max)
        xs = tuple(r[0] for r in rows)
        panels.append(Panel(f"eps/R = {eps:g}", "p'", "terms", (
            Series("actual", xs, tuple(r[1] for r in rows)),
            Series("predicted", xs, tuple(r[2].l_hat for r in rows)),
        )))
        log.info("predict: comparison panel eps/R=%g done", eps)
    return grid_svg(panels, columns=2)


def cmd_monotonicity(args) -> int:
    p = _order(args.p)
    eps = _require_single(_positive_eps(_number_list(args.eps_ratio)), "--eps-ratio")
    if args.p_prime_max < 0:
        raise UsageError("--p-prime-max must be >= 0")
    profile = order_profile(TargetFunction(p, args.q), args.p_prime_max, eps, args.l_max)
    bad = [list(v) for v in monotonicity_violations(profile, p)]
    if args.format == "json":
        _write(args.out, _json_text(bad))
    elif args.format == "svg":
        _write(args.out, _profile_svg(profile, p, args.q))
    else:
        _write(args.out, _csv_text(["p_prime", "l"], sorted(profile.items())))
    if args.summary:
        _write(args.summary, _json_text(bad))
    if args.svg:
        _write(args.svg, _profile_svg(profile, p, args.q))
    if bad:
        log.info("monotonicity: %d violation(s): %s", len(bad), bad)
    return 0


def _profile_svg(profile, p, q) -> str:
    xs = tuple(sorted(profile))
    return line_chart_svg("Number of terms vs order", "p'", "terms",
                          [Series(f"p={p:g}, q={q}", xs, tuple(profile[k] for k in xs))])


def cmd_invariant(args) -> int:
    if args.kind == "power":
        tol = 1e-12 if args.tol is None else args.tol
        if not args.r > 0.0:
            raise UsageError("--r must be > 0")
        if args.n < -0.5:
            raise UsageError("--n must be >= -1/2")
        value = hankel.invariant_rhs_power(args.n, args.s, args.r)
        expected = args.r ** (args.s - 2.0)
        residual = abs(value - expected) / abs(expected)
        _write(args.out, _json_text({"value": _summary_number(value), "expected": _summary_number(expected),
                                     "residual": float(f"{residual:.6g}")}))
        ok = residual <= tol
    else:
        tol = 1e-5 if args.tol is None else args.tol
        if not args.r > 0.0:
            raise UsageError("--r must be > 0")
        fn = hankel.GAUSSIAN if args.fn == "gaussian" else hankel.gaussian_power(int(args.n))
        kw = {"alpha_max": args.alpha_max, "r_max": args.r_max}
        id_n = hankel.radial_identity_residual(fn.f, fn.f_prime, fn.f_double_prime, args.n, args.r, **kw)
        id_n1 = hankel.radial_identity_residual(fn.f, fn.f_prime, fn.f_double_prime, args.n + 1, args.r, **kw)
        inv = hankel.invariant_residual_numeric(fn.f, args.n, args.r, **kw)
        _write(args.out, _json_text({
            "identity_n": float(f"{id_n:.6g}"),
            "identity_n_plus_1": float(f"{id_n1:.6g}"),
            "invariant": float(f"{inv:.6g}"),
        }))
        ok = inv <= tol and max(id_n, id_n1) <= args.identity_tol
    if not ok:
        log.error("invariant: residual above tolerance")
        return 1
    return 0


def _common(parser, *, fmt=("csv", "json"), default_fmt="csv"):
    parser.add_argument("--l-max", type=int, default=DEFAULT_L_MAX)
    parser.add_argument("--cache-dir", default=None, help="root cache directory")
    parser.add_argument("--out", default="-", help="output path, '-' for standard output")
    parser.add_argument("--format", choices=fmt, default=default_fmt)


def _grid_flags(parser, start=None, end=None, step=None):
    parser.add_argument("--eps-start", type=float, default=start)
    parser.add_argument("--eps-end", type=float, default=end)
    parser.add_argument("--eps-step", "--grid-step", dest="eps_step", type=float, default=step)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besselterm",
                                     description="Fourier-Bessel term counts and Hankel order invariants.")
    parser.add_argument("-q", "--quiet", action="store_true", help="only report errors on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("terms", help="minimal number of terms for one (p, q, p', eps/R)")
    t.add_argument("--p", type=float, default=0.0)
    t.add_argument("--q", type=int, default=1)
    t.add_argument("--p-prime", type=float, default=1.0)
    t.add_argument("--eps-ratio", required=True)
    _common(t)
    t.set_defaults(func=cmd_terms)

    s = sub.add_parser("sweep", help="term counts over a grid")
    s.add_argument("--p", default="0")
    s.add_argument("--q", default="1")
    s.add_argument("--p-prime", default="1..9")
    s.add_argument("--eps-ratio", default=None)
    _grid_flags(s)
    s.add_argument("--workers", type=int, default=None)
    _common(s, fmt=("csv",))
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fit", help="per-eps slopes and the hyperbolic slope model")
    f.add_argument("--p", type=float, default=0.0)
    f.add_argument("--q", type=int, default=1)
    f.add_argument("--p-prime", default="1..10", help="orders used in each slope regression")
    _grid_flags(f, 0.01, 0.36, 0.01)
    f.add_argument("--summary", default=None, help="also write the JSON summary here")
    f.add_argument("--svg", default=None, help="also write slope/intercept plots here")
    _common(f, fmt=("csv", "json", "svg"))
    f.set_defaults(func=cmd_fit)

    pr = sub.add_parser("predict", help="predicted term count from the slope model")
    pr.add_argument("--p", type=float, default=0.0)
    pr.add_argument("--q", type=int, default=1)
    pr.add_argument("--p-prime", type=int, required=True)
    pr.add_argument("--eps-ratio", required=True)
    pr.add_argument("--a", type=float, default=DEFAULT_A)
    pr.add_argument("--b", type=float, default=DEFAULT_B)
    pr.add_argument("--actual", action="store_true", help="also compute the exact count")
    pr.add_argument("--svg", default=None, help="write predicted vs actual panels here")
    pr.add_argument("--compare-p-primes", default=COMPARISON_P_PRIMES)
    _common(pr, fmt=("json",), default_fmt="json")
    pr.set_defaults(func=cmd_predict)

    m = sub.add_parser("monotonicity", help="term count against p' for a fixed target")
    m.add_argument("--p", type=float, default=0.0)
    m.add_argument("--q", type=int, default=1)
    m.add_argument("--p-prime-max", type=int, default=10)
    m.add_argument("--eps-ratio", default="0.01")
    m.add_argument("--summary", default=None, help="also write the JSON violation list here")
    m.add_argument("--svg", default=None)
    _common(m, fmt=("csv", "json", "svg"))
    m.set_defaults(func=cmd_monotonicity)

    inv = sub.add_parser("invariant", help="check the Hankel order invariant")
    inv.add_argument("kind", choices=("power", "numeric"))
    inv.add_argument("--n", type=float, default=0.0)
    inv.add_argument("--s", type=float, default=1.0)
    inv.add_argument("--r", type=float, default=1.0)
    inv.add_argument("--fn", choices=("gaussian", "gaussian-power"), default="gaussian")
    inv.add_argument("--alpha-max", type=float, default=hankel.DEFAULT_RADIUS)
    inv.add_argument("--r-max", type=float, default=hankel.DEFAULT_RADIUS)
    inv.add_argument("--tol", type=float, default=None)
    inv.add_argument("--identity-tol", type=float, default=1e-6)
    _common(inv, fmt=("json",), default_fmt="json")
    inv.set_defaults(func=cmd_invariant)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr, force=True)
    if args.cache_dir:
        roots.set_cache_dir(args.cache_dir)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        parser.error(str(exc))
    except (BesselTermError, OverflowError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
