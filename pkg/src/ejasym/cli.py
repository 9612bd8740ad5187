"""Command-line front end: ``ejasym eval | coeffs | table | verify``.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 oracle
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .coeffgen import expansion_coefficients
from .errors import BudgetError, EJError, InvalidInput
from .expansions import evaluate, theorem1_exponential, theorem2_exponential
from .oracle import alternating_residual, direct_sum, poisson_jacobi_residual
from .params import parse_real
from .precision import PrecisionCtx, _zeta_em, bernoulli, gamma_fn, riemann_zeta
from . import tables

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4

SUITES = ("pj", "alt", "zeta", "gamma", "thm12")


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: str | None = None
    w: str | None = None
    a: str | None = None
    digits: int | None = None
    M: int | None = None
    format: str = "json"
    table_id: int | None = None
    suite: str | None = None


# -- rendering helpers ----------------------------------------------------------


def _num(x, ctx: PrecisionCtx) -> str:
    return ctx.mp.nstr(x, ctx.working_digits, min_fixed=1, max_fixed=0)


def _cplx(z, ctx: PrecisionCtx) -> dict:
    z = ctx.mp.mpc(z)
    return {"re": _num(z.real, ctx), "im": _num(z.imag, ctx)}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


# -- commands -----------------------------------------------------------------------


def cmd_eval(cfg: RunConfig) -> tuple[int, str]:
    ctx = PrecisionCtx(cfg.digits or 30)
    res = evaluate(cfg.p, cfg.w, cfg.a, ctx, M=cfg.M)
    oracle = direct_sum(cfg.p, cfg.w, cfg.a, ctx)
    exps = [
        {
            "label": e.label,
            "r": e.r,
            "psi": str(e.psi),
            "j0": e.j0,
            "terms": e.truncation,
            "dropped": e.dropped,
            "total": _cplx(e.total, ctx),
            "remainder_estimate": _num(e.remainder_estimate, ctx),
        }
        for e in res.exponential
    ]
    out = {
        "p": cfg.p,
        "w": cfg.w,
        "a": cfg.a,
        "digits": ctx.working_digits,
        "regime": res.regime.kind.value,
        "double_pole": res.regime.double_pole,
        "algebraic_terms": len(res.algebraic),
        "algebraic_total": _cplx(res.algebraic_total, ctx),
        "exponential": exps,
        "total": _cplx(res.total, ctx),
        "remainder_estimate": _num(res.remainder_estimate, ctx),
        "oracle": {
            "value": _cplx(oracle.value, ctx),
            "tail_bound": _num(oracle.tail_bound, ctx),
            "terms_used": oracle.terms_used,
        },
        "S_diff_abs": _num(abs(oracle.value - res.algebraic_total), ctx),
        "abs_diff": _num(abs(oracle.value - res.total), ctx),
    }
    return EXIT_OK, _dump(out)


def cmd_coeffs(cfg: RunConfig) -> tuple[int, str]:
    count = cfg.M or 8
    ctx = PrecisionCtx(cfg.digits or 30)
    table = expansion_coefficients(cfg.p, cfg.w, count + 1, ctx)
    cells = []
    for j in range(1, count + 1):
        c = table.c[j]
        dec = tables._frac_to_decimal(c) if isinstance(c, Fraction) else tables.Decimal(_num(c, ctx))
        cells.append((str(j), tables.format_xy(dec, 7), str(c) if isinstance(c, Fraction) else _num(c, ctx)))
    if cfg.format == "json":
        body = {"p": cfg.p, "w": cfg.w, "coefficients": [{"j": int(j), "value": v, "exact": e} for j, v, e in cells]}
        return EXIT_OK, _dump(body)
    header = ("j", "c_j", "exact")
    render = tables.render_csv if cfg.format == "csv" else tables.render_markdown
    return EXIT_OK, render(header, cells).rstrip("\n")


def cmd_table(cfg: RunConfig) -> tuple[int, str]:
    tid = cfg.table_id
    if tid == 1:
        cells = tables.table1_cells()
    elif tid in (2, 3):
        rows = tables.table_rows(tid)
        cells = tables.table2_cells(rows) if tid == 2 else tables.table3_cells(rows)
        for r in rows:
            if r.error:
                print(f"row p={r.p} w={r.w} a={r.a}: {r.error}", file=sys.stderr)
    else:
        raise InvalidInput(f"table id must be 1, 2 or 3, got {tid}")
    header = tables.HEADERS[tid]
    if cfg.format == "json":
        return EXIT_OK, _dump([dict(zip(header, c)) for c in cells])
    render = tables.render_csv if cfg.format == "csv" else tables.render_markdown
    return EXIT_OK, render(header, cells).rstrip("\n")


# -- verification suites --------------------------------------------------------------


def _suite_pj(ctx):
    mp = ctx.mp
    points = {"0.3": "0.3", "1.0": "1.0", "3.0": "3.0", "pi": mp.pi, "1+0.8i": "1+0.8i", "2-i": "2-i"}
    return [(name, poisson_jacobi_residual(a, ctx)) for name, a in points.items()]


def alt_draws(count: int = 10, seed: int = 20240601):
    """Reproducible (p, w, a) draws for the alternating identity."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = rng.choice(["1", "3/2", "2", "3", "4", "5/2"])
        w = rng.choice(["0", "1", "2", "1/2", "-1", "4"])
        a = f"{rng.uniform(0.2, 2.0):.3f}"
        out.append((p, w, a))
    return out


def _suite_alt(ctx):
    return [(f"p={p} w={w} a={a}", alternating_residual(p, w, a, ctx)) for p, w, a in alt_draws()]


def _suite_zeta(ctx):
    out = []
    # functional equation: s > 1 directly against the reflected Euler-Maclaurin value at 1 - s.
    # Summation at 1 - s < 0 cancels terms of size N^(s-1), so that side runs wider.
    wide = PrecisionCtx(ctx.working_digits + 40)
    wmp = wide.mp
    for s in ("1.5", "2.5", "3.7", "10.25"):
        sv = wide.mpf(Fraction(s))
        direct = _zeta_em(ctx.mpf(Fraction(s)), ctx)
        factor = 2**sv * wmp.pi ** (sv - 1) * wmp.sinpi(sv / 2) * gamma_fn(1 - sv, wide)
        reflected = ctx.mpf(factor * _zeta_em(1 - sv, wide))
        out.append((f"s={s}", abs(direct - reflected) / abs(direct)))
    for k in range(1, 21):
        exact = -bernoulli(2 * k) / (2 * k)
        val = riemann_zeta(1 - 2 * k, ctx)
        out.append((f"zeta({1 - 2 * k})", abs(val - ctx.mpf(exact)) / abs(ctx.mpf(exact))))
    return out


def _suite_gamma(ctx):
    rng = random.Random(7)
    out = []
    for _ in range(20):
        x = Fraction(rng.randint(1, 5000), 100)
        g1, g0 = gamma_fn(x + 1, ctx), gamma_fn(x, ctx)
        out.append((f"x={x}", abs(g1 - ctx.mpf(x) * g0) / abs(g1)))
    return out


THM12_CASES = [(p, w, a) for (p, w) in ((2, 2), (4, 2), (4, 4), (6, 2)) for a in ("0.1", "0.01")]


def thm12_residual(p, w, a, ctx, M: int = 6):
    """|complex-form total - cosine-form total| over all expansions at equal truncation."""
    t1 = theorem1_exponential(p, w, a, M, ctx)
    t2 = theorem2_exponential(p, w, a, M, None, ctx)
    s1 = ctx.mp.fsum(e.total for e in t1)
    s2 = ctx.mp.fsum(e.total for e in t2)
    return abs(s1 - s2), abs(s1)


def _suite_thm12(ctx):
    out = []
    for p, w, a in THM12_CASES:
        diff, scale = thm12_residual(p, w, a, ctx)
        out.append((f"p={p} w={w} a={a}", diff / scale))
    return out


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    suite = cfg.suite
    runners = {"pj": _suite_pj, "alt": _suite_alt, "zeta": _suite_zeta, "gamma": _suite_gamma, "thm12": _suite_thm12}
    if suite not in runners:
        raise InvalidInput(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    digits = cfg.digits or (60 if suite == "thm12" else 50)
    ctx = PrecisionCtx(digits)
    # residuals are relative for zeta, gamma and thm12, absolute for pj and alt
    slack = 2 if suite in ("zeta", "gamma") else 5
    threshold = ctx.mpf(10) ** (-(digits - slack))
    cases = runners[suite](ctx)
    report = [{"case": name, "residual": ctx.mp.nstr(r, 5), "pass": bool(r < threshold)} for name, r in cases]
    ok = all(c["pass"] for c in report)
    body = {
        "suite": suite,
        "digits": digits,
        "threshold": ctx.mp.nstr(threshold, 3),
        "max_residual": ctx.mp.nstr(max(r for _, r in cases), 5),
        "pass": ok,
        "cases": report,
    }
    return (EXIT_OK if ok else EXIT_VERIFY), _dump(body)


COMMANDS = {"eval": cmd_eval, "coeffs": cmd_coeffs, "table": cmd_table, "verify": cmd_verify}


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ejasym", description="Small-a expansions of sum exp(-a n^p)/n^w.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("json",), default_fmt="json"):
        sp.add_argument("--digits", type=int, help="working decimal digits")
        sp.add_argument("--format", choices=fmt_choices, default=default_fmt)

    ev = sub.add_parser("eval", help="evaluate the expansion and compare with direct summation")
    ev.add_argument("--p", required=True)
    ev.add_argument("--w", required=True)
    ev.add_argument("--a", required=True, help="real or complex, e.g. 0.1 or 1+0.8i")
    ev.add_argument("--count", "-M", dest="M", type=int, help="terms per exponential expansion (default: optimal)")
    common(ev)

    co = sub.add_parser("coeffs", help="print the inverse factorial coefficients c_1..c_M")
    co.add_argument("--p", required=True)
    co.add_argument("--w", required=True)
    co.add_argument("--count", "-M", dest="M", type=int, default=8)
    common(co, ("json", "csv", "markdown"), "markdown")

    ta = sub.add_parser("table", help="recompute one of the reference tables")
    ta.add_argument("--id", dest="table_id", type=int, choices=(1, 2, 3), required=True)
    common(ta, ("json", "csv", "markdown"), "markdown")

    ve = sub.add_parser("verify", help="run an identity suite")
    ve.add_argument("--suite", choices=SUITES, required=True)
    common(ve)
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    # validate before any computation
    if cfg.p is not None:
        parse_real(cfg.p)
        parse_real(cfg.w)
    if cfg.digits is not None and cfg.digits < 15:
        raise InvalidInput("--digits must be at least 15")
    if cfg.M is not None and cfg.M < 1:
        raise InvalidInput("--count must be at least 1")
    return cfg


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        code, text = COMMANDS[cfg.command](cfg)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, EJError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
