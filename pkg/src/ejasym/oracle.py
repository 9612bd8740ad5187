"""Brute-force reference values and identity residuals.

``direct_sum`` adds terms of S_p(a; w) until a rigorous tail bound falls
below the requested tolerance.  The bound used depends on p:

* p >= 1: consecutive term ratios are bounded by a single rho < 1 from the
  stopping index on, so the tail is at most |t_n| / (1 - rho).
* p < 1: the ratio tends to 1, so the tail is bounded by |t_n| plus the
  integral of the (decreasing) envelope, an incomplete gamma function.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import BudgetError, InvalidInput
from .params import Params
from .precision import PrecisionCtx

__all__ = [
    "OracleValue",
    "direct_sum",
    "poisson_jacobi_residual",
    "alternating_residual",
    "max_terms_budget",
]

DEFAULT_MAX_TERMS = 10**7


@dataclass(frozen=True)
class OracleValue:
    value: object
    tail_bound: object
    terms_used: int


def max_terms_budget() -> int:
    raw = os.environ.get("EJASYM_MAX_TERMS")
    if raw is None:
        return DEFAULT_MAX_TERMS
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"EJASYM_MAX_TERMS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise InvalidInput("EJASYM_MAX_TERMS must be positive")
    return n


def _npow(n: int, p, ctx):
    if hasattr(p, "denominator") and p.denominator == 1:
        return ctx.mpf(n ** int(p))
    return ctx.mpf(n) ** ctx.mpf(p)


def _upper_gamma_bound(s, x, mp):
    """Upper bound for Gamma(s, x), x > 0, or None if the bound does not apply."""
    if s <= 1:
        return x ** (s - 1) * mp.exp(-x)
    if x > s - 1:
        return x ** (s - 1) * mp.exp(-x) / (1 - (s - 1) / x)
    return None


def _tail_bound(n: int, mag, p, w, b, ctx):
    """Bound on sum_{k>=n} |t_k| given |t_n| = mag; None if not yet valid."""
    mp = ctx.mp
    pf, wf = ctx.mpf(p), ctx.mpf(w)
    if p >= 1:
        rho = mp.exp(-b * (_npow(n + 1, p, ctx) - _npow(n, p, ctx)))
        if w < 0:
            rho *= (mp.mpf(n + 1) / n) ** (-wf)
        return mag / (1 - rho) if rho < 1 else None
    # envelope f(x) = exp(-b x^p) x^-w decreases once b p x^p >= -w
    xp = _npow(n, p, ctx)
    if b * pf * xp < -wf:
        return None
    s = (1 - wf) / pf
    g = _upper_gamma_bound(s, b * xp, mp)
    if g is None:
        return None
    return mag + b ** (-s) * g / pf


def direct_sum(p, w, a, ctx: PrecisionCtx, tol=None, *, alternating: bool = False, max_terms: int | None = None) -> OracleValue:
    """sum_{n>=1} (+-1)^n exp(-a n^p) / n^w with a certified tail bound.

    ``tol`` is absolute (default 10^-working_digits).  The returned
    ``tail_bound`` covers both the truncated tail and accumulated rounding.
    """
    par = Params.make(p, w, a, ctx)
    p, w, a = par.p, par.w, par.a
    mp = ctx.mp
    tol = ctx.tol if tol is None else ctx.mpf(tol)
    budget = max_terms if max_terms is not None else max_terms_budget()
    b = a.real
    wf = ctx.mpf(w)
    total = mp.mpc(0)
    abs_total = mp.mpf(0)
    n = 1
    while True:
        np_ = _npow(n, p, ctx)
        log_mag = -b * np_ - wf * mp.log(n)
        mag = mp.exp(log_mag)
        if mag <= tol:
            bound = _tail_bound(n, mag, p, w, b, ctx)
            if bound is not None and bound <= tol:
                rounding = 4 * n * ctx.eps * abs_total
                return OracleValue(total, bound + rounding, n - 1)
        if n > budget:
            raise BudgetError(f"direct sum needs more than {budget} terms", budget)
        term = mp.exp(-a * np_ - wf * mp.log(n))
        if alternating and n % 2:
            term = -term
        total += term
        abs_total += mag
        n += 1


def poisson_jacobi_residual(a, ctx: PrecisionCtx):
    """|S_2(a;0) - (1/2 sqrt(pi/a) - 1/2 + sqrt(pi/a) S_2(pi^2/a;0))|."""
    mp = ctx.mp
    par = Params.make(2, 0, a, ctx)
    a = par.a
    lhs = direct_sum(2, 0, a, ctx).value
    root = mp.sqrt(mp.pi / a)
    dual = direct_sum(2, 0, mp.pi**2 / a, ctx).value
    rhs = root / 2 - mp.mpf(1) / 2 + root * dual
    return abs(lhs - rhs)


def alternating_residual(p, w, a, ctx: PrecisionCtx):
    """|sum (-1)^n e^{-a n^p}/n^w - (2^{1-w} S_p(2^p a; w) - S_p(a; w))|."""
    par = Params.make(p, w, a, ctx)
    p, w, a = par.p, par.w, par.a
    mp = ctx.mp
    lhs = direct_sum(p, w, a, ctx, alternating=True).value
    even = direct_sum(p, w, mp.mpf(2) ** ctx.mpf(p) * a, ctx).value
    full = direct_sum(p, w, a, ctx).value
    rhs = mp.mpf(2) ** (1 - ctx.mpf(w)) * even - full
    return abs(lhs - rhs)
