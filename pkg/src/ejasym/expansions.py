"""Small-a expansions of S_p(a; w) = sum_{n>=1} exp(-a n^p) / n^w.

The algebraic part is the Gamma-prefactor term plus the zeta-weighted power
series in a.  When p and w are both even the power series terminates and the
remaining difference is carried by exponentially small expansions, which are
evaluated in two equivalent ways:

* complex form: pairs of sums S_q(X e^{-/+ i pi psi_r}; lambda_j), each
  evaluated as exp(-z) times the rescaled sum S_hat_q;
* real form (real a > 0): sums over n of X_n^vartheta exp(-X_n cos pi psi_r)
  times the cosine series Upsilon_{n,r}.

mpmath numbers have an unbounded exponent, so exponentially small factors
never underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coeffgen import expansion_coefficients
from .errors import ConvergenceError, InvalidInput, NoMinimumError, RegimeError, SectorError
from .params import DerivedParams, Params, Regime, RegimeKind, classify, derive
from .precision import PrecisionCtx, digamma, euler_const, gamma_fn, riemann_zeta

__all__ = [
    "ExpTerm",
    "ExpansionPart",
    "EvalResult",
    "j_term",
    "algebraic_part",
    "negative_w_expansion",
    "default_cutoff",
    "s_q_hat",
    "theorem1_exponential",
    "theorem2_exponential",
    "least_term_index",
    "optimal_truncation",
    "term_envelope",
    "term_size",
    "evaluate",
]


@dataclass(frozen=True)
class ExpTerm:
    index: int
    value: object
    magnitude: object


def _term(index, value) -> ExpTerm:
    return ExpTerm(index, value, abs(value))


@dataclass
class ExpansionPart:
    """One exponentially small expansion: E_r (paired) or the unpaired hat-E_N."""

    r: int
    paired: bool
    psi: object
    terms: list[ExpTerm]
    remainder_estimate: object
    j0: int | None = None
    min_term: object = None
    dropped: bool = False

    @property
    def label(self) -> str:
        return f"E_{self.r}" if self.paired else f"Ehat_{self.r}"

    @property
    def total(self):
        if self.dropped or not self.terms:
            return 0
        return _fsum([t.value for t in self.terms])

    @property
    def truncation(self) -> int:
        return len(self.terms)


def _fsum(values):
    values = list(values)
    if not values:
        return 0
    mp = values[0].context if hasattr(values[0], "context") else None
    if mp is not None:
        return mp.fsum(values)
    return sum(values)


@dataclass
class EvalResult:
    p: object
    w: object
    a: object
    regime: Regime
    algebraic: list[ExpTerm]
    exponential: list[ExpansionPart] = field(default_factory=list)
    remainder_estimate: object = 0
    ctx: PrecisionCtx | None = None

    @property
    def algebraic_total(self):
        return _fsum([t.value for t in self.algebraic])

    @property
    def total_exponential(self):
        """Sum of the retained exponential expansions (the estimate of S - algebraic)."""
        parts = [e.total for e in self.exponential if not e.dropped and e.terms]
        return _fsum(parts) if parts else self.ctx.mp.mpc(0)

    @property
    def total(self):
        return self.algebraic_total + self.total_exponential

    @property
    def j0(self) -> dict[int, int]:
        return {e.r: e.j0 for e in self.exponential if e.j0 is not None}


# -- algebraic part ----------------------------------------------------------


def _params(p, w, a, ctx) -> Params:
    return Params.make(p, w, a, ctx)


def j_term(p, w, a, ctx: PrecisionCtx, regime: Regime | None = None):
    """The Gamma-prefactor term, with the logarithmic form at a double pole."""
    par = _params(p, w, a, ctx)
    regime = regime or par.regime
    mp = ctx.mp
    p, w, a = par.p, par.w, par.a
    pf = ctx.mpf(p)
    if regime.double_pole is not None:
        m = regime.double_pole
        bracket = euler_const(ctx) - mp.log(a) / pf + digamma(m + 1, ctx) / pf
        return (-a) ** m / math.factorial(m) * bracket
    arg = (1 - w) / p
    assert not (isinstance(arg, Fraction) and arg <= 0 and arg.denominator == 1), (
        "Gamma pole must be routed through the double-pole branch"
    )
    return gamma_fn(arg, ctx) / pf * mp.power(a, ctx.mpf(w - 1) / pf)


def default_cutoff(p, w, offset: int = 0) -> int:
    """Smallest N with N > s0 + 3/2, plus ``offset``."""
    s0 = (w - 1) / p
    return math.floor(s0 + Fraction(3, 2) if isinstance(s0, Fraction) else s0 + 1.5) + 1 + offset


def _k_term(k, p, w, a, ctx):
    arg = w - k * p
    if isinstance(arg, Fraction) and arg == 1:
        raise AssertionError("zeta pole outside the primed omission")
    z = riemann_zeta(arg, ctx)
    return (-1) ** k * z * a**k / math.factorial(k)


def algebraic_part(
    p,
    w,
    a,
    ctx: PrecisionCtx,
    max_terms: int | None = None,
    *,
    offset: int = 0,
    tol=None,
) -> EvalResult:
    """J term plus the primed sum of (-1)^k zeta(w - kp) a^k / k!.

    * 0 < p <= 1: summed until four consecutive terms fall below ``tol``.
    * p > 1 generic: k = 0 .. N-1 with N = default_cutoff (or ``max_terms``).
    * p, w even: k = 0 .. floor(w/p); the series terminates.

    ``remainder_estimate`` is the first nonzero omitted term for p > 1 (the
    leading exponential term in the even/even case), and ``tol`` for p <= 1.
    """
    par = _params(p, w, a, ctx)
    p, w, a = par.p, par.w, par.a
    regime = par.regime
    mp = ctx.mp
    terms = [_term(-1, j_term(p, w, a, ctx, regime))]
    skip = regime.double_pole
    kind = regime.kind

    if kind in (RegimeKind.CONVERGENT, RegimeKind.BOUNDARY_P1):
        if kind is RegimeKind.BOUNDARY_P1 and not abs(a) < 2 * mp.pi:
            raise ConvergenceError(f"p = 1 expansion needs |a| < 2 pi, got |a| = {abs(a)}")
        tol = ctx.tol if tol is None else ctx.mpf(tol)
        limit = max_terms or 20000
        small_run = 0
        k = 0
        while small_run < 4:
            if k >= limit:
                raise ConvergenceError(f"k-sum did not converge within {limit} terms")
            if k != skip:
                t = _k_term(k, p, w, a, ctx)
                terms.append(_term(k, t))
                small_run = small_run + 1 if abs(t) < tol else 0
            k += 1
        return EvalResult(p, w, a, regime, terms, remainder_estimate=tol, ctx=ctx)

    if kind is RegimeKind.EVEN_EVEN:
        d = derive(p, w, a, ctx)
        for k in range(d.K + 1):
            terms.append(_term(k, _k_term(k, p, w, a, ctx)))
        lead = abs(_leading_exponential(d, ctx))
        return EvalResult(p, w, a, regime, terms, remainder_estimate=lead, ctx=ctx)

    n_terms = max_terms if max_terms is not None else default_cutoff(p, w, offset)
    for k in range(n_terms):
        if k != skip:
            terms.append(_term(k, _k_term(k, p, w, a, ctx)))
    k = n_terms
    estimate = mp.mpf(0)
    while k < n_terms + 64:
        if k != skip:
            t = _k_term(k, p, w, a, ctx)
            if t != 0:
                estimate = abs(t)
                break
        k += 1
    return EvalResult(p, w, a, regime, terms, remainder_estimate=estimate, ctx=ctx)


def negative_w_expansion(p, w_nonneg, a, N_terms: int | None, ctx: PrecisionCtx) -> EvalResult:
    """Expansion of sum n^w exp(-a n^p) (weight n^{+w}) for w >= 0, p > 1."""
    par = _params(p, w_nonneg, a, ctx)
    if par.w < 0:
        raise InvalidInput("w_nonneg must be >= 0")
    if par.p <= 1:
        raise InvalidInput("negative-w expansion needs p > 1")
    neg = -par.w
    if N_terms is None:
        N_terms = default_cutoff(par.p, neg)
    regime = classify(par.p, neg, ctx)
    if regime.kind is RegimeKind.EVEN_EVEN:  # unreachable: -w <= 0
        raise RegimeError("unexpected even/even classification")
    return algebraic_part(par.p, neg, par.a, ctx, max_terms=N_terms)


# -- exponentially small part ------------------------------------------------


def _require_even_even(p, w):
    ok = (
        isinstance(p, Fraction)
        and isinstance(w, Fraction)
        and p.denominator == 1
        and w.denominator == 1
        and p > 0
        and w >= 0
        and p.numerator % 2 == 0
        and w.numerator % 2 == 0
    )
    if not ok:
        raise RegimeError(f"exponential expansions need even p and even w >= 0, got p={p}, w={w}")


def _power(n: int, q, ctx):
    if isinstance(q, Fraction) and q.denominator == 1:
        return ctx.mpf(n ** int(q))
    return ctx.mpf(n) ** ctx.mpf(q)


def s_q_hat(q, z, lam, ctx: PrecisionCtx, tol=None):
    """S_hat_q(z; lam) = sum_{n>=1} exp(-z (n^q - 1)) / n^lam.

    Summation stops once a geometric-ratio bound on the tail is below
    ``tol * |partial sum|``.
    """
    mp = ctx.mp
    z = mp.mpc(z)
    if not z.real > 0:
        raise SectorError(f"|arg z| < pi/2 violated: z = {z}")
    if not q > 1:
        raise InvalidInput(f"q must exceed 1, got {q}")
    tol = ctx.eps if tol is None else ctx.mpf(tol)
    lam_f = ctx.mpf(lam)
    x = z.real
    total = mp.mpc(1)
    n = 1
    while True:
        nxt = n + 1
        d_next = _power(nxt, q, ctx) - 1
        bound = mp.exp(-x * d_next) * mp.mpf(nxt) ** (-lam_f)
        ratio = mp.exp(-x * (_power(nxt + 1, q, ctx) - _power(nxt, q, ctx)))
        if lam_f < 0:
            ratio *= (mp.mpf(nxt + 1) / nxt) ** (-lam_f)
        if ratio < 1 and bound / (1 - ratio) <= tol * abs(total):
            return total
        total += mp.exp(-z * d_next) * mp.mpf(nxt) ** (-lam_f)
        n = nxt
        if n > 10**6:
            raise ConvergenceError("S_hat_q summation exceeded 10^6 terms")


def _sign_m(w) -> int:
    m = int(w) // 2
    return -1 if m % 2 else 1


def _prefactor(d: DerivedParams, ctx):
    """(-1)^m (2 pi)^w A / (2 pi kappa): maps I_L contributions into S_p."""
    mp = ctx.mp
    return _sign_m(d.w) * (2 * mp.pi) ** ctx.mpf(d.w) * d.A / (2 * mp.pi * ctx.mpf(d.kappa))


def _arguments(d: DerivedParams, r: int, ctx):
    mp = ctx.mp
    if r == d.N:
        return [mp.mpc(d.X)]
    psi = ctx.mpf(d.psi(r))
    return [d.X * mp.expjpi(-psi), d.X * mp.expjpi(psi)]


def term_envelope(d: DerivedParams, coeffs, ctx) -> list:
    """|c_j X^(vartheta - j)|, the size of the n = 1 terms without prefactors."""
    absx = abs(d.X)
    th = ctx.mpf(d.vartheta)
    return [abs(ctx.mpf(c)) * absx ** (th - j) for j, c in enumerate(coeffs)]


def _leading_exponential(d: DerivedParams, ctx):
    pref = _prefactor(d, ctx)
    th = ctx.mpf(d.vartheta)
    vals = []
    r = 0
    for z in _arguments(d, r, ctx):
        vals.append(ctx.mp.power(z, th) * ctx.mp.exp(-z))
    return pref * sum(vals)


def _expansion_terms(d: DerivedParams, coeffs, r: int, M: int, ctx):
    mp = ctx.mp
    pref = _prefactor(d, ctx)
    th = ctx.mpf(d.vartheta)
    zs = _arguments(d, r, ctx)
    out = []
    for j in range(M):
        cj = ctx.mpf(coeffs[j])
        if cj == 0:
            out.append(_term(j, mp.mpc(0)))
            continue
        lam = d.lam(j)
        acc = mp.mpc(0)
        for z in zs:
            acc += mp.power(z, th - j) * mp.exp(-z) * s_q_hat(d.q, z, lam, ctx)
        out.append(_term(j, pref * (-1) ** j * cj * acc))
    return out


def _omitted_estimate(d: DerivedParams, coeffs, r: int, M: int, ctx):
    """|prefactor c_M X^(vartheta-M) exp(-X e^{-/+ i pi psi_r})|, larger sign."""
    mp = ctx.mp
    pref = abs(_prefactor(d, ctx))
    th = ctx.mpf(d.vartheta)
    cm = abs(ctx.mpf(coeffs[M]))
    return max(pref * cm * abs(d.X) ** (th - M) * mp.exp(-z.real) for z in _arguments(d, r, ctx))


def term_size(d: DerivedParams, coeffs, r: int, j: int, ctx):
    """One-sided size of term j including prefactors and exp(-Re Z)."""
    return _omitted_estimate(d, coeffs, r, j, ctx)


def _expansion_indices(d: DerivedParams) -> list[int]:
    rs = list(range(d.N))
    if d.delta_pp:
        rs.append(d.N)
    return rs


def theorem1_exponential(p, w, a, M, ctx: PrecisionCtx) -> list[ExpansionPart]:
    """Exponentially small expansions in complex form, truncated to M terms.

    ``M`` is an int (same for every expansion) or a dict ``{r: M_r}``.
    Term values already include the (-1)^m (2 pi)^w factor, so they add
    directly to S_p(a; w).
    """
    par = _params(p, w, a, ctx)
    _require_even_even(par.p, par.w)
    d = derive(par.p, par.w, par.a, ctx)
    rs = _expansion_indices(d)
    per_r = M if isinstance(M, dict) else {r: M for r in rs}
    if any(per_r[r] < 1 for r in rs):
        raise InvalidInput("M must be at least 1")
    cmax = max(per_r[r] for r in rs) + 1
    coeffs = expansion_coefficients(d.p, d.w, cmax).c
    parts = []
    for r in rs:
        m_r = per_r[r]
        terms = _expansion_terms(d, coeffs, r, m_r, ctx)
        parts.append(
            ExpansionPart(
                r=r,
                paired=r < d.N,
                psi=d.psi(r),
                terms=terms,
                remainder_estimate=_omitted_estimate(d, coeffs, r, m_r, ctx),
            )
        )
    return parts


def theorem2_exponential(p, w, a_real, M, n_max: int | None, ctx: PrecisionCtx, tol=None) -> list[ExpansionPart]:
    """Real form of the exponential expansions for real a > 0.

    Terms are indexed by n; each carries the M-term cosine series
    Upsilon_{n,r}.  With ``n_max`` exactly that many n-terms are summed;
    otherwise summation stops once the tail bound drops below ``tol`` times
    the partial sum.
    """
    par = _params(p, w, a_real, ctx)
    a = par.a
    if a.imag != 0:
        raise InvalidInput("theorem2_exponential needs real a > 0")
    _require_even_even(par.p, par.w)
    d = derive(par.p, par.w, a, ctx)
    mp = ctx.mp
    tol = ctx.eps if tol is None else ctx.mpf(tol)
    coeffs = [ctx.mpf(c) for c in expansion_coefficients(d.p, d.w, M + 1).c]
    X = d.X.real
    th = ctx.mpf(d.vartheta)
    q = d.q
    wf = ctx.mpf(d.w)
    base = abs(_prefactor(d, ctx))  # A (2pi)^w / (2 pi kappa)
    sign = _sign_m(d.w)
    coef_bound = mp.fsum(abs(c) * X ** (-j) for j, c in enumerate(coeffs[:M]))
    parts = []
    for r in _expansion_indices(d):
        paired = r < d.N
        psi = ctx.mpf(d.psi(r))
        cos_p, sin_p = mp.cospi(psi), mp.sinpi(psi)
        scale = sign * base * (2 if paired else 1)
        terms = []
        total = mp.mpf(0)
        n = 1
        while True:
            xn = X * _power(n, q, ctx)
            ups = mp.fsum(
                (-1) ** j * coeffs[j] * xn ** (-j) * mp.cos(xn * sin_p + mp.pi * (j - th) * psi)
                for j in range(M)
            )
            val = scale * mp.mpf(n) ** (wf - 1) * xn**th * mp.exp(-xn * cos_p) * ups
            terms.append(_term(n, mp.mpc(val)))
            total += val
            nb = n + 1
            if n_max is not None:
                if n >= n_max:
                    break
                n = nb
                continue
            xb = X * _power(nb, q, ctx)
            nxt = base * 2 * coef_bound * mp.mpf(nb) ** (wf - 1) * xb**th * mp.exp(-xb * cos_p)
            ratio = mp.exp(-X * cos_p * (_power(nb + 1, q, ctx) - _power(nb, q, ctx)))
            if ratio < 1 and nxt / (1 - ratio) <= tol * abs(total):
                break
            n = nb
            if n > 10**6:
                raise ConvergenceError("cosine-form n-sum exceeded 10^6 terms")
        parts.append(
            ExpansionPart(
                r=r,
                paired=paired,
                psi=d.psi(r),
                terms=terms,
                remainder_estimate=_omitted_estimate(d, coeffs + [0], r, M, ctx)
                if M < len(coeffs)
                else 0,
            )
        )
    return parts


# -- truncation ---------------------------------------------------------------


def _default_search_limit(d: DerivedParams) -> int:
    return int(1.5 * float(abs(d.X))) + 24


def least_term_index(p, w, a, r: int, ctx: PrecisionCtx, M_max: int | None = None) -> int:
    """Index of the first local minimum of |c_j X^(vartheta - j)| (ties: smaller j)."""
    par = _params(p, w, a, ctx)
    _require_even_even(par.p, par.w)
    d = derive(par.p, par.w, par.a, ctx)
    if r not in _expansion_indices(d):
        raise InvalidInput(f"no exponential expansion with r = {r}")
    limit = M_max or _default_search_limit(d)
    mags = term_envelope(d, expansion_coefficients(d.p, d.w, limit + 1).c, ctx)
    # zero coefficients (e.g. w = 0, p = 2) terminate the series at once
    for j in range(1, limit):
        if mags[j] == 0:
            return j
        if mags[j] < mags[j - 1] and mags[j] <= mags[j + 1]:
            return j
    raise NoMinimumError(f"term magnitudes still decreasing at M_max = {limit}", limit)


def optimal_truncation(p, w, a, r: int, ctx: PrecisionCtx, M_max: int | None = None) -> int:
    """Optimal truncation index j0: terms j = 0..j0 are kept.

    The expansion is cut just before its least term, so j0 is one less than
    :func:`least_term_index`.
    """
    return max(least_term_index(p, w, a, r, ctx, M_max) - 1, 0)


# -- assembly -------------------------------------------------------------------


def evaluate(
    p,
    w,
    a,
    ctx: PrecisionCtx,
    M: int | None = None,
    include_exponentials: bool = True,
    drop_subdominant: bool = True,
) -> EvalResult:
    """Algebraic part plus, for even p and w, the exponential expansions.

    With ``M=None`` every exponential expansion is optimally truncated
    (terms 0..j0) and, if ``drop_subdominant``, an expansion other than the
    leading one is discarded when its j = 0 term is smaller than the least
    term of the leading expansion.
    """
    par = _params(p, w, a, ctx)
    result = algebraic_part(par.p, par.w, par.a, ctx)
    regime = result.regime
    if not (regime.is_even_even and include_exponentials):
        return result
    d = derive(par.p, par.w, par.a, ctx)
    rs = _expansion_indices(d)
    if M is None:
        jl = least_term_index(par.p, par.w, par.a, rs[0], ctx)
        j0 = max(jl - 1, 0)
        parts = theorem1_exponential(par.p, par.w, par.a, j0 + 1, ctx)
        coeffs = expansion_coefficients(d.p, d.w, jl + 2).c
        lead_min = term_size(d, coeffs, rs[0], jl, ctx)
        for part in parts:
            part.j0 = j0
            part.min_term = term_size(d, coeffs, part.r, jl, ctx)
            if drop_subdominant and part.r != rs[0] and part.terms[0].magnitude < lead_min:
                part.dropped = True
    else:
        parts = theorem1_exponential(par.p, par.w, par.a, M, ctx)
    result.exponential = parts
    estimates = [e.remainder_estimate for e in parts if not e.dropped]
    estimates += [e.terms[0].magnitude for e in parts if e.dropped]
    result.remainder_estimate = max(estimates)
    return result
