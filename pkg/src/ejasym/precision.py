"""Arbitrary-precision context and the classical special functions.

Every numeric routine takes an explicit :class:`PrecisionCtx`.  Each context
owns a private mpmath context running at ``working_digits + guard_digits``
decimal digits, so contexts of different precision can be used side by side
(and from several threads) without touching mpmath's global state.

Bernoulli numbers and Stirling coefficients are exact ``Fraction`` sequences,
cached process-wide and extended on demand.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from mpmath.ctx_mp import MPContext
from mpmath.libmp import mpf_pos, round_nearest

from .errors import ConvergenceError, InvalidInput, PoleError

__all__ = [
    "PrecisionCtx",
    "bernoulli",
    "stirling_coefficients",
    "gamma_fn",
    "digamma",
    "euler_const",
    "riemann_zeta",
    "as_exact",
]


@dataclass(frozen=True)
class PrecisionCtx:
    working_digits: int = 30
    guard_digits: int | None = None
    _mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.working_digits) != self.working_digits or self.working_digits < 15:
            raise InvalidInput(f"working_digits must be an integer >= 15, got {self.working_digits}")
        guard = self.guard_digits
        if guard is None:
            guard = max(10, self.working_digits // 10)
            object.__setattr__(self, "guard_digits", guard)
        if guard < 10:
            raise InvalidInput(f"guard_digits must be >= 10, got {guard}")
        mp = MPContext()
        mp.dps = self.working_digits + guard
        object.__setattr__(self, "_mp", mp)

    @property
    def mp(self) -> MPContext:
        return self._mp

    @property
    def dps(self) -> int:
        """Internal decimal precision (working + guard)."""
        return self.working_digits + self.guard_digits

    @property
    def eps(self):
        """Unit roundoff of the internal precision."""
        return self._mp.eps

    @property
    def tol(self):
        """10**(-working_digits) as an mpf."""
        return self._mp.mpf(10) ** (-self.working_digits)

    def mpf(self, x):
        if isinstance(x, Fraction):
            return self._mp.mpf(x.numerator) / x.denominator
        if isinstance(x, str):
            return self.mpf(Fraction(x))
        return self._mp.mpf(x)

    def mpc(self, x):
        if isinstance(x, (Fraction, str, int)):
            return self._mp.mpc(self.mpf(x))
        if isinstance(x, complex):
            return self._mp.mpc(x.real, x.imag)
        return self._mp.mpc(x)

    def round(self, x):
        """Round an mpf/mpc to ``working_digits`` (kept in this context)."""
        bits = int(self.working_digits * 3.3219280948873626) + 1
        mp = self._mp
        if isinstance(x, mp.mpc):
            re = mpf_pos(x.real._mpf_, bits, round_nearest)
            im = mpf_pos(x.imag._mpf_, bits, round_nearest)
            return mp.make_mpc((re, im))
        x = mp.mpf(x)
        return mp.make_mpf(mpf_pos(x._mpf_, bits, round_nearest))


def as_exact(x) -> Fraction | None:
    """Exact rational value of ``x`` if it has one we trust, else None.

    Integers, Fractions and decimal strings are exact.  Floats are read through
    their shortest repr, so ``0.1`` means 1/10.  mpf values are treated as
    inexact.
    """
    if isinstance(x, bool):
        raise InvalidInput("boolean is not a numeric parameter")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidInput(f"non-finite parameter {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise InvalidInput(f"cannot parse {x!r} as a real number") from exc
    return None


def _is_nonpositive_integer(x, mpx) -> bool:
    ex = as_exact(x)
    if ex is not None:
        return ex <= 0 and ex.denominator == 1
    return mpx <= 0 and mpx == int(mpx)


# -- exact sequences ---------------------------------------------------------

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1), Fraction(-1, 2)]

_stirling_lock = threading.Lock()
_stirling: list[Fraction] = []


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n with B_1 = -1/2."""
    if n < 0:
        raise InvalidInput("bernoulli index must be nonnegative")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        # sum_{k=0}^{m} C(m+1, k) B_k = 0
        while len(_bern) <= n:
            m = len(_bern)
            if m % 2 == 1:
                _bern.append(Fraction(0))
                continue
            acc = Fraction(0)
            binom = 1  # C(m+1, 0)
            for k in range(m):
                if k < 2 or k % 2 == 0:
                    acc += binom * _bern[k]
                binom = binom * (m + 1 - k) // (k + 1)
            _bern.append(-acc / (m + 1))
    return _bern[n]


def stirling_coefficients(count: int) -> list[Fraction]:
    """gamma_0 .. gamma_{count-1} with Gamma*(z) ~ sum (-1)^k gamma_k z^-k.

    Obtained by exponentiating the Stirling series for log Gamma*(z), which is
    sum B_2k / (2k (2k-1) z^(2k-1)), term by term in x = 1/z.
    """
    if count < 1:
        raise InvalidInput("count must be positive")
    if count <= len(_stirling):
        return _stirling[:count]
    with _stirling_lock:
        n = len(_stirling)
        if count > n:
            # log-series coefficients l_k of x^k
            logs = [Fraction(0)] * count
            for k in range(1, (count + 1) // 2 + 1):
                i = 2 * k - 1
                if i < count:
                    logs[i] = bernoulli(2 * k) / (2 * k * (2 * k - 1))
            # e_k = (1/k) sum_{i=1}^k i l_i e_{k-i}, recover e from gamma
            e = [Fraction((-1) ** k) * g for k, g in enumerate(_stirling)]
            if not e:
                e.append(Fraction(1))
            for k in range(len(e), count):
                e.append(sum(i * logs[i] * e[k - i] for i in range(1, k + 1, 2)) / k)
            _stirling[:] = [(-1) ** k * v for k, v in enumerate(e)]
    return _stirling[:count]


# -- gamma and digamma -------------------------------------------------------


def _shift_threshold(ctx: PrecisionCtx) -> int:
    # Stirling's least term is about exp(-2 pi z)
    return int(0.4 * ctx.dps) + 8


def _log_gamma_stirling(z, ctx: PrecisionCtx):
    mp = ctx.mp
    total = (z - 0.5) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    zinv2 = 1 / (z * z)
    zpow = 1 / z
    k = 1
    while True:
        term = ctx.mpf(bernoulli(2 * k) / (2 * k * (2 * k - 1))) * zpow
        total += term
        if abs(term) < ctx.eps * abs(total):
            return total
        k += 1
        if k > 3 * z + 10:
            raise ConvergenceError(f"Stirling series did not converge at z={z}")
        zpow *= zinv2


def _gamma(x, ctx: PrecisionCtx):
    mp = ctx.mp
    if x < 0.5:
        return mp.pi / (mp.sinpi(x) * _gamma(1 - x, ctx))
    z = x
    prod = mp.mpf(1)
    threshold = _shift_threshold(ctx)
    while z < threshold:
        prod *= z
        z += 1
    return mp.exp(_log_gamma_stirling(z, ctx)) / prod


def gamma_fn(x, ctx: PrecisionCtx):
    """Gamma(x) for real x, via reflection and shifted Stirling series."""
    xm = ctx.mpf(x)
    if _is_nonpositive_integer(x, xm):
        raise PoleError(f"Gamma has a pole at {x}")
    return ctx.round(_gamma(xm, ctx))


def _digamma(x, ctx: PrecisionCtx):
    mp = ctx.mp
    if x < 0.5:
        return _digamma(1 - x, ctx) - mp.pi * mp.cospi(x) / mp.sinpi(x)
    shift = mp.mpf(0)
    z = x
    threshold = _shift_threshold(ctx)
    while z < threshold:
        shift += 1 / z
        z += 1
    total = mp.log(z) - 1 / (2 * z)
    zinv2 = 1 / (z * z)
    zpow = zinv2
    k = 1
    while True:
        term = ctx.mpf(bernoulli(2 * k) / (2 * k)) * zpow
        total -= term
        if abs(term) < ctx.eps * abs(total):
            break
        k += 1
        if k > 3 * z + 10:
            raise ConvergenceError(f"digamma series did not converge at z={z}")
        zpow *= zinv2
    return total - shift


def digamma(x, ctx: PrecisionCtx):
    """psi(x) = Gamma'(x)/Gamma(x) for real x."""
    xm = ctx.mpf(x)
    if _is_nonpositive_integer(x, xm):
        raise PoleError(f"digamma has a pole at {x}")
    return ctx.round(_digamma(xm, ctx))


_euler_lock = threading.Lock()
_euler_cache: dict[int, object] = {}


def _euler(ctx: PrecisionCtx):
    # Brent-McMillan; error is O(exp(-4n))
    key = ctx.dps
    hit = _euler_cache.get(key)
    if hit is not None:
        return ctx.mpf(hit)
    mp = ctx.mp
    n = int(ctx.dps * math.log(10) / 4) + 2
    n2 = n * n
    a = -mp.log(n)
    b = mp.mpf(1)
    u, v = a, b
    for k in range(1, int(3.6 * n) + 2):
        b = b * n2 / (k * k)
        a = (a * n2 / k + b) / k
        u += a
        v += b
    value = u / v
    with _euler_lock:
        _euler_cache[key] = value
    return value


def euler_const(ctx: PrecisionCtx):
    """Euler's constant gamma = 0.5772156649..."""
    return ctx.round(_euler(ctx))


# -- Riemann zeta -------------------------------------------------------------


def _zeta_em(s, ctx: PrecisionCtx):
    """Euler-Maclaurin summation, valid for real s >= 1/2, s != 1."""
    mp = ctx.mp
    n_terms = int(0.4 * ctx.dps) + 10
    big_n = mp.mpf(n_terms)
    total = mp.fsum(mp.mpf(n) ** (-s) for n in range(1, n_terms))
    total += big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
    # (s)_{2k-1} N^(-s-2k+1) B_2k / (2k)!
    rising = s
    npow = big_n ** (-s - 1)
    fact = mp.mpf(2)
    k = 1
    while True:
        term = ctx.mpf(bernoulli(2 * k)) / fact * rising * npow
        total += term
        if abs(term) < ctx.eps * abs(total):
            return total
        if k > math.pi * n_terms:
            raise ConvergenceError(f"Euler-Maclaurin tail did not converge for s={s}")
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        npow /= big_n * big_n
        fact *= (2 * k + 1) * (2 * k + 2)
        k += 1


def _zeta(s, ctx: PrecisionCtx, exact=None):
    mp = ctx.mp
    if exact is not None:
        if exact == 1:
            raise PoleError("zeta has a pole at s = 1")
        if exact == 0:
            return mp.mpf(-0.5)
        if exact < 0 and exact.denominator == 1 and exact % 2 == 0:
            return mp.mpf(0)
    elif s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s >= 0.5:
        return _zeta_em(s, ctx)
    one_minus = 1 - s
    return (
        mp.mpf(2) ** s
        * mp.pi ** (s - 1)
        * mp.sinpi(s / 2)
        * _gamma(one_minus, ctx)
        * _zeta_em(one_minus, ctx)
    )


def riemann_zeta(s, ctx: PrecisionCtx):
    """zeta(s) for real s != 1.

    Euler-Maclaurin summation for s >= 1/2, the functional equation below.
    The trivial zeros and zeta(0) = -1/2 are returned exactly for exact input.
    """
    return ctx.round(_zeta(ctx.mpf(s), ctx, as_exact(s)))
