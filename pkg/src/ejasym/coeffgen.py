"""Coefficients c_j(w, p) of the inverse factorial expansion.

For p > 1 the gamma-function ratio

    Gamma(alpha + p s) / (Gamma(1 + s) Gamma(kappa s + vartheta)),
    alpha = 1 - w, kappa = p - 1, vartheta = 1/2 - w,

equals (A / 2 pi) (h kappa^kappa)^(-s) R(s) G(s), where R collects the
elementary factors e(beta s; gamma) and G the scaled gamma functions
Gamma*(z).  Writing xi = 1 / (kappa s), R G is a formal power series in xi,
and the c_j are fixed by matching

    R(s) G(s) = sum_j c_j / (1 - kappa s - vartheta)_j

coefficient by coefficient.  Everything is exact when p and w are rational.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InvalidInput
from .precision import PrecisionCtx, as_exact, stirling_coefficients

__all__ = [
    "FormalSeries",
    "CoefficientTable",
    "series_R",
    "series_G",
    "series_RG",
    "expansion_coefficients",
    "closed_form_p2",
    "pochhammer",
]


class FormalSeries:
    """Truncated power series d_0 + d_1 xi + ... + d_{n-1} xi^(n-1)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"FormalSeries({self.coeffs!r})"

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def _aligned(self, other):
        n = min(self.order, other.order)
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other):
        a, b = self._aligned(other)
        return FormalSeries(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        a, b = self._aligned(other)
        return FormalSeries(x - y for x, y in zip(a, b))

    def __neg__(self):
        return FormalSeries(-x for x in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries(x * other for x in self.coeffs)
        a, b = self._aligned(other)
        n = len(a)
        return FormalSeries(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n))

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, len(a)):
            out.append(-inv0 * sum(a[i] * out[k - i] for i in range(1, k + 1)))
        return FormalSeries(out)

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.reciprocal()
        return FormalSeries(x / other for x in self.coeffs)

    def exp(self):
        """exp of a series with zero constant term (cumulant recursion)."""
        a = self.coeffs
        if a[0] != 0:
            raise ValueError("exp needs a zero constant term")
        one = a[0] + 1
        out = [one]
        for k in range(1, len(a)):
            out.append(sum(i * a[i] * out[k - i] for i in range(1, k + 1)) / k)
        return FormalSeries(out)

    def log(self):
        """log of a series with constant term 1."""
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("log needs constant term 1")
        out = [a[0] - 1]
        for k in range(1, len(a)):
            acc = k * a[k] - sum(i * out[i] * a[k - i] for i in range(1, k))
            out.append(acc / k)
        return FormalSeries(out)

    def scale(self, c):
        """Substitute xi -> c xi."""
        out, power = [], c ** 0
        for x in self.coeffs:
            out.append(x * power)
            power = power * c
        return FormalSeries(out)


@dataclass(frozen=True)
class CoefficientTable:
    p: object
    w: object
    c: tuple

    @property
    def M(self) -> int:
        return len(self.c)

    @property
    def alpha(self):
        return 1 - self.w

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.c)

    def __getitem__(self, j):
        return self.c[j]


def _field(p, w, ctx):
    """Coerce (p, w) to a common number field; returns (p, w, conv)."""
    ep, ew = as_exact(p), as_exact(w)
    if ep is not None and ew is not None:
        return ep, ew, Fraction
    if ctx is None:
        raise InvalidInput("inexact p or w requires a precision context")
    return ctx.mpf(p), ctx.mpf(w), ctx.mpf


def _check_p(p):
    if p <= 1:
        raise InvalidInput(f"coefficients are defined for p > 1, got p = {p}")


def _log_e(beta, gam, kappa, n, conv):
    """log e(beta s; gam) as a series in xi = 1/(kappa s).

    With t = (gam kappa / beta) xi the exponent is
    gam (log(1+t)/t - 1) + (gam - 1/2) log(1+t).
    """
    c = gam * kappa / beta
    half = conv(Fraction(1, 2))
    out = [conv(0)]
    power = c
    for k in range(1, n):
        sign = 1 if k % 2 == 0 else -1
        coef = gam * conv(Fraction(sign, k + 1)) + (gam - half) * conv(Fraction(-sign, k))
        out.append(coef * power)
        power = power * c
    return FormalSeries(out)


def series_R(p, w, order: int, ctx: PrecisionCtx | None = None) -> FormalSeries:
    """R(s) = e(ps; alpha) / (e(s; 1) e(kappa s; vartheta)) in powers of xi."""
    p, w, conv = _field(p, w, ctx)
    _check_p(p)
    kappa = p - 1
    alpha = 1 - w
    vartheta = conv(Fraction(1, 2)) - w
    one = conv(1)
    log_r = (
        _log_e(p, alpha, kappa, order, conv)
        - _log_e(one, one, kappa, order, conv)
        - _log_e(kappa, vartheta, kappa, order, conv)
    )
    return log_r.exp()


def _gamma_star(beta, gam, kappa, n, conv):
    """Gamma*(beta s + gam) as a series in xi.

    1/z = (kappa/beta) xi / (1 + c xi) with c = gam kappa / beta, so the
    coefficient of xi^m in sum_k (-1)^k gamma_k z^-k is
    sum_k (-1)^k gamma_k (kappa/beta)^k C(-k, m-k) c^(m-k).
    """
    g = [conv(x) for x in stirling_coefficients(n)]
    r = kappa / beta
    c = gam * kappa / beta
    rpow = [conv(1)]
    cpow = [conv(1)]
    for _ in range(1, n):
        rpow.append(rpow[-1] * r)
        cpow.append(cpow[-1] * c)
    out = []
    for m in range(n):
        acc = g[0] if m == 0 else conv(0)
        for k in range(1, m + 1):
            i = m - k
            # C(-k, i) = (-1)^i C(k+i-1, i)
            binom = comb(k + i - 1, i) * (-1) ** i
            acc += (-1) ** k * g[k] * rpow[k] * binom * cpow[i]
        out.append(acc)
    return FormalSeries(out)


def series_G(p, w, order: int, ctx: PrecisionCtx | None = None) -> FormalSeries:
    """G(s) = Gamma*(alpha + ps) / (Gamma*(1 + s) Gamma*(kappa s + vartheta))."""
    p, w, conv = _field(p, w, ctx)
    _check_p(p)
    kappa = p - 1
    alpha = 1 - w
    vartheta = conv(Fraction(1, 2)) - w
    one = conv(1)
    num = _gamma_star(p, alpha, kappa, order, conv)
    den = _gamma_star(one, one, kappa, order, conv) * _gamma_star(kappa, vartheta, kappa, order, conv)
    return num / den


def series_RG(p, w, order: int, ctx: PrecisionCtx | None = None) -> FormalSeries:
    return series_R(p, w, order, ctx) * series_G(p, w, order, ctx)


def _solve(rg: FormalSeries, vartheta, conv):
    """Forward substitution against the basis 1/(1 - kappa s - vartheta)_j.

    1/(1 - kappa s - vartheta)_j = (-xi)^j prod_{i<j} (1 - (1 - vartheta + i) xi)^-1,
    so basis j starts at xi^j with leading coefficient (-1)^j.
    """
    n = rg.order
    residual = list(rg.coeffs)
    basis = [conv(1)] + [conv(0)] * (n - 1)
    out = []
    for j in range(n):
        cj = residual[j] / basis[j]
        out.append(cj)
        for i in range(j, n):
            residual[i] -= cj * basis[i]
        # basis_{j+1} = basis_j * (-xi) / (1 - b xi)
        b = 1 - vartheta + j
        shifted = [conv(0)] + [-x for x in basis[:-1]]
        nxt = []
        prev = conv(0)
        for x in shifted:
            prev = x + b * prev
            nxt.append(prev)
        basis = nxt
    return out


_cache_lock = threading.Lock()
_cache: dict[tuple, CoefficientTable] = {}


def expansion_coefficients(p, w, M: int, ctx: PrecisionCtx | None = None) -> CoefficientTable:
    """c_0 .. c_{M-1}; exact Fractions when p and w are rational."""
    if M < 1:
        raise InvalidInput("M must be at least 1")
    p, w, conv = _field(p, w, ctx)
    _check_p(p)
    key = (p, w) if conv is Fraction else (p, w, ctx.dps)
    hit = _cache.get(key)
    if hit is not None and hit.M >= M:
        return CoefficientTable(p, w, hit.c[:M])
    rg = series_RG(p, w, M, ctx)
    vartheta = conv(Fraction(1, 2)) - w
    table = CoefficientTable(p, w, tuple(_solve(rg, vartheta, conv)))
    with _cache_lock:
        old = _cache.get(key)
        if old is None or old.M < table.M:
            _cache[key] = table
    return table


def pochhammer(x, n: int):
    out = x * 0 + 1
    for i in range(n):
        out *= x + i
    return out


def closed_form_p2(w, M: int, ctx: PrecisionCtx | None = None) -> CoefficientTable:
    """c_j = 2^(-2j) (w)_{2j} / j! for p = 2."""
    if M < 1:
        raise InvalidInput("M must be at least 1")
    ew = as_exact(w)
    wv = ew if ew is not None else ctx.mpf(w)
    c = tuple(pochhammer(wv, 2 * j) / (4**j * factorial(j)) for j in range(M))
    return CoefficientTable(Fraction(2), wv, c)
