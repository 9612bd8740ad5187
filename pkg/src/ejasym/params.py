"""Input validation, regime classification and the derived constants.

Rational inputs (ints, Fractions, decimal strings) are kept exact so that
regime decisions such as the double-pole test w = pM + 1 are made on exact
equality.  Only the genuinely transcendental constants (A, chi, X) are mpf.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, SectorError
from .precision import PrecisionCtx, as_exact

__all__ = [
    "RegimeKind",
    "Regime",
    "Params",
    "DerivedParams",
    "classify",
    "derive",
    "parse_real",
    "parse_complex",
    "nearest_integer",
]


class RegimeKind(str, enum.Enum):
    CONVERGENT = "convergent"  # 0 < p < 1
    BOUNDARY_P1 = "boundary_p1"  # p == 1, k-sum converges for |a| < 2 pi
    ALGEBRAIC_ONLY = "algebraic_only"  # p > 1, not (even, even)
    EVEN_EVEN = "even_even"  # p, w both even positive integers


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    double_pole: int | None = None

    @property
    def is_even_even(self) -> bool:
        return self.kind is RegimeKind.EVEN_EVEN


def parse_real(x, ctx: PrecisionCtx | None = None):
    """Return an exact Fraction when possible, else an mpf in ``ctx``."""
    ex = as_exact(x)
    if ex is not None:
        return ex
    if ctx is None:
        raise InvalidInput(f"inexact value {x!r} needs a precision context")
    try:
        value = ctx.mpf(x)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"cannot interpret {x!r} as a real number") from exc
    return value


_SPLIT = re.compile(r"(?<=[^eE+-])[+-]")


def parse_complex(a, ctx: PrecisionCtx):
    """Parse ``a`` into an mpc.  Strings accept ``re+imi`` / ``re-imj`` syntax."""
    mp = ctx.mp
    if isinstance(a, str):
        s = a.strip().replace(" ", "")
        if not s:
            raise InvalidInput("empty value for a")
        if s[-1] in "ij":
            body = s[:-1]
            parts = [m.start() for m in _SPLIT.finditer(body)]
            if parts:
                cut = parts[-1]
                re_part, im_part = body[:cut], body[cut:]
            else:
                re_part, im_part = "0", body
            if im_part in ("", "+"):
                im_part = "1"
            elif im_part == "-":
                im_part = "-1"
            return mp.mpc(_exact_mpf(re_part, ctx), _exact_mpf(im_part, ctx))
        return mp.mpc(_exact_mpf(s, ctx))
    if isinstance(a, complex):
        return mp.mpc(ctx.mpf(Fraction(repr(a.real))), ctx.mpf(Fraction(repr(a.imag))))
    if isinstance(a, (int, float, Fraction)):
        return mp.mpc(ctx.mpf(as_exact(a)))
    return mp.mpc(a)


def _exact_mpf(text, ctx):
    try:
        return ctx.mpf(Fraction(text))
    except ValueError as exc:
        raise InvalidInput(f"cannot parse {text!r} as a real number") from exc


def nearest_integer(x: Fraction) -> int:
    """[x] = N for x in (N - 1/2, N + 1/2]."""
    return math.ceil(x - Fraction(1, 2))


def _is_even_positive(x) -> bool:
    return isinstance(x, Fraction) and x.denominator == 1 and x > 0 and x.numerator % 2 == 0


def classify(p, w, ctx: PrecisionCtx | None = None) -> Regime:
    p = parse_real(p, ctx)
    w = parse_real(w, ctx)
    if p <= 0:
        raise InvalidInput(f"p must be positive, got {p}")
    double_pole = None
    if isinstance(p, Fraction) and isinstance(w, Fraction):
        m = (w - 1) / p
        if m >= 0 and m.denominator == 1:
            double_pole = int(m)
    if p < 1:
        kind = RegimeKind.CONVERGENT
    elif p == 1:
        kind = RegimeKind.BOUNDARY_P1
    elif _is_even_positive(p) and _is_even_positive(w):
        kind = RegimeKind.EVEN_EVEN
    else:
        kind = RegimeKind.ALGEBRAIC_ONLY
    return Regime(kind, double_pole)


@dataclass(frozen=True)
class Params:
    """Validated (p, w, a) triple at a given precision."""

    p: object
    w: object
    a: object
    ctx: PrecisionCtx

    @classmethod
    def make(cls, p, w, a, ctx: PrecisionCtx) -> "Params":
        p = parse_real(p, ctx)
        w = parse_real(w, ctx)
        if p <= 0:
            raise InvalidInput(f"p must be positive, got {p}")
        a = parse_complex(a, ctx)
        check_sector(a)
        return cls(p, w, a, ctx)

    @property
    def regime(self) -> Regime:
        return classify(self.p, self.w, self.ctx)


def check_sector(a):
    if a == 0:
        raise InvalidInput("a must be nonzero")
    if not a.real > 0:
        raise SectorError(f"|arg a| < pi/2 violated: a = {a}")


@dataclass(frozen=True)
class DerivedParams:
    p: object
    w: object
    kappa: object
    h: object
    vartheta: object
    q: object
    s0: object
    K: int
    N: int
    p_star: object
    delta_pp: int
    A: object
    chi: object
    X: object

    def psi(self, r: int):
        """Phase parameter of the r-th exponential expansion; psi_N = 0."""
        if r == self.N:
            return self.kappa * 0
        if not 0 <= r < self.N:
            raise InvalidInput(f"r must lie in 0..{self.N}, got {r}")
        return (self.p / 2 - 2 * r - 1) / self.kappa

    def lam(self, j: int):
        return 1 + (self.w + self.p * (j - Fraction(1, 2))) / self.kappa

    @property
    def n_exponential(self) -> int:
        return self.N + self.delta_pp


def derive(p, w, a, ctx: PrecisionCtx) -> DerivedParams:
    params = Params.make(p, w, a, ctx)
    p, w, a = params.p, params.w, params.a
    if p <= 1:
        raise InvalidInput(f"derived constants need p > 1, got p = {p}")
    mp = ctx.mp
    half = Fraction(1, 2)
    kappa = p - 1
    h = p ** (-p) if isinstance(p, Fraction) and p.denominator == 1 else ctx.mpf(p) ** (-ctx.mpf(p))
    vartheta = half - w
    q = p / kappa
    s0 = (w - 1) / p
    K = math.floor(w / p)
    N = nearest_integer(p / 4) if isinstance(p, Fraction) else nearest_integer(Fraction(str(p / 4)))
    p_star = 4 * N + 2
    delta = 1 if p == p_star else 0
    kf, pf, tf = ctx.mpf(kappa), ctx.mpf(p), ctx.mpf(vartheta)
    A = mp.sqrt(2 * mp.pi) * kf ** (mp.mpf(0.5) - tf) * pf**tf
    chi = (2 * mp.pi) ** pf / a
    # principal branch: arg(h chi) = -arg a lies in (-pi/2, pi/2)
    X = kf * (ctx.mpf(h) * (2 * mp.pi) ** pf) ** (1 / kf) * mp.power(a, -1 / kf)
    return DerivedParams(p, w, kappa, h, vartheta, q, s0, K, N, p_star, delta, A, chi, X)
