"""Exact arithmetic on elliptic curves over Q in short Weierstrass form.

Curves are y^2 = x^3 + a*x + b with integer coefficients, points carry
exact rational coordinates (GMP rationals, always reduced with positive
denominators).  No floating point enters any coordinate computation; the
only float in this module is the canonical-height estimate, which is a
statistical summary of exact integer data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

Rational = Union[int, str, Fraction, mpq]

# A rational torsion point has order at most 12 (Mazur), so a direct scan
# of the first 12 multiples decides torsion without any factorization.
MAZUR_TORSION_BOUND = 12


def _to_mpz(v) -> mpz:
    if isinstance(v, (int, mpz)):
        return mpz(v)
    if isinstance(v, str):
        return mpz(v.strip())
    raise TypeError(f"expected an integer, got {v!r}")


def _to_mpq(v) -> mpq:
    if isinstance(v, (int, mpz, Fraction, mpq)):
        return mpq(v)
    if isinstance(v, str):
        s = v.strip()
        if "/" in s:
            num, _, den = s.partition("/")
            return mpq(mpz(num.strip()), mpz(den.strip()))
        return mpq(mpz(s))
    raise TypeError(f"expected a rational, got {v!r}")


def _log_big(n) -> float:
    """Natural log of a positive integer of any size."""
    return float(gmpy2.log(mpz(n)))


@dataclass(frozen=True)
class CurveQ:
    """The curve y^2 = x^3 + a*x + b over Q with integer a, b."""

    a: mpz
    b: mpz
    disc: mpz = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a", _to_mpz(self.a))
        object.__setattr__(self, "b", _to_mpz(self.b))
        d = -16 * (4 * self.a**3 + 27 * self.b**2)
        if d == 0:
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")
        object.__setattr__(self, "disc", d)


@dataclass(frozen=True)
class PointQ:
    """A rational point: affine (x, y), or the point at infinity (x = y = None)."""

    x: Optional[mpq]
    y: Optional[mpq]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("give both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", _to_mpq(self.x))
            object.__setattr__(self, "y", _to_mpq(self.y))

    @classmethod
    def infinity(cls) -> "PointQ":
        return cls(None, None)

    @classmethod
    def affine(cls, x: Rational, y: Rational) -> "PointQ":
        return cls(_to_mpq(x), _to_mpq(y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        return "PointQ(inf)" if self.is_infinity else f"PointQ({self.x}, {self.y})"


INFINITY = PointQ.infinity()


@dataclass(frozen=True)
class LowestForm:
    """A point written as (aP/dP^2, bP/dP^3) with dP >= 1 and gcd(aP*bP, dP) = 1."""

    aP: mpz
    bP: mpz
    dP: mpz

    def __post_init__(self):
        object.__setattr__(self, "aP", _to_mpz(self.aP))
        object.__setattr__(self, "bP", _to_mpz(self.bP))
        object.__setattr__(self, "dP", _to_mpz(self.dP))
        if self.dP < 1:
            raise ValueError("dP must be positive")

    @property
    def x(self) -> mpq:
        return mpq(self.aP, self.dP**2)

    @property
    def y(self) -> mpq:
        return mpq(self.bP, self.dP**3)

    def point(self) -> PointQ:
        return PointQ(self.x, self.y)


@dataclass(frozen=True)
class HeightEstimate:
    """Canonical-height estimate from denominator growth.

    hhat is on the natural-log scale; spread is the relative range of the
    per-index estimates 2*log(d)/n^2 across the regression window.
    """

    hhat: float
    n_lo: int
    n_hi: int
    spread: float


def on_curve(curve: CurveQ, pt: PointQ) -> bool:
    """True iff pt is the point at infinity or satisfies the curve equation exactly."""
    if pt.is_infinity:
        return True
    return pt.y * pt.y == pt.x**3 + curve.a * pt.x + curve.b


def _require_on_curve(curve: CurveQ, pt: PointQ) -> None:
    if not on_curve(curve, pt):
        raise ValueError(
            f"{format_point(pt)} is not on y^2 = x^3 + ({curve.a})x + ({curve.b})"
        )


def negate(curve: CurveQ, pt: PointQ) -> PointQ:
    """The inverse -pt = (x, -y); infinity maps to itself."""
    if pt.is_infinity:
        return pt
    return PointQ(pt.x, -pt.y)


def _add_unchecked(curve: CurveQ, p1: PointQ, p2: PointQ) -> PointQ:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    if p1.x == p2.x:
        if p1.y == -p2.y:  # inverse pair; also covers doubling a 2-torsion point
            return INFINITY
        lam = (3 * p1.x * p1.x + curve.a) / (2 * p1.y)
    else:
        lam = (p2.y - p1.y) / (p2.x - p1.x)
    x3 = lam * lam - p1.x - p2.x
    y3 = lam * (p1.x - x3) - p1.y
    return PointQ(x3, y3)


def add(curve: CurveQ, p1: PointQ, p2: PointQ) -> PointQ:
    """Exact group sum of two points by the chord/tangent rule.

    Rejects inputs that do not lie on the curve.
    """
    _require_on_curve(curve, p1)
    _require_on_curve(curve, p2)
    return _add_unchecked(curve, p1, p2)


def scalar_mul(curve: CurveQ, n: int, pt: PointQ) -> PointQ:
    """n*pt by double-and-add; n may be zero or negative."""
    _require_on_curve(curve, pt)
    n = int(n)
    if n < 0:
        pt = negate(curve, pt)
        n = -n
    result = INFINITY
    addend = pt
    while n:
        if n & 1:
            result = _add_unchecked(curve, result, addend)
        n >>= 1
        if n:
            addend = _add_unchecked(curve, addend, addend)
    return result


def lowest_form(pt: PointQ) -> LowestForm:
    """Read off (aP, bP, dP) from a reduced affine point.

    The reduced denominator of x must be a perfect square and the reduced
    denominator of y its cube; for an on-curve point with integer curve
    coefficients this always holds, so a failure signals corrupt input.
    """
    if pt.is_infinity:
        raise ValueError("the point at infinity has no lowest form")
    den_x = pt.x.denominator
    d = gmpy2.isqrt(den_x)
    if d * d != den_x:
        raise ValueError(
            f"denominator of x is not a perfect square (den = {den_x}); "
            "input is corrupt or off-curve"
        )
    if pt.y.denominator != d**3:
        raise ValueError(
            "denominator of y is not the cube of sqrt(den(x)); "
            "input is corrupt or off-curve"
        )
    return LowestForm(pt.x.numerator, pt.y.numerator, d)


def is_torsion(curve: CurveQ, pt: PointQ) -> bool:
    """True iff pt has finite order, i.e. n*pt = O for some 1 <= n <= 12."""
    _require_on_curve(curve, pt)
    if pt.is_infinity:
        return True
    q = pt
    for _ in range(MAZUR_TORSION_BOUND):
        if q.is_infinity:
            return True
        q = _add_unchecked(curve, q, pt)
    return False


def canonical_height(
    curve: CurveQ, p: PointQ, q: Optional[PointQ] = None, n_max: int = 40
) -> HeightEstimate:
    """Estimate the canonical height of p from the growth of log d(n*p + q).

    log d grows like 0.5*h*n^2 with a lower-order error, so the
    least-squares slope of 2*log d against n^2 over the top half-window
    [ceil(n_max/2), n_max] estimates h while discarding the noisiest
    small-n terms.  Terms where n*p + q is the point at infinity are
    skipped.
    """
    if q is None:
        q = INFINITY
    if n_max < 10:
        raise ValueError("n_max must be at least 10")
    _require_on_curve(curve, p)
    _require_on_curve(curve, q)
    if is_torsion(curve, p):
        raise ValueError("p is torsion; the height estimate needs a non-torsion point")

    n_lo = (n_max + 1) // 2
    data = []
    cur = q
    for n in range(1, n_max + 1):
        cur = _add_unchecked(curve, cur, p)
        if n >= n_lo and not cur.is_infinity:
            data.append((n, lowest_form(cur).dP))
    if len(data) < 3:
        raise ValueError("not enough finite terms in the regression window")

    xs = np.array([float(n * n) for n, _ in data])
    ys = np.array([2.0 * _log_big(d) for _, d in data])
    slope = float(np.polyfit(xs, ys, 1)[0])
    if slope <= 0:
        raise ArithmeticError("non-positive height estimate for a non-torsion point")
    per_n = ys / xs
    spread = float((per_n.max() - per_n.min()) / slope)
    return HeightEstimate(hhat=slope, n_lo=n_lo, n_hi=n_max, spread=spread)


# ---------------------------------------------------------------------------
# Literal parsing/formatting: "a,b" for curves, "x,y" or "inf" for points,
# with coordinates as decimal integers or "num/den" of unbounded size.

def parse_curve(text: str) -> CurveQ:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"curve literal must be 'a,b', got {text!r}")
    return CurveQ(_to_mpz(parts[0]), _to_mpz(parts[1]))


def parse_point(text: str) -> PointQ:
    s = text.strip()
    if s.lower() == "inf":
        return INFINITY
    parts = s.split(",")
    if len(parts) != 2:
        raise ValueError(f"point literal must be 'x,y' or 'inf', got {text!r}")
    return PointQ(_to_mpq(parts[0]), _to_mpq(parts[1]))


def format_rational(v: mpq) -> str:
    return str(v)  # "n" or "n/d", denominator positive


def format_curve(curve: CurveQ) -> str:
    return f"{curve.a},{curve.b}"


def format_point(pt: PointQ) -> str:
    if pt.is_infinity:
        return "inf"
    return f"{format_rational(pt.x)},{format_rational(pt.y)}"
