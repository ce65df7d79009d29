"""Reduction modulo primes: curve/point reduction, group and point orders
over prime fields, the index of appearance r_p, and the census of primes
with small index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import gmpy2
import numpy as np
from gmpy2 import mpz

from .curve import CurveQ, LowestForm, PointQ, is_torsion, lowest_form
from .errors import BudgetExceeded
from .sequences import iter_denominators

# Group orders are found by full x-enumeration with a quadratic-residue
# table; O(p) work per prime is the simplest exact method at desk scale.
GROUP_ORDER_BUDGET = 10**7


class BadReduction(ValueError):
    """Reduction mod p is not an elliptic curve (p <= 3 or p | disc)."""


def is_prime(n: int) -> bool:
    return bool(gmpy2.is_prime(mpz(n)))


def primes_up_to(bound: int) -> list:
    """All primes <= bound, ascending."""
    if bound < 2:
        return []
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(bound**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return [int(v) for v in np.nonzero(sieve)[0]]


@dataclass(frozen=True)
class CurveFp:
    """y^2 = x^3 + a*x + b over F_p at a prime of good reduction (p > 3)."""

    p: int
    a: int
    b: int


@dataclass(frozen=True)
class PointFp:
    x: Optional[int]
    y: Optional[int]

    @classmethod
    def infinity(cls) -> "PointFp":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None


def reduce_curve(curve: CurveQ, p: int) -> CurveFp:
    """Residues of (a, b) mod p when the reduction is good.

    Raises BadReduction for p <= 3 (the short-Weierstrass formulas change
    in characteristics 2 and 3) and for p dividing the discriminant.
    """
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p <= 3:
        raise BadReduction(f"p = {p}: characteristic 2/3 is out of scope")
    if curve.disc % p == 0:
        raise BadReduction(f"p = {p} divides the discriminant {curve.disc}")
    return CurveFp(p, int(curve.a % p), int(curve.b % p))


def _on_curve_fp(cf: CurveFp, pt: PointFp) -> bool:
    if pt.is_infinity:
        return True
    return (pt.y * pt.y - (pt.x**3 + cf.a * pt.x + cf.b)) % cf.p == 0


def reduce_point(cf: CurveFp, lf: LowestForm) -> PointFp:
    """Reduce a lowest-form point mod p: infinity iff p | dP."""
    p = cf.p
    d = int(lf.dP % p)
    if d == 0:
        return PointFp.infinity()
    dinv = pow(d, -1, p)
    x = int(lf.aP % p) * dinv * dinv % p
    y = int(lf.bP % p) * dinv * dinv * dinv % p
    pt = PointFp(x, y)
    if not _on_curve_fp(cf, pt):
        raise AssertionError("reduced point is off the reduced curve")
    return pt


def _add_fp(cf: CurveFp, p1: PointFp, p2: PointFp) -> PointFp:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = cf.p
    if p1.x == p2.x:
        if (p1.y + p2.y) % p == 0:
            return PointFp.infinity()
        lam = (3 * p1.x * p1.x + cf.a) * pow(2 * p1.y, -1, p) % p
    else:
        lam = (p2.y - p1.y) * pow(p2.x - p1.x, -1, p) % p
    x3 = (lam * lam - p1.x - p2.x) % p
    y3 = (lam * (p1.x - x3) - p1.y) % p
    return PointFp(x3, y3)


def _scalar_mul_fp(cf: CurveFp, k: int, pt: PointFp) -> PointFp:
    result = PointFp.infinity()
    addend = pt
    while k:
        if k & 1:
            result = _add_fp(cf, result, addend)
        k >>= 1
        if k:
            addend = _add_fp(cf, addend, addend)
    return result


def group_order(cf: CurveFp) -> int:
    """#E(F_p) by enumerating x and counting square roots of x^3 + ax + b.

    Exact and O(p); refuses primes beyond the enumeration budget.  The
    result always satisfies the Hasse bound |#E - p - 1| <= 2*sqrt(p).
    """
    p = cf.p
    if p > GROUP_ORDER_BUDGET:
        raise BudgetExceeded(f"group order enumeration capped at p <= {GROUP_ORDER_BUDGET}")
    x = np.arange(p, dtype=np.int64)
    fx = ((x * x % p) * x + cf.a * x + cf.b) % p
    is_square = np.zeros(p, dtype=bool)
    is_square[(x * x) % p] = True
    order = 1 + int(np.count_nonzero(fx == 0))
    order += 2 * int(np.count_nonzero(is_square[fx] & (fx != 0)))
    if (order - p - 1) ** 2 > 4 * p:
        raise AssertionError("Hasse bound violated")
    return order


def _factorize(n: int) -> dict:
    """Prime factorization by trial division (inputs stay near the budget cap)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def point_order(cf: CurveFp, pt: PointFp) -> int:
    """Least k >= 1 with k*pt = O, by descending through divisors of #E(F_p)."""
    if pt.is_infinity:
        raise ValueError("the point at infinity has order 1; pass an affine point")
    if not _on_curve_fp(cf, pt):
        raise ValueError("point is not on the reduced curve")
    order = group_order(cf)
    for q in _factorize(order):
        while order % q == 0 and _scalar_mul_fp(cf, order // q, pt).is_infinity:
            order //= q
    return order


@dataclass(frozen=True)
class ApIndex:
    """The index of appearance r_p: least n with p | d(nP).

    Exactly one state holds: a known value, "unknown beyond a scan bound",
    or (representable, never produced here) infinite.  method records how
    the value was obtained: "order" (point order in the reduction),
    "scan" (direct sequence scan), or "unknown".
    """

    value: Optional[int] = None
    unknown_beyond: Optional[int] = None
    infinite: bool = False
    method: str = ""

    def __post_init__(self):
        states = sum((self.value is not None, self.unknown_beyond is not None, self.infinite))
        if states != 1:
            raise ValueError("exactly one of value/unknown_beyond/infinite must be set")

    @property
    def known(self) -> bool:
        return self.value is not None


def _appearance_index(curve, p0, lf0, prime, scan_bound, denominators=None) -> ApIndex:
    prime = int(prime)
    good = prime > 3 and curve.disc % prime != 0
    if good and lf0.dP % prime != 0:
        cf = reduce_curve(curve, prime)
        r = point_order(cf, reduce_point(cf, lf0))
        return ApIndex(value=r, method="order")
    if denominators is None:
        pairs = itertools.islice(iter_denominators(curve, p0), scan_bound)
    else:
        pairs = enumerate(denominators[:scan_bound], start=1)
    for n, d in pairs:
        if d is not None and d % prime == 0:
            return ApIndex(value=n, method="scan")
    return ApIndex(unknown_beyond=scan_bound, method="unknown")


def appearance_index(curve: CurveQ, p0: PointQ, prime: int, scan_bound: int = 500) -> ApIndex:
    """r_p for the sequence d(n*p0), n = 1, 2, ...

    At a good prime not dividing d(p0) this is the order of the reduced
    point in E(F_p); otherwise the sequence itself is scanned up to
    scan_bound.  The two methods agree wherever both apply.
    """
    if not is_prime(prime):
        raise ValueError(f"{prime} is not prime")
    if p0.is_infinity or is_torsion(curve, p0):
        raise ValueError("p0 must be a non-torsion point")
    return _appearance_index(curve, p0, lowest_form(p0), prime, scan_bound)


@dataclass(frozen=True)
class CensusResult:
    """Primes p <= prime_bound with r_p <= R.

    rows holds (p, ApIndex) for every prime considered, census members or
    not; primes is the ascending member list.
    """

    r: int
    prime_bound: int
    primes: tuple
    rows: tuple

    @property
    def count(self) -> int:
        return len(self.primes)

    def to_csv(self) -> str:
        lines = ["p,r_p,method"]
        for p, ap in self.rows:
            lines.append(f"{p},{ap.value if ap.known else ''},{ap.method}")
        return "\n".join(lines) + "\n"


def small_index_census(
    curve: CurveQ, p0: PointQ, r: int, prime_bound: int
) -> CensusResult:
    """All primes p <= prime_bound whose index of appearance is at most r.

    Every prime gets an r_p verdict (point order at good primes, sequence
    scan otherwise).  The result is cross-checked against the second
    route: by strong divisibility the census members are exactly the
    primes dividing d(1P) * ... * d(rP), and stripping the members from
    that product must leave no prime <= prime_bound behind.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if p0.is_infinity or is_torsion(curve, p0):
        raise ValueError("p0 must be a non-torsion point")
    lf0 = lowest_form(p0)
    denominators = [
        d for _, d in itertools.islice(iter_denominators(curve, p0), r)
    ]
    product = mpz(1)
    for d in denominators:
        product *= d

    rows = []
    members = []
    for prime in primes_up_to(prime_bound):
        ap = _appearance_index(curve, p0, lf0, prime, r, denominators=denominators)
        rows.append((prime, ap))
        in_census = ap.known and ap.value <= r
        if in_census:
            members.append(prime)
        # cross-check: strong divisibility says r_p <= r  <=>  p | prod d
        divides = product % prime == 0
        if divides != in_census:
            raise AssertionError(
                f"census cross-check failed at p={prime}: "
                f"r_p verdict {ap} vs product divisibility {divides}"
            )
    stripped = product
    for prime in members:
        while stripped % prime == 0:
            stripped //= prime
    if 1 < stripped <= prime_bound or (
        stripped > 1 and any(stripped % prime == 0 for prime in primes_up_to(prime_bound))
    ):
        raise AssertionError("gcd-stripping left a prime <= prime_bound uncensused")
    return CensusResult(int(r), int(prime_bound), tuple(members), tuple(rows))
