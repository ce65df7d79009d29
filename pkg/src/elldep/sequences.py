"""Denominator/numerator sequences of the points n*P + Q.

Generates exact lowest-form terms over index windows, extracts primitive
parts, and counts the divisibility statistics of the terms.  Terms at
index n have Theta(n^2) digits, so nothing here ever factors a term:
primitive parts and smoothness tests use gcd-stripping only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from gmpy2 import gcd, isqrt, mpz

from .curve import (
    INFINITY,
    CurveQ,
    LowestForm,
    PointQ,
    _add_unchecked,
    _require_on_curve,
    format_rational,
    is_torsion,
    lowest_form,
    scalar_mul,
)


@dataclass(frozen=True)
class EdsTerm:
    """One term of the sequence: the lowest form of n*P + Q.

    lf is None when n*P + Q is the point at infinity (possible when Q is
    a multiple of -P); such terms are excluded from all statistics.
    primitive_part is filled only for runs anchored at n = 1 with Q = O.
    """

    n: int
    lf: Optional[LowestForm]
    primitive_part: Optional[mpz] = None

    @property
    def is_infinite(self) -> bool:
        return self.lf is None

    @property
    def is_integral(self) -> bool:
        """d = 1, i.e. n*P + Q is an integral point (only finitely many exist)."""
        return self.lf is not None and self.lf.dP == 1

    @property
    def d(self) -> mpz:
        if self.lf is None:
            raise ValueError(f"term {self.n} is the point at infinity")
        return self.lf.dP

    @property
    def a(self) -> mpz:
        if self.lf is None:
            raise ValueError(f"term {self.n} is the point at infinity")
        return self.lf.aP


@dataclass(frozen=True)
class SequenceWindow:
    """Terms for n in (m, m+n], in index order."""

    curve: CurveQ
    p: PointQ
    q: PointQ
    m: int
    n: int
    terms: tuple

    def term(self, n: int) -> EdsTerm:
        if not self.m < n <= self.m + self.n:
            raise IndexError(f"index {n} outside window ({self.m}, {self.m + self.n}]")
        return self.terms[n - self.m - 1]

    def d(self, n: int) -> mpz:
        return self.term(n).d

    def finite_terms(self) -> Iterator[EdsTerm]:
        return (t for t in self.terms if not t.is_infinite)


def _step_lowest_form(pa, pb, pd, an, bn, dn):
    """One chord addition (an/dn^2, bn/dn^3) + (pa/pd^2, pb/pd^3), in integers.

    Returns the lowest-form triple of the sum, or None when the two
    x-coordinates coincide (the caller falls back to the generic rule for
    the doubling / inverse-pair cases).  Costs one big gcd per step; the
    exactness checks catch any upstream corruption.
    """
    pd2 = pd * pd
    dn2 = dn * dn
    w = an * pd2 - pa * dn2
    if w == 0:
        return None
    pd3 = pd2 * pd
    dn3 = dn2 * dn
    u = bn * pd3 - pb * dn3
    v = dn * pd * w
    v2 = v * v
    w2 = w * w
    x_num = u * u - (an * pd2 + pa * dn2) * w2
    g = gcd(x_num, v2)
    den = v2 // g
    e = isqrt(den)
    if e * e != den:
        raise ArithmeticError(
            "reduced denominator of x is not a perfect square; upstream corruption"
        )
    y_num = u * (pa * dn2 * w2 - x_num) - pb * dn3 * w2 * w
    t = (v2 * v) // (e * e * e)
    if y_num % t != 0:
        raise ArithmeticError(
            "reduced denominator of y is not the cube of d; upstream corruption"
        )
    return x_num // g, y_num // t, e


def _iter_terms(curve: CurveQ, p: PointQ, q: PointQ, m: int):
    """Yield (n, LowestForm-or-None) for n = m+1, m+2, ... without end."""
    lp = lowest_form(p)
    pa, pb, pd = lp.aP, lp.bP, lp.dP
    start = _add_unchecked(curve, scalar_mul(curve, m + 1, p), q)
    cur = None if start.is_infinity else lowest_form(start)
    n = m + 1
    while True:
        yield n, cur
        if cur is None:
            # (n+1)P + Q = P + O = P
            cur = lp
        else:
            stepped = _step_lowest_form(pa, pb, pd, cur.aP, cur.bP, cur.dP)
            if stepped is None:
                # colliding x-coordinates: generic rule decides doubling vs inverse
                nxt = _add_unchecked(curve, p, cur.point())
                cur = None if nxt.is_infinity else lowest_form(nxt)
            else:
                cur = LowestForm(*stepped)
        n += 1


def iter_denominators(curve: CurveQ, p: PointQ, q: Optional[PointQ] = None, m: int = 0):
    """Lazy (n, d) pairs from n = m+1 on; d is None for infinite terms."""
    if q is None:
        q = INFINITY
    for n, lf in _iter_terms(curve, p, q, m):
        yield n, (None if lf is None else lf.dP)


def _strip_shared(x: mpz, earlier: Iterable[mpz]) -> mpz:
    """Divide out of x every prime it shares with any of the earlier values."""
    for e in earlier:
        if e <= 1:
            continue
        g = gcd(x, e)
        while g > 1:
            x //= g
            g = gcd(x, e)
    return x


def generate(
    curve: CurveQ,
    p: PointQ,
    q: Optional[PointQ] = None,
    m: int = 0,
    n: int = 1,
    primitive_parts: bool = False,
) -> SequenceWindow:
    """Exact terms n*P + Q for n in (m, m+n].

    One scalar multiplication reaches the window start; each further term
    costs a single addition.  primitive_parts requires m = 0 and Q = O
    (primitivity is relative to the full history d(1P), ..., d((n-1)P)).
    """
    if q is None:
        q = INFINITY
    if n < 1:
        raise ValueError("window length must be at least 1")
    if m < 0:
        raise ValueError("window start must be non-negative")
    _require_on_curve(curve, p)
    _require_on_curve(curve, q)
    if p.is_infinity or is_torsion(curve, p):
        raise ValueError("P must be a non-torsion point")
    if primitive_parts and (m != 0 or not q.is_infinity):
        raise ValueError("primitive parts are defined only for runs from n=1 with Q=O")

    terms = []
    earlier: list = []
    for idx, lf in itertools.islice(_iter_terms(curve, p, q, m), n):
        pp = None
        if primitive_parts and lf is not None:
            pp = _strip_shared(lf.dP, earlier)
            earlier.append(lf.dP)
        terms.append(EdsTerm(idx, lf, pp))
    return SequenceWindow(curve, p, q, m, n, tuple(terms))


def primitive_part(history: SequenceWindow, n: int) -> mpz:
    """d(nP) with every prime dividing an earlier d(mP), m < n, removed.

    Computed by repeated gcd-divide against each earlier term; the term
    itself is never factored.
    """
    if history.m != 0 or not history.q.is_infinity:
        raise ValueError("history must be a run from n=1 with Q=O")
    if not 1 <= n <= history.n:
        raise ValueError(f"history does not cover index {n}")
    term = history.term(n)
    if term.primitive_part is not None:
        return term.primitive_part
    earlier = [t.d for t in history.terms[: n - 1] if not t.is_infinite]
    return _strip_shared(term.d, earlier)


def zsigmondy_threshold(curve: CurveQ, p: PointQ, n_max: int) -> int:
    """Largest n <= n_max whose term has no primitive prime divisor.

    A term has a primitive prime divisor iff its primitive part exceeds 1.
    The first term counts as having none by convention (its primitive part
    is taken to be 1), so the result is always >= 1.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    window = generate(curve, p, None, 0, n_max, primitive_parts=True)
    threshold = 1
    for term in window.terms[1:]:
        if term.primitive_part == 1:
            threshold = term.n
    return threshold


def _resolve_window(curve, p, q, m, n, window: Optional[SequenceWindow]):
    if window is None:
        return generate(curve, p, q, m, n)
    if (window.curve, window.p, window.q, window.m, window.n) != (curve, p, q, m, n):
        raise ValueError("supplied window does not match the requested parameters")
    return window


@dataclass(frozen=True)
class DivisibilityCount:
    """Indices n in the window with modulus | d(nP+Q)."""

    modulus: int
    hits: tuple

    @property
    def count(self) -> int:
        return len(self.hits)


def count_divisible(
    curve: CurveQ,
    p: PointQ,
    q: Optional[PointQ],
    modulus: int,
    m: int = 0,
    n: int = 1,
    window: Optional[SequenceWindow] = None,
) -> DivisibilityCount:
    """Exact count of n in (m, m+n] with modulus | d(nP+Q)."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if q is None:
        q = INFINITY
    win = _resolve_window(curve, p, q, m, n, window)
    hits = tuple(t.n for t in win.finite_terms() if t.d % modulus == 0)
    return DivisibilityCount(int(modulus), hits)


@dataclass(frozen=True)
class ValuationHits:
    """Indices where the p-adic valuation of x(nP+Q) is nonzero.

    Since gcd(a, d) = 1, a hit is either a numerator hit (p | a) or a
    denominator hit (p | d), never both.
    """

    prime: int
    denominator_hits: tuple
    numerator_hits: tuple

    @property
    def count(self) -> int:
        return len(self.denominator_hits) + len(self.numerator_hits)


def count_valuation_hits(
    curve: CurveQ,
    p: PointQ,
    q: Optional[PointQ],
    prime: int,
    m: int = 0,
    n: int = 1,
    window: Optional[SequenceWindow] = None,
) -> ValuationHits:
    """Indices n with nonzero prime-adic valuation of x(nP+Q), split by side."""
    if q is None:
        q = INFINITY
    win = _resolve_window(curve, p, q, m, n, window)
    den_hits = []
    num_hits = []
    for t in win.finite_terms():
        if t.d % prime == 0:
            den_hits.append(t.n)
        elif t.a % prime == 0:
            num_hits.append(t.n)
    return ValuationHits(int(prime), tuple(den_hits), tuple(num_hits))


@dataclass(frozen=True)
class PowerDivisibilityCount:
    prime: int
    k: int
    hits: tuple

    @property
    def count(self) -> int:
        return len(self.hits)


def count_power_divisible(
    curve: CurveQ,
    p: PointQ,
    q: Optional[PointQ],
    prime: int,
    k: int,
    m: int = 0,
    n: int = 1,
    window: Optional[SequenceWindow] = None,
) -> PowerDivisibilityCount:
    """Exact count of n with prime^k | a(nP+Q); requires curve.b != 0."""
    if curve.b == 0:
        raise ValueError("requires a curve with b != 0")
    if k < 1:
        raise ValueError("k must be at least 1")
    if q is None:
        q = INFINITY
    win = _resolve_window(curve, p, q, m, n, window)
    pk = mpz(prime) ** k
    hits = tuple(t.n for t in win.finite_terms() if t.a % pk == 0)
    return PowerDivisibilityCount(int(prime), int(k), hits)


def _strip_primes(x: mpz, primes: Iterable[int]) -> mpz:
    x = abs(mpz(x))
    for prime in primes:
        while x % prime == 0:
            x //= prime
    return x


@dataclass(frozen=True)
class SUnitTerms:
    """Window indices whose term is built only from primes in S.

    u_set: every prime of d(nP+Q) lies in S.
    v_set: every prime of x(nP+Q) (numerator and denominator) lies in S.
    Indices with x = 0 are excluded from v_set and listed separately.
    b_is_zero flags that the sharper numerator bound hypothesis fails.
    """

    primes: tuple
    u_set: tuple
    v_set: tuple
    zero_x: tuple
    b_is_zero: bool


def s_unit_terms(
    curve: CurveQ,
    p: PointQ,
    q: Optional[PointQ],
    s_primes: Iterable[int],
    m: int = 0,
    n: int = 1,
    window: Optional[SequenceWindow] = None,
) -> SUnitTerms:
    """Indices whose d (u_set) or full x-coordinate (v_set) is an S-unit.

    Decided by stripping the S-primes and testing whether 1 remains; the
    terms are never factored.
    """
    if q is None:
        q = INFINITY
    s_list = sorted({int(v) for v in s_primes})
    win = _resolve_window(curve, p, q, m, n, window)
    u_set, v_set, zero_x = [], [], []
    for t in win.finite_terms():
        d_smooth = _strip_primes(t.d, s_list) == 1
        if d_smooth:
            u_set.append(t.n)
        if t.a == 0:
            zero_x.append(t.n)
            continue
        if d_smooth and _strip_primes(t.a, s_list) == 1:
            v_set.append(t.n)
    return SUnitTerms(
        tuple(s_list), tuple(u_set), tuple(v_set), tuple(zero_x), curve.b == 0
    )


# ---------------------------------------------------------------------------
# On-disk cache of a sequence run.  One file per (curve, P, Q); a header
# line "a b Px Py Qx Qy" followed by rows "n aP bP dP" (decimal, "inf inf
# inf" for terms at infinity).  Rows always cover 1..K contiguously and the
# file is append-only: extending a run never rewrites earlier rows.

def cache_header(curve: CurveQ, p: PointQ, q: PointQ) -> str:
    def coords(pt):
        if pt.is_infinity:
            return "inf inf"
        return f"{format_rational(pt.x)} {format_rational(pt.y)}"

    return f"{curve.a} {curve.b} {coords(p)} {coords(q)}"


def write_cache_rows(fh, terms: Iterable[EdsTerm]) -> None:
    for t in terms:
        if t.is_infinite:
            fh.write(f"{t.n} inf inf inf\n")
        else:
            fh.write(f"{t.n} {t.lf.aP} {t.lf.bP} {t.lf.dP}\n")


def read_cache(path) -> tuple:
    """Return (header_line, rows) where rows[i] is the LowestForm-or-None of n=i+1."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        rows = []
        for line in fh:
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"malformed cache row: {line!r}")
            n = int(parts[0])
            if n != len(rows) + 1:
                raise ValueError(f"cache rows are not contiguous at n={n}")
            if parts[1] == "inf":
                rows.append(None)
            else:
                rows.append(LowestForm(mpz(parts[1]), mpz(parts[2]), mpz(parts[3])))
    return header, rows


def extend_cache(path, curve: CurveQ, p: PointQ, q: PointQ, upto: int) -> list:
    """Ensure the cache at path covers 1..upto; return all rows.

    Creates the file if missing; otherwise verifies the header and appends
    only the missing rows.
    """
    header = cache_header(curve, p, q)
    try:
        existing_header, rows = read_cache(path)
    except FileNotFoundError:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(header + "\n")
        rows = []
    else:
        if existing_header != header:
            raise ValueError(
                f"cache file {path} belongs to a different (curve, P, Q) run"
            )
    if len(rows) < upto:
        window = generate(curve, p, q, m=len(rows), n=upto - len(rows))
        with open(path, "a", encoding="ascii") as fh:
            write_cache_rows(fh, window.terms)
        rows.extend(t.lf for t in window.terms)
    return rows
