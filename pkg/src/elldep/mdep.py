"""Multiplicative dependence of tuples of nonzero rationals.

Values are represented exactly over a pairwise-coprime integer basis
(factor refinement by gcd splitting -- no factorization), dependence is a
kernel computation on the exponent matrix, and every verdict carries a
witness relation that is replayed to exactly 1 before being returned.
Division-semigroup membership reuses the same machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from gmpy2 import gcd, mpq, mpz

from .curve import _to_mpq
from .sequences import zsigmondy_threshold

# Trial division by small primes before gcd refinement keeps basis
# elements close to prime and the exponent matrix small.
_TRIAL_DIVISION_LIMIT = 10_000


@lru_cache(maxsize=1)
def _small_primes() -> tuple:
    sieve = bytearray([1]) * (_TRIAL_DIVISION_LIMIT + 1)
    sieve[0] = sieve[1] = 0
    for k in range(2, int(_TRIAL_DIVISION_LIMIT**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = bytes(len(sieve[k * k :: k]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@dataclass(frozen=True)
class CoprimeBasis:
    """Pairwise-coprime integers >= 2, ascending."""

    elements: tuple

    def __post_init__(self):
        for e in self.elements:
            if e < 2:
                raise ValueError("basis elements must be >= 2")
        for a, b in itertools.combinations(self.elements, 2):
            if gcd(a, b) != 1:
                raise ValueError(f"basis elements {a}, {b} are not coprime")


@dataclass(frozen=True)
class ExponentMatrix:
    """Exact multiplicative representation of the inputs over a coprime basis.

    exponents has one row per basis element and one column per input;
    signs is the extra 0/1 row.  Column j replays to input j exactly:
    (-1)^signs[j] * prod(basis[i] ** exponents[i][j]).
    """

    basis: CoprimeBasis
    exponents: tuple  # tuple of rows, each a tuple of ints
    signs: tuple

    @property
    def n_columns(self) -> int:
        return len(self.signs)

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.exponents)

    def replay(self, j: int) -> mpq:
        value = mpq(-1) if self.signs[j] else mpq(1)
        for base, row in zip(self.basis.elements, self.exponents):
            if row[j]:
                value *= mpq(base) ** row[j]
        return value


@dataclass(frozen=True)
class MdVerdict:
    """Dependence decision with a replay-verified witness relation."""

    dependent: bool
    relation: Optional[tuple]
    maximal_rank: bool


def _refine(pool: Iterable[mpz]) -> list:
    """Pairwise-coprime integers >= 2 covering every prime of the pool.

    Worklist gcd splitting: any overlapping pair (v, b) is replaced by
    (g, b/g, v/g), which strictly shrinks the product, so this terminates
    with a pairwise-coprime basis.
    """
    work = sorted((mpz(v) for v in pool if v > 1), reverse=True)
    basis: list = []
    while work:
        v = work.pop()
        if v == 1:
            continue
        placed = True
        for i, b in enumerate(basis):
            g = gcd(v, b)
            if g > 1:
                basis.pop(i)
                work.extend((g, b // g, v // g))
                placed = False
                break
        if placed:
            basis.append(v)
    return sorted(basis)


def _exponent_of(value: mpz, base: mpz) -> int:
    e = 0
    while value % base == 0:
        value //= base
        e += 1
    return e


def _refine_with_exponents(values: Sequence[mpz]):
    """Basis plus per-value exponent columns for |values|; replay-checked."""
    pool = []
    for v in values:
        av = abs(v)
        for prime in _small_primes():
            if prime * prime > av:
                break
            if av % prime == 0:
                pool.append(mpz(prime))
                while av % prime == 0:
                    av //= prime
        if av > 1:
            pool.append(av)
    basis = _refine(pool)
    columns = []
    for v in values:
        av = abs(v)
        col = []
        for base in basis:
            e = _exponent_of(av, base)
            col.append(e)
            av //= base**e
        if av != 1:
            raise AssertionError(f"basis does not cover {v}; refinement is broken")
        columns.append(tuple(col))
    return basis, columns


def factor_refine(values: Sequence[int]):
    """Coprime basis and exact exponent matrix for a list of nonzero integers.

    Small primes are split off by trial division first; the rest of the
    basis comes from pairwise gcd refinement, so no value is ever factored.
    """
    vals = [mpz(v) for v in values]
    if any(v == 0 for v in vals):
        raise ValueError("values must be nonzero")
    basis, columns = _refine_with_exponents(vals)
    rows = tuple(
        tuple(columns[j][i] for j in range(len(vals))) for i in range(len(basis))
    )
    signs = tuple(1 if v < 0 else 0 for v in vals)
    matrix = ExponentMatrix(CoprimeBasis(tuple(basis)), rows, signs)
    for j, v in enumerate(vals):
        if matrix.replay(j) != v:
            raise AssertionError("exponent matrix does not replay its input")
    return matrix.basis, matrix


def exponent_vectors(values: Sequence):
    """Coprime basis and exponent matrix for a list of nonzero rationals.

    The basis refines the multiset of all numerators and denominators; a
    rational's column is its numerator exponents minus its denominator
    exponents.
    """
    vals = [_to_mpq(v) for v in values]
    if any(v == 0 for v in vals):
        raise ValueError("values must be nonzero")
    nums = [mpz(v.numerator) for v in vals]
    dens = [mpz(v.denominator) for v in vals]
    basis, columns = _refine_with_exponents(nums + dens)
    k = len(vals)
    rows = tuple(
        tuple(columns[j][i] - columns[k + j][i] for j in range(k))
        for i in range(len(basis))
    )
    signs = tuple(1 if v < 0 else 0 for v in vals)
    matrix = ExponentMatrix(CoprimeBasis(tuple(basis)), rows, signs)
    for j, v in enumerate(vals):
        if matrix.replay(j) != v:
            raise AssertionError("exponent matrix does not replay its input")
    return matrix.basis, matrix


# ---------------------------------------------------------------------------
# Exact linear algebra over Q (row reduction on mpq entries).

def _rref(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    mat = [[mpq(v) for v in row] for row in rows]
    ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def _primitive_integer_vector(vec):
    """Scale a rational vector to integers with gcd 1 and positive leading entry."""
    denom = mpz(1)
    for v in vec:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [mpz(v * denom) for v in vec]
    g = mpz(0)
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), None)
    if lead is not None and lead < 0:
        ints = [-v for v in ints]
    return tuple(int(v) for v in ints)


def integer_kernel(matrix: ExponentMatrix) -> list:
    """Primitive integer basis of the kernel of the exponent rows (sign row ignored).

    Empty iff the columns are linearly independent.  Deterministic: one
    vector per free column, in ascending column order.
    """
    rows = matrix.exponents
    ncols = matrix.n_columns
    if not rows:
        # no constraints at all: every unit vector is in the kernel
        return [
            tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)
        ]
    rref, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [mpq(0)] * ncols
        vec[f] = mpq(1)
        for row_idx, c in enumerate(pivots):
            vec[c] = -rref[row_idx][f]
        basis.append(_primitive_integer_vector(vec))
    return basis


def _solvable(columns, target) -> bool:
    """Whether target is a rational linear combination of the columns."""
    nrows = len(target)
    augmented = [
        [mpq(col[i]) for col in columns] + [mpq(target[i])] for i in range(nrows)
    ]
    if not augmented:
        return True
    _, pivots = _rref(augmented)
    return len(columns) not in pivots


def _replay_relation(values, relation) -> mpq:
    out = mpq(1)
    for v, k in zip(values, relation):
        if k:
            out *= _to_mpq(v) ** int(k)
    return out


def is_md(values: Sequence) -> MdVerdict:
    """Decide multiplicative dependence of nonzero rationals.

    Dependent iff the exponent matrix has a nontrivial kernel; the sign
    row only affects which kernel combination serves as the witness
    (doubling a relation always clears a sign obstruction, since squares
    are positive).  The returned relation replays to exactly 1.
    """
    vals = [_to_mpq(v) for v in values]
    if not vals:
        raise ValueError("need at least one value")
    if any(v == 0 for v in vals):
        raise ValueError("multiplicative dependence is defined for nonzero values")
    _, matrix = exponent_vectors(vals)
    kernel = integer_kernel(matrix)
    if not kernel:
        return MdVerdict(dependent=False, relation=None, maximal_rank=False)

    parities = [
        sum(s * k for s, k in zip(matrix.signs, vec)) % 2 for vec in kernel
    ]
    relation = None
    # prefer witnesses using few kernel vectors: subsets by size, then lex
    for size in range(1, len(kernel) + 1):
        for combo in itertools.combinations(range(len(kernel)), size):
            if sum(parities[i] for i in combo) % 2 == 0:
                relation = tuple(
                    sum(kernel[i][j] for i in combo) for j in range(len(vals))
                )
                break
        if relation is not None:
            break
    if relation is None:
        # every kernel vector hits the sign row oddly and there is only one:
        # its double is sign-clean
        relation = tuple(2 * k for k in kernel[0])
    if not any(relation):
        raise AssertionError("witness relation is identically zero")
    if _replay_relation(vals, relation) != 1:
        raise AssertionError("witness relation does not replay to 1")
    return MdVerdict(dependent=True, relation=relation, maximal_rank=False)


def is_md_maximal_rank(values: Sequence) -> MdVerdict:
    """Dependence with the maximal-rank flag: no proper sub-tuple is dependent.

    Checking the (s-1)-sub-tuples suffices, because a dependent sub-tuple
    stays dependent inside any super-tuple (pad its relation with zeros).
    """
    vals = [_to_mpq(v) for v in values]
    full = is_md(vals)
    if not full.dependent:
        return full
    maximal = True
    for drop in range(len(vals)):
        sub = vals[:drop] + vals[drop + 1 :]
        if sub and is_md(sub).dependent:
            maximal = False
            break
    if maximal and not all(full.relation):
        raise AssertionError("maximal rank forces an all-nonzero witness")
    return MdVerdict(dependent=True, relation=full.relation, maximal_rank=maximal)


def verdict_json_dict(values: Sequence, verdict: MdVerdict) -> dict:
    """JSON-ready record with decimal strings for the (possibly huge) values."""
    return {
        "values": [str(_to_mpq(v)) for v in values],
        "dependent": verdict.dependent,
        "relation": list(verdict.relation) if verdict.relation else None,
        "maximal_rank": verdict.maximal_rank,
    }


def semigroup_membership(z: int, generators: Sequence[int]) -> bool:
    """Whether z^m = g_1^{k_1} * ... * g_r^{k_r} for some m >= 1, k_i in Z.

    Equivalent to: the exponent vector of |z| over the common coprime
    basis lies in the Q-span of the generators' vectors.  Any rational
    solution clears its denominators into a valid m, and doubling m makes
    both sides positive, so sign never obstructs membership.
    """
    z = mpz(z)
    gens = [mpz(g) for g in generators]
    if z == 0 or any(g == 0 for g in gens):
        raise ValueError("z and the generators must be nonzero")
    _, matrix = factor_refine([z] + gens)
    target = matrix.column(0)
    columns = [matrix.column(j) for j in range(1, len(gens) + 1)]
    return _solvable(columns, target)


@dataclass(frozen=True)
class SemigroupReport:
    """Division-semigroup hits of a denominator run, with the index bound.

    bound = threshold + rank: beyond the last index with no primitive
    prime divisor, each extra hit must spend one dimension of the
    generator span, so at most `rank` more can occur.
    """

    count: int
    hits: tuple
    threshold: int
    rank: int

    @property
    def bound(self) -> int:
        return self.threshold + self.rank

    @property
    def within_bound(self) -> bool:
        return self.count <= self.bound


def zsigmondy_semigroup_count(window, generators: Sequence[int]) -> SemigroupReport:
    """Count indices n in the window whose d(nP) lies in the division semigroup.

    The window must be a run with Q = O.  Reported alongside the bound
    threshold + rank, where threshold comes from the primitive-part scan
    of the run's full history.
    """
    if not window.q.is_infinity:
        raise ValueError("semigroup counting is defined for runs with Q = O")
    gens = [mpz(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    hits = tuple(
        t.n for t in window.finite_terms() if semigroup_membership(t.d, gens)
    )
    threshold = zsigmondy_threshold(window.curve, window.p, window.m + window.n)
    return SemigroupReport(len(hits), hits, threshold, len(gens))
