"""Independent oracles used by the tests.

Everything here deliberately avoids the library's exponent-matrix /
kernel machinery so that agreement between the two routes means
something.
"""

import itertools

import numpy as np
from gmpy2 import iroot, mpz


def is_power_of(v, c) -> bool:
    """Whether v = c^a for some a >= 1 (exact, by repeated division)."""
    v, c = mpz(v), mpz(c)
    if c < 2 or v < c:
        return False
    while v % c == 0:
        v //= c
    return v == 1


def pair_md_literal(u, v) -> bool:
    """Multiplicative dependence of two positive integers, from first principles.

    u, v > 1 are dependent iff both are powers of a common integer w > 1;
    w must be an exact root of u, so trying every root exponent of u is
    exhaustive.  A value 1 is dependent on its own (1^1 = 1).
    """
    u, v = mpz(u), mpz(v)
    assert u > 0 and v > 0
    if u == 1 or v == 1:
        return True
    for b in range(1, u.bit_length() + 1):
        c, exact = iroot(u, b)
        if exact and c > 1 and is_power_of(v, c):
            return True
    return False


def pair_md_maximal_rank_literal(u, v) -> bool:
    # positive singletons are dependent only at value 1
    return u > 1 and v > 1 and pair_md_literal(u, v)


def brute_force_relation(values, kmax=6):
    """Exhaustive scan of exponent vectors with |k_i| <= kmax for a relation.

    A float log screen narrows the grid (any true relation has log-sum
    exactly 0, so it passes the 1e-9 gate with room to spare); every
    candidate is then verified with exact integer arithmetic, and only an
    exact product of 1 is returned.
    """
    s = len(values)
    logs = np.array([float(np.log(float(abs(v)))) for v in values])
    grid = np.array(
        list(itertools.product(range(-kmax, kmax + 1), repeat=s)), dtype=np.int64
    )
    nonzero = np.any(grid != 0, axis=1)
    candidates = grid[nonzero & (np.abs(grid @ logs) < 1e-9)]
    pows = [[abs(mpz(v)) ** e for e in range(kmax + 1)] for v in values]
    negs = [v < 0 for v in values]
    for k in candidates:
        num = mpz(1)
        den = mpz(1)
        sign = 0
        for i, ki in enumerate(k):
            ki = int(ki)
            if ki > 0:
                num *= pows[i][ki]
            elif ki < 0:
                den *= pows[i][-ki]
            if negs[i] and ki % 2:
                sign ^= 1
        if sign == 0 and num == den:
            return tuple(int(v) for v in k)
    return None
