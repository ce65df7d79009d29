#!/usr/bin/env python3
# The denominator sequence d(nP+Q): exact generation over windows,
# strong divisibility, primitive parts by gcd-stripping, and the
# empirical Zsigmondy threshold.

from gmpy2 import gcd

import elldep as E

curve = E.parse_curve("0,-2")
P = E.parse_point("3,5")

window = E.generate(curve, P, None, 0, 12, primitive_parts=True)
print("n, digits(d), d or leading digits, primitive part")
for t in window.terms:
    d_str = str(t.d)
    shown = d_str if len(d_str) <= 24 else d_str[:21] + "..."
    print(f"{t.n:3d}  {len(d_str):4d}  {shown:<26} {t.primitive_part}")

# Strong divisibility at Q = O: m | n forces d(mP) | d(nP), and gcds of
# terms are themselves terms: gcd(d_m, d_n) = d_gcd(m,n)
d = {t.n: t.d for t in window.terms}
print("\nd_3 | d_9 ?", d[9] % d[3] == 0)
print("gcd(d_8, d_12) == d_4 ?", gcd(d[8], d[12]) == d[4])

# A window with an offset Q: terms where nP + Q is the point at infinity
# are marked and skipped by every statistic
Q = E.scalar_mul(curve, -3, P)
shifted = E.generate(curve, P, Q, 0, 6)
print("\nwith Q = -3P the term at n = 3 is at infinity:",
      [t.n for t in shifted.terms if t.is_infinite])

# Primitive part: d_n with every prime seen in an earlier term stripped.
# d_4 = 7660 = 2^2 * 5 * 383 and 2, 5 already divide d_2 = 10, so the
# primitive part of d_4 is 383.
print("\nprimitive part of d_4:", E.primitive_part(window, 4))

# From some index on, every term keeps a fresh prime; the last failure is
# the empirical Zsigmondy threshold (index 1 counts as a failure by
# convention, d_1 = 1 here anyway)
print("threshold up to n=50:", E.zsigmondy_threshold(curve, P, 50))

# Divisibility statistics: 5 | d_n exactly on the multiples of r_5 = 2
hits = E.count_divisible(curve, P, None, 5, 0, 12)
print("indices with 5 | d:", hits.hits)
smooth = E.s_unit_terms(curve, P, None, {2, 5}, 0, 12)
print("indices whose d is a {2,5}-unit:", smooth.u_set)
