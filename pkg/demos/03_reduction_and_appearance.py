#!/usr/bin/env python3
# Reduction mod p and the index of appearance r_p: the least n with
# p | d(nP).  At a good prime not dividing d(P) this equals the order of
# P in E(F_p) -- computed from the group order -- and a direct scan of
# the sequence must agree.

import elldep as E
from elldep.modp import primes_up_to

curve = E.parse_curve("0,-2")           # disc = -1728 = -2^6 * 3^3
P = E.parse_point("3,5")

cf = E.reduce_curve(curve, 5)
print("curve mod 5:", cf, " #E(F_5) =", E.group_order(cf))
pt = E.reduce_point(cf, E.lowest_form(P))
print("P mod 5 =", (pt.x, pt.y), " order =", E.point_order(cf, pt))

try:
    E.reduce_curve(curve, 2)
except E.BadReduction as exc:
    print("p = 2:", exc)

# r_p two ways: point order at good primes, sequence scan at bad ones
print("\n  p  r_p  method")
for p in primes_up_to(40):
    ap = E.appearance_index(curve, P, p, scan_bound=200)
    print(f"{p:4d}  {str(ap.value) if ap.known else '>200':>4}  {ap.method}")

# The census of primes with small index: r_p <= R happens exactly for the
# primes dividing d_1 * ... * d_R (strong divisibility), and the census
# cross-checks itself against that product
census = E.small_index_census(curve, P, 3, 1000)
print("\nprimes <= 1000 with r_p <= 3:", census.primes)
print("\ncensus CSV (first rows):")
print("\n".join(census.to_csv().splitlines()[:6]))
