#!/usr/bin/env python3
# Counting dependent tuples over a box of indices: exact counts by the
# literal definition, the growth-exponent fit against the predicted
# bound, and the shared-prime graph diagnostic on the witnesses.

import elldep as E

curve = E.parse_curve("0,-2")
P = E.parse_point("3,5")
O = E.INFINITY


def pair_box(n, target):
    return E.BoxSpec((curve, curve), (P, P), (O, O), 0, n, target)


# D counts pairs (m, n) with (d_m, d_n) multiplicatively dependent; the
# diagonal alone contributes N pairs, and d_1 = 1 makes every pair
# containing index 1 dependent as well
series_d, series_dstar = [], []
for n in (8, 12, 16, 20):
    res_d = E.count_box(pair_box(n, "D"))
    res_star = E.count_box(pair_box(n, "D*"))
    series_d.append((n, res_d.count))
    series_dstar.append((n, res_star.count))
    print(f"N={n:3d}: D={res_d.count:3d} (without unit terms {res_d.count_without_units}) "
          f"D*={res_star.count:3d}")

# Fit log count against log N and compare with the predicted exponents
rep_d = E.exponent_fit(series_d, E.theoretical_exponent("D", 2))
rep_star = E.exponent_fit(series_dstar, E.theoretical_exponent("D*", 2))
print(f"\nD : fitted alpha {rep_d.alpha:.3f} vs predicted {rep_d.theoretical:.3f}")
print(f"D*: fitted alpha {rep_star.alpha:.3f} vs predicted {rep_star.theoretical:.3f}")
print("CSV report:\n" + rep_star.to_csv())

# A maximal-rank dependent pair shares its whole prime support, so in the
# graph that joins values whose gcd keeps a prime outside the small-index
# census, no witness vertex with a surviving large prime is isolated
census = set(E.small_index_census(curve, P, 3, 1000).primes)
window = E.generate(curve, P, None, 0, 20)
sample = [ns for ns, _ in E.count_box(pair_box(20, "D*")).witnesses][:3]
for ns in sample:
    values = [window.d(k) for k in ns]
    g = E.gcd_graph(values, census)
    print(f"witness {ns}: edges {sorted(g.edges)}")

# The half cover behind the counting argument: any graph without isolated
# vertices has a dominating set using at most half its vertices
g = E.Graph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
print("\nhalf cover of the path 0-1-2-3:", sorted(E.half_cover(g).v1))
