#!/usr/bin/env python3
# Deciding multiplicative dependence without factoring: represent the
# values over a pairwise-coprime basis (gcd refinement), compute the
# integer kernel of the exponent matrix, and replay the witness exactly.

from fractions import Fraction

import elldep as E

# Factor refinement: {12, 18} splits over the basis {2, 3}
basis, matrix = E.factor_refine([12, 18])
print("basis:", [int(b) for b in basis.elements])
print("exponent rows:", matrix.exponents, " signs:", matrix.signs)

# Rationals work the same way; columns are numerator minus denominator
basis, matrix = E.exponent_vectors([Fraction(1, 2), 4])
print("\n(1/2, 4) over basis", [int(b) for b in basis.elements], "->", matrix.exponents)
print("kernel:", E.integer_kernel(matrix))

# Dependence verdicts carry replay-verified relations
for values in ([4, 8], [2, 3], [2, 3, 6], [-1], [Fraction(9, 4), Fraction(-3, 2)]):
    v = E.is_md(values)
    print(f"is_md{tuple(values)}: dependent={v.dependent} relation={v.relation}")

# Maximal rank: dependent, but no proper sub-tuple is
print("\n(2,3,6) maximal rank?", E.is_md_maximal_rank([2, 3, 6]).maximal_rank)
print("(4,8,5) maximal rank?", E.is_md_maximal_rank([4, 8, 5]).maximal_rank,
      " (the pair (4,8) is already dependent)")

# Division-semigroup membership: z with z^m = product of generator powers
print("\n6 in <4, 9>?", E.semigroup_membership(6, [4, 9]), " (6^2 = 4*9)")
print("8 in <4>?", E.semigroup_membership(8, [4]), " (8^2 = 4^3)")
print("2 in <9>?", E.semigroup_membership(2, [9]))

# On a denominator run the semigroup hits are capped by threshold + rank:
# each hit beyond the Zsigmondy threshold spends a dimension of the span
curve = E.parse_curve("0,-2")
P = E.parse_point("3,5")
window = E.generate(curve, P, None, 0, 40)
report = E.zsigmondy_semigroup_count(window, [10, 171])   # generators d_2, d_3
print(f"\nhits of <d_2, d_3> in d_1..d_40: {report.hits} "
      f"(count {report.count} <= threshold {report.threshold} + rank {report.rank})")
