#!/usr/bin/env python3
# Exact rational arithmetic on y^2 = x^3 + a*x + b: the group law, the
# lowest-form decomposition (a/d^2, b/d^3), torsion testing, and the
# canonical-height estimate read off the denominator growth.

import elldep as E

curve = E.parse_curve("0,-2")          # y^2 = x^3 - 2
P = E.parse_point("3,5")               # 27 - 2 = 25 = 5^2, so P is on the curve
print("curve:", E.format_curve(curve), " P:", E.format_point(P))
print("on curve?", E.on_curve(curve, P))

# Doubling by the tangent rule stays exact: 2P has denominator 10
P2 = E.add(curve, P, P)
print("2P =", E.format_point(P2))
lf = E.lowest_form(P2)
print("lowest form of 2P: a =", lf.aP, " b =", lf.bP, " d =", lf.dP)

# Scalar multiples via double-and-add; the group law never leaves Q
P3 = E.scalar_mul(curve, 3, P)
print("x(3P) =", P3.x, " (denominator 171^2 =", 171 * 171, ")")
print("5P - 2P == 3P ?", E.add(curve, E.scalar_mul(curve, 5, P),
                               E.negate(curve, P2)) == P3)

# Torsion is decided by scanning the first 12 multiples
T = E.PointQ.affine(2, 3)              # on y^2 = x^3 + 1, this has order 6
print("is (3,5) torsion on our curve?", E.is_torsion(curve, P))
print("is (2,3) torsion on y^2=x^3+1?", E.is_torsion(E.CurveQ(0, 1), T))

# log d(nP) grows like 0.5 * h * n^2; the slope over the top half-window
# estimates the canonical height h.  Doubling the point quadruples it.
est = E.canonical_height(curve, P, n_max=40)
est2 = E.canonical_height(curve, P2, n_max=40)
print(f"height estimate  h(P) ~ {est.hhat:.5f}  (spread {est.spread:.4f}, "
      f"window {est.n_lo}..{est.n_hi})")
print(f"height estimate h(2P) ~ {est2.hhat:.5f}  -> ratio {est2.hhat/est.hhat:.3f} (expect ~4)")
