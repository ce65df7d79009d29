import pytest
from fractions import Fraction
from gmpy2 import mpq

import elldep as E
from elldep.curve import _add_unchecked


def test_on_curve(curve):
    assert E.on_curve(curve, E.INFINITY)
    assert E.on_curve(curve, E.PointQ.affine(3, 5))
    assert not E.on_curve(curve, E.PointQ.affine(3, 4))


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        E.CurveQ(0, 0)
    with pytest.raises(ValueError):
        E.CurveQ(-3, 2)  # 4*(-27) + 27*4 = 0


def test_add_identity_and_inverse(curve, point_p):
    assert E.add(curve, point_p, E.INFINITY) == point_p
    assert E.add(curve, E.INFINITY, point_p) == point_p
    assert E.add(curve, point_p, E.negate(curve, point_p)) == E.INFINITY


def test_doubling(curve, point_p):
    p2 = E.add(curve, point_p, point_p)
    assert p2 == E.PointQ.affine(Fraction(129, 100), Fraction(-383, 1000))
    assert E.on_curve(curve, p2)


def test_add_rejects_off_curve(curve):
    with pytest.raises(ValueError):
        E.add(curve, E.PointQ.affine(3, 4), E.INFINITY)


def test_negate(curve, point_p):
    assert E.negate(curve, point_p) == E.PointQ.affine(3, -5)
    assert E.negate(curve, E.INFINITY) == E.INFINITY
    p2 = E.scalar_mul(curve, 2, point_p)
    assert E.negate(curve, p2) == E.PointQ.affine(mpq(129, 100), mpq(383, 1000))


def test_scalar_mul(curve, point_p):
    assert E.scalar_mul(curve, 0, point_p) == E.INFINITY
    assert E.scalar_mul(curve, 2, point_p) == E.add(curve, point_p, point_p)
    p3 = E.scalar_mul(curve, 3, point_p)
    assert p3.x == mpq(164323, 29241)
    assert 29241 == 171 * 171
    assert E.scalar_mul(curve, -2, point_p) == E.negate(
        curve, E.scalar_mul(curve, 2, point_p)
    )


def test_group_law_small(curve, point_p):
    multiples = [E.INFINITY]
    for _ in range(16):
        multiples.append(_add_unchecked(curve, multiples[-1], point_p))
    for m in range(9):
        for n in range(9):
            assert _add_unchecked(curve, multiples[m], multiples[n]) == multiples[m + n]


def test_associativity_samples(curve, point_p):
    pts = [E.scalar_mul(curve, k, point_p) for k in range(6)]
    for a in pts[:4]:
        for b in pts[1:5]:
            for c in pts[2:6]:
                left = _add_unchecked(curve, _add_unchecked(curve, a, b), c)
                right = _add_unchecked(curve, a, _add_unchecked(curve, b, c))
                assert left == right


def test_lowest_form(curve, point_p):
    lf = E.lowest_form(point_p)
    assert (lf.aP, lf.bP, lf.dP) == (3, 5, 1)
    lf2 = E.lowest_form(E.scalar_mul(curve, 2, point_p))
    assert (lf2.aP, lf2.bP, lf2.dP) == (129, -383, 10)
    lf3 = E.lowest_form(E.scalar_mul(curve, 3, point_p))
    assert lf3.dP == 171
    # round-trip
    assert lf2.point() == E.scalar_mul(curve, 2, point_p)


def test_lowest_form_errors():
    with pytest.raises(ValueError):
        E.lowest_form(E.INFINITY)
    with pytest.raises(ValueError, match="square"):
        E.lowest_form(E.PointQ.affine(Fraction(1, 2), Fraction(1, 8)))
    with pytest.raises(ValueError, match="cube"):
        E.lowest_form(E.PointQ.affine(Fraction(1, 4), Fraction(1, 9)))


def test_is_torsion(curve, point_p):
    assert E.is_torsion(curve, E.INFINITY)
    c1 = E.CurveQ(0, 1)
    t = E.PointQ.affine(2, 3)
    assert E.is_torsion(c1, t)
    assert E.scalar_mul(c1, 3, t) == E.PointQ.affine(-1, 0)
    assert E.scalar_mul(c1, 6, t) == E.INFINITY
    assert not E.is_torsion(curve, point_p)


def test_canonical_height_consistency(curve, point_p):
    est30 = E.canonical_height(curve, point_p, None, 30)
    est40 = E.canonical_height(curve, point_p, None, 40)
    assert est40.hhat > 0
    assert abs(est40.hhat - est30.hhat) <= est30.spread * est30.hhat


def test_canonical_height_doubling(curve, point_p):
    est = E.canonical_height(curve, point_p, None, 40)
    est2 = E.canonical_height(curve, E.scalar_mul(curve, 2, point_p), None, 40)
    assert 3.6 <= est2.hhat / est.hhat <= 4.4


def test_canonical_height_spread_shrinks(curve, point_p):
    est20 = E.canonical_height(curve, point_p, None, 20)
    est40 = E.canonical_height(curve, point_p, None, 40)
    assert est40.spread < est20.spread


def test_canonical_height_rejects_torsion():
    c1 = E.CurveQ(0, 1)
    with pytest.raises(ValueError, match="torsion"):
        E.canonical_height(c1, E.PointQ.affine(2, 3), None, 20)


def test_parse_format_round_trip(curve, point_p):
    assert E.parse_curve("0,-2") == curve
    assert E.format_curve(curve) == "0,-2"
    assert E.parse_point("3,5") == point_p
    assert E.parse_point("inf") == E.INFINITY
    p2 = E.parse_point("129/100,-383/1000")
    assert p2 == E.scalar_mul(curve, 2, point_p)
    assert E.format_point(p2) == "129/100,-383/1000"
    assert E.format_point(E.INFINITY) == "inf"
    assert E.parse_point(E.format_point(point_p)) == point_p


def test_parse_errors():
    with pytest.raises(ValueError):
        E.parse_curve("0")
    with pytest.raises(ValueError):
        E.parse_point("3,5,7")
