import pytest

import elldep as E

# Workhorse configuration used throughout: y^2 = x^3 - 2 with the
# non-torsion point (3, 5).  d(1P), d(2P), d(3P) = 1, 10, 171.
TEST_CURVE = E.CurveQ(0, -2)
TEST_P = E.PointQ.affine(3, 5)


@pytest.fixture(scope="session")
def curve():
    return TEST_CURVE


@pytest.fixture(scope="session")
def point_p():
    return TEST_P


@pytest.fixture(scope="session")
def window60(curve, point_p):
    return E.generate(curve, point_p, None, 0, 60, primitive_parts=True)


@pytest.fixture(scope="session")
def window500(curve, point_p):
    # ~20s to build; shared by the appearance-index and residue-class tests
    return E.generate(curve, point_p, None, 0, 500)
