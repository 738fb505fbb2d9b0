import pytest

from gfermat.curve import new_curve
from gfermat.errors import BudgetExceeded, ValidationError
from gfermat.points import census, enumerate_points, weil_holds


def test_census_gf13(c33):
    r = census(c33)
    assert r.count == 9
    assert r.orbit_sizes == {9: 1}
    assert r.fibers_are_orbits and r.stabilizers_cyclic and r.weil and r.passed
    js = r.to_json()
    assert js["q"] == 13 and js["fiber_histogram"] == {"0": 13, "9": 1}


def test_census_extension(c33):
    r = census(c33, q=169)
    assert r.count == 171
    assert r.orbit_sizes == {9: 1, 27: 6}
    assert r.passed


def test_counts_are_sorted_and_unique(c33):
    pts = enumerate_points(c33)
    assert pts == sorted(set(pts), key=lambda P: P.key())


def test_budget(c33):
    with pytest.raises(BudgetExceeded):
        census(c33, budget=10)


def test_bad_q(c33):
    with pytest.raises(ValidationError):
        census(c33, q=49)
    with pytest.raises(ValidationError):
        census(new_curve(3, 3, [4], {"kind": "extension", "p": 13, "degree": 2}), q=13**3)


def test_weil_integer_form():
    assert weil_holds(14, 13, 0)
    assert not weil_holds(30, 13, 1)
    assert weil_holds(9, 13, 10)
