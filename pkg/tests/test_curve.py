import random

import pytest

from gfermat.curve import (
    INF,
    CurveSpec,
    ProjectivePoint,
    all_fixed_points,
    base_map,
    branch_values,
    canonical_degree,
    contains,
    fixed_points,
    genus_kn,
    jacobian_rank_at,
    new_curve,
    random_point,
    riemann_hurwitz_genus,
)
from gfermat.errors import (
    CharacteristicError,
    DegenerateCurveError,
    MissingRootsError,
    NotOnCurveError,
    ValidationError,
)
from gfermat.points import enumerate_points
from oracles import brute_points_prime, genus_riemann_hurwitz


def test_genus_values():
    assert genus_kn(3, 3) == 10
    assert genus_kn(4, 2) == 3
    assert genus_kn(2, 4) == 5
    assert genus_kn(2, 3) == 1


@pytest.mark.parametrize("k", range(2, 7))
@pytest.mark.parametrize("n", range(2, 6))
def test_genus_matches_covering_count(k, n):
    assert genus_kn(k, n) == riemann_hurwitz_genus(k, n) == genus_riemann_hurwitz(k, n)


def test_forms(c33):
    f0, f1 = c33.forms
    assert str(f0) == "x1^3 + x2^3 + x3^3"
    assert str(f1) == "(4)*x1^3 + x2^3 + x4^3"
    assert canonical_degree(c33) == 18


def test_validation():
    F = {"kind": "prime", "p": 13}
    with pytest.raises(ValidationError):
        new_curve(3, 3, [1], F)
    with pytest.raises(ValidationError):
        new_curve(3, 3, [0], F)
    with pytest.raises(ValidationError):
        new_curve(3, 4, [2, 2], F)
    with pytest.raises(ValidationError):
        new_curve(3, 4, [2], F)
    with pytest.raises(CharacteristicError):
        new_curve(3, 3, [2], {"kind": "prime", "p": 3})
    with pytest.raises(ValidationError):
        new_curve(1, 3, [2], F)


def test_degenerate_curve_refused_by_group_routines():
    c = new_curve(2, 3, [3], {"kind": "prime", "p": 13})
    assert c.genus == 1
    with pytest.raises(DegenerateCurveError):
        c.require_hyperbolic()


def test_json_round_trip_and_hash(c33):
    again = CurveSpec.from_json(c33.to_json())
    assert again == c33 and again.hash == c33.hash
    other = new_curve(3, 3, [3], {"kind": "prime", "p": 13})
    assert other.hash != c33.hash


def test_fixed_points_need_extension(c33):
    with pytest.raises(MissingRootsError):
        fixed_points(c33, 3)


def test_fixed_points(c33_rooted):
    c = c33_rooted
    assert c.field.order == 13**3
    pts = all_fixed_points(c)
    assert len(pts) == 36 and len(set(pts)) == 36
    for j in range(1, 5):
        fx = fixed_points(c, j)
        assert len(fx) == 9
        assert all(P[j] == 0 and P.zero_coordinates() == [j] for P in fx)
        assert all(contains(c, P) for P in fx)


def test_fixed_fibers_lie_over_branch_values(c33_rooted):
    c = c33_rooted
    branch = branch_values(c)
    for j in range(1, 5):
        assert {base_map(c, P) for P in fixed_points(c, j)} == {branch[j - 1]}
    assert branch[0] is INF


def test_smooth_at_fixed_points(c33_rooted):
    assert {jacobian_rank_at(c33_rooted, P) for P in all_fixed_points(c33_rooted)} == {2}


def test_smooth_at_random_points(c33_rooted):
    rng = random.Random(5)
    for _ in range(10):
        P = random_point(c33_rooted, rng)
        assert jacobian_rank_at(c33_rooted, P) == 2


def test_rank_off_curve(c33):
    F = c33.field
    with pytest.raises(NotOnCurveError):
        jacobian_rank_at(c33, ProjectivePoint.normalized([F(1), F(1), F(1), F(1)]))


@pytest.mark.parametrize("k,lams,p", [(3, [4], 13), (2, [2, 5], 11), (3, [3], 7), (4, [], 5)])
def test_enumeration_matches_full_scan(k, lams, p):
    c = new_curve(k, len(lams) + 2, lams, {"kind": "prime", "p": p})
    ours = sorted(tuple(x.coeffs[0] for x in P.coords) for P in enumerate_points(c))
    assert ours == sorted(brute_points_prime(k, lams, p))
