import itertools
import random

import pytest

from gfermat import linalg
from gfermat.aut import (
    MoebiusMap,
    MonomialAut,
    conjugate_generator,
    full_linear_group,
    h0_elements,
    h0_generators,
    in_h0,
    induced_moebius,
    is_linear_automorphism,
    lift_moebius,
    moebius_stabilizer,
    monomial_search,
    normality_check,
    qform_check,
)
from gfermat.curve import INF, all_fixed_points, branch_values, new_curve, random_point
from gfermat.errors import DegenerateCurveError, MissingRootsError, UnsupportedFieldError, ValidationError


def _closure(gens):
    seen = {g for g in gens}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a.compose(g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def test_h0_structure(c33_rooted):
    c = c33_rooted
    gens = h0_generators(c)
    assert len(gens) == 4
    prod = gens[0]
    for g in gens[1:]:
        prod = prod.compose(g)
    assert prod.is_identity()
    group = _closure(gens)
    assert len(group) == 27 == len(set(h0_elements(c)))
    assert group == set(h0_elements(c))


def test_generators_fix_each_form(c33_rooted):
    c = c33_rooted
    ident = tuple(tuple(c.field.one if i == j else c.field.zero for j in range(2)) for i in range(2))
    for phi in h0_generators(c):
        assert is_linear_automorphism(c, phi.matrix()) == ident


def test_generators_fix_their_fixed_points(c33_rooted):
    c = c33_rooted
    gens = h0_generators(c)
    for P in all_fixed_points(c):
        j = P.zero_coordinates()[0]
        assert gens[j - 1](P) == P
        assert all(gens[i](P) != P for i in range(4) if i != j - 1)


def test_moebius_basics(c33_rooted):
    F = c33_rooted.field
    T = MoebiusMap.from_images(F(4), F(0), INF, F)
    assert T(INF) == 4 and T(F(0)) == 0 and T(F(1)) is INF
    assert T.compose(T.inverse()).is_identity()


def test_stabilizer_is_a_group(c33):
    g0 = moebius_stabilizer(branch_values(c33))
    assert len(g0) == 12
    s = set(g0)
    assert all(a.compose(b) in s for a in g0 for b in g0)


def test_stabilizer_orders():
    F = {"kind": "prime", "p": 13}
    assert len(moebius_stabilizer(branch_values(new_curve(3, 3, [3], F)))) == 4
    assert len(moebius_stabilizer(branch_values(new_curve(3, 3, [12], F)))) == 8
    Q = {"kind": "rationals"}
    assert len(moebius_stabilizer(branch_values(new_curve(2, 4, [2, 5], Q)))) == 1
    assert len(moebius_stabilizer(branch_values(new_curve(2, 4, [2, 3], Q)))) == 2


def test_lifts_cover_the_moebius_map(aut33):
    c = aut33.curve
    T = aut33.g0[3]
    lifts = lift_moebius(c, T)
    assert len(lifts) == 27
    for A in lifts:
        assert induced_moebius(c, A) == T
        assert A.certificate is not None
    base = lifts[0]
    assert all(in_h0(c, A.compose(base.inverse())) for A in lifts)


def test_lifts_commute_with_projection(aut33):
    from gfermat.curve import base_map

    c = aut33.curve
    rng = random.Random(11)
    pts = [random_point(c, rng) for _ in range(5)]
    for T, A in zip(aut33.g0, aut33.lifts):
        for P in pts:
            assert base_map(c, A(P)) == T(base_map(c, P))


def test_lift_needs_roots(c33):
    missing = []
    for T in moebius_stabilizer(branch_values(c33)):
        try:
            lift_moebius(c33, T)
        except MissingRootsError as exc:
            missing.append(exc.required)
    # some lifts need cube roots that GF(13) does not have
    assert missing and all(req for req in missing)


def test_golden_group(aut33):
    assert aut33.g0_order == 12
    assert aut33.L_order == 324
    assert aut33.closure_ok and aut33.h0_normal
    assert not aut33.qform_applicable
    js = aut33.to_json()
    assert js["schema"] == "gfermat/1" and js["L_order"] == 324


def test_g0_permutations_form_alternating_group(aut33):
    perms = {tuple(p) for p in aut33.g0_permutations}
    assert len(perms) == 12
    def sign(p):
        s = 1
        for i, j in itertools.combinations(range(len(p)), 2):
            if p[i] > p[j]:
                s = -s
        return s
    assert all(sign(p) == 1 for p in perms)


def test_conjugation_permutes_generators(aut33):
    c = aut33.curve
    for A in aut33.lifts:
        images = [conjugate_generator(c, A, j) for j in range(1, 5)]
        assert all(im is not None for im in images)
        assert sorted(im[0] for im in images) == [1, 2, 3, 4]
        assert normality_check(aut33)


def test_blind_search_matches(aut33):
    found = monomial_search(aut33.curve)
    assert len(found) == aut33.L_order
    assert set(found) == {A.compose(h) for A in aut33.lifts for h in h0_elements(aut33.curve)}


def test_non_automorphism_rejected(c33_rooted):
    c = c33_rooted
    F = c.field
    A = [[F(1 if i == j else 0) for j in range(4)] for i in range(4)]
    A[0][1] = F(1)
    assert is_linear_automorphism(c, A) is None
    B = MonomialAut.normalized((1, 0, 2, 3), [F(1)] * 4)
    assert is_linear_automorphism(c, B.matrix()) is None


def test_singular_matrix_raises(c33_rooted):
    F = c33_rooted.field
    with pytest.raises(ValidationError):
        is_linear_automorphism(c33_rooted, [[F(0)] * 4 for _ in range(4)])


def test_degenerate_refused():
    with pytest.raises(DegenerateCurveError):
        full_linear_group(new_curve(2, 3, [3], {"kind": "prime", "p": 13}))


def test_characteristic_zero_generic():
    rep = full_linear_group(new_curve(2, 4, [2, 5], {"kind": "rationals"}))
    assert rep.L_order == 16 and rep.h0_normal


def test_characteristic_zero_missing_roots():
    with pytest.raises(MissingRootsError):
        full_linear_group(new_curve(3, 3, [-1], {"kind": "cyclotomic", "k": 3}))


def test_qform_requires_power_of_p(c33_rooted):
    with pytest.raises(UnsupportedFieldError):
        qform_check(c33_rooted, linalg.identity(c33_rooted.field, 4))


def test_qform_agrees_with_expansion(c33_char2):
    rep = full_linear_group(c33_char2)
    c = rep.curve
    assert rep.qform_applicable
    for A in rep.lifts:
        assert qform_check(c, A.matrix()).passed
    rng = random.Random(2)
    for _ in range(50):
        A = [[c.field.random_element(rng) for _ in range(4)] for _ in range(4)]
        if linalg.is_invertible(A):
            cert = qform_check(c, A)
            assert cert.passed == (is_linear_automorphism(c, A) is not None)
            if not cert.passed:
                assert cert.first_violation is not None


def test_qform_k2_symmetrized():
    c = new_curve(2, 4, [2, 3], {"kind": "prime", "p": 7})
    rep = full_linear_group(c)
    for A in rep.lifts:
        assert qform_check(rep.curve, A.matrix()).passed
