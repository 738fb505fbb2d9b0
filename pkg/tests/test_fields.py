import random
from fractions import Fraction

import pytest

from gfermat.errors import (
    FieldMismatchError,
    MissingRootsError,
    ReducibleModulusError,
    UnsupportedFieldError,
    ValidationError,
)
from gfermat.fields import (
    embed,
    extend_for_roots,
    finite_field,
    has_kth_root,
    kth_roots,
    make_field,
    poly_roots,
    primitive_kth_root,
    smallest_irreducible,
)
from oracles import cubes_mod

GF13 = finite_field(13)


def test_prime_field_arithmetic():
    assert GF13(7) * GF13(2) == 1
    assert GF13(1) / GF13(9) == 3
    assert GF13(-1) == 12
    assert GF13(5) ** 12 == 1


def test_cube_roots_match_scan():
    cubes = [x for x in range(13) if kth_roots(GF13(x), 3)]
    assert cubes == cubes_mod(13) == [0, 1, 5, 8, 12]
    assert kth_roots(GF13(5), 3) == [7, 8, 11]
    assert kth_roots(GF13(2), 3) == []
    assert not has_kth_root(GF13(2), 3)


def test_primitive_root_is_smallest_of_exact_order():
    assert primitive_kth_root(GF13, 3) == 3
    assert primitive_kth_root(finite_field(7), 3) == 2
    with pytest.raises(MissingRootsError):
        primitive_kth_root(finite_field(11), 3)


def test_default_moduli_are_lexicographically_first():
    assert smallest_irreducible(13, 3) == (1, 0, 4, 1)
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(2, 6) == (1, 0, 0, 0, 0, 1, 1)
    assert smallest_irreducible(11, 2) == (1, 0, 1)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (13, 3), (2, 6)])
def test_extension_field_axioms(p, m):
    F = finite_field(p, m)
    rng = random.Random(p * 100 + m)
    for _ in range(50):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
        if a:
            assert a * a.inverse() == 1
            assert a ** (F.order - 1) == 1


def test_every_element_enumerated_once():
    F = finite_field(3, 2)
    elems = list(F.elements())
    assert len(set(elems)) == 9
    assert elems == sorted(elems, key=lambda x: x.key())


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulusError):
        make_field({"kind": "extension", "p": 13, "modulus": [1, 0, 1]})  # x^2+1, 13 = 1 mod 4


def test_bad_descriptors():
    with pytest.raises(ValidationError):
        make_field({"kind": "prime", "p": 12})
    with pytest.raises(ValidationError):
        make_field({"kind": "nope"})
    with pytest.raises(ValidationError):
        make_field([1, 2])


def test_mixed_fields_raise():
    with pytest.raises(FieldMismatchError):
        GF13(1) + finite_field(7)(1)


def test_poly_roots_against_scan():
    rng = random.Random(3)
    for _ in range(20):
        coeffs = [GF13(rng.randrange(13)) for _ in range(5)] + [GF13(1)]
        scanned = sorted(
            (x for x in GF13.elements() if sum((c * x**i for i, c in enumerate(coeffs)), GF13(0)) == 0),
            key=lambda x: x.key(),
        )
        assert poly_roots(coeffs) == scanned


def test_char2_roots():
    F = finite_field(2, 6)
    roots = kth_roots(F.one, 3)
    assert len(roots) == 3 and all(r**3 == 1 for r in roots)
    a = F.gen
    for r in kth_roots(a**3, 3):
        assert r**3 == a**3


def test_extension_for_roots():
    assert extend_for_roots(GF13, [(GF13(2), 3)]) == finite_field(13, 3)
    assert extend_for_roots(GF13, [(GF13(5), 3)]) == GF13
    F4 = finite_field(2, 2)
    assert extend_for_roots(F4, [(F4.gen, 3)]).degree % 2 == 0
    with pytest.raises(UnsupportedFieldError):
        extend_for_roots(make_field({"kind": "rationals"}), [(Fraction(2), 3)])


def test_embedding_is_a_homomorphism():
    F4 = finite_field(2, 2)
    F64 = finite_field(2, 6)
    w = embed(F4.gen, F64)
    assert w**2 + w + 1 == 0
    for a in F4.elements():
        for b in F4.elements():
            assert embed(a * b, F64) == embed(a, F64) * embed(b, F64)
            assert embed(a + b, F64) == embed(a, F64) + embed(b, F64)


def test_rationals():
    Q = make_field({"kind": "rationals"})
    assert Q("3/4") * 4 == 3
    assert kth_roots(Q(Fraction(8, 27)), 3) == [Q(Fraction(2, 3))]
    assert kth_roots(Q(4), 2) == [Q(-2), Q(2)]
    assert kth_roots(Q(2), 2) == []
    assert primitive_kth_root(Q, 2) == -1


def test_cyclotomic_field():
    K = make_field({"kind": "cyclotomic", "k": 3})
    z = K.gen
    assert z**2 == -1 - z
    assert z**3 == 1
    assert sorted(kth_roots(K(-3), 2), key=lambda x: x.key()) == sorted(
        [2 * z + 1, -(2 * z + 1)], key=lambda x: x.key()
    )
    w = primitive_kth_root(K, 3)
    assert w**3 == 1 and w != 1
    assert kth_roots(K(2), 3) == []
    roots = kth_roots(K(8), 3)
    assert len(roots) == 3 and all(r**3 == 8 for r in roots)


def test_json_round_trip():
    F = finite_field(13, 3)
    x = F([1, 2, 3])
    assert F(x.to_json()) == x
    assert make_field(F.to_json()) == F
    Q = make_field({"kind": "rationals"})
    assert Q(Q("-5/7").to_json()) == Q("-5/7")
