import random
from fractions import Fraction

import pytest

from gfermat.errors import CharacteristicError, FieldMismatchError, ValidationError
from gfermat.fields import finite_field, make_field
from gfermat.series import TruncatedSeries, binom_kinv, kth_root_series

Q = make_field({"kind": "rationals"})
GF13 = finite_field(13)


def test_binomial_values_over_q():
    assert binom_kinv(Q, 3, 0) == 1
    assert binom_kinv(Q, 3, 1) == Q(Fraction(1, 3))
    assert binom_kinv(Q, 3, 2) == Q(Fraction(1 - 3, 2 * 9))
    # C(1/2, 3) = (1/2)(-1/2)(-3/2)/6
    assert binom_kinv(Q, 2, 3) == Q(Fraction(1, 16))


def test_binomial_needs_large_characteristic():
    with pytest.raises(CharacteristicError):
        binom_kinv(finite_field(5), 3, 5)


def test_multiplication_and_truncation():
    a = TruncatedSeries.of(Q, [1, 1], 5)
    b = a * a * a
    assert [c for c in b.coeffs] == [1, 3, 3, 1, 0]
    short = TruncatedSeries.of(Q, [1, 2, 3], 3)
    assert (a * short).N == 3


def test_substitute_power():
    s = TruncatedSeries.of(Q, [1, 2, 3], 3).substitute_power(2)
    assert s.N == 6
    assert list(s.coeffs) == [1, 0, 2, 0, 3, 0]


def test_order():
    assert TruncatedSeries.of(Q, [0, 0, 5], 4).order() == 2
    assert TruncatedSeries.of(Q, [0, 0], 2).order() is None


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        TruncatedSeries.of(Q, [1], 2) + TruncatedSeries.of(GF13, [1], 2)


def test_root_requires_unit_constant():
    with pytest.raises(ValidationError):
        kth_root_series(TruncatedSeries.of(Q, [2, 1], 4), 3)


def test_sqrt_one_plus_z_over_q():
    s = kth_root_series(TruncatedSeries.of(Q, [1, 1], 4), 2)
    assert list(s.coeffs) == [1, Q("1/2"), Q("-1/8"), Q("1/16")]


@pytest.mark.parametrize(
    "F,k",
    [(Q, 2), (Q, 3), (GF13, 3), (finite_field(13, 2), 4), (make_field({"kind": "cyclotomic", "k": 3}), 3)],
)
def test_root_power_round_trip(F, k):
    rng = random.Random(k)
    N = 8 if not F.p else min(8, F.p)
    for _ in range(10):
        u = TruncatedSeries.of(F, [1] + [F.random_element(rng) for _ in range(N - 1)], N)
        assert kth_root_series(u, k) ** k == u
