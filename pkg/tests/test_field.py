import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddsbox.field import (
    BadModulusError,
    EvenCharacteristicError,
    FieldError,
    FieldOverflowError,
    NotPrimeError,
    ReducibleModulusError,
    is_prime,
    make_field,
    prime_factors,
)

from oracle import RefField, all_monic, has_root

SMALL = [(3, 1), (5, 1), (7, 1), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4), (5, 3), (11, 2)]


def _field_st():
    return st.sampled_from(SMALL).map(lambda pn: make_field(*pn))


# -- construction -----------------------------------------------------------------

@pytest.mark.parametrize("p,n", [(p, n) for p, n in SMALL if 2 <= n <= 3])
def test_canonical_modulus_is_first_rootless_monic(p, n):
    # degree <= 3: irreducible iff no root in F_p
    F = make_field(p, n)
    expected = next(m for m in all_monic(p, n) if not has_root(m, p))
    assert list(F.modulus) == expected


def test_canonical_modulus_frozen_values():
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(3, 3).modulus == (1, 2, 0, 1)
    assert make_field(5, 2).modulus == (2, 0, 1)
    assert make_field(7, 2).modulus == (1, 0, 1)
    assert make_field(13, 2).modulus == (2, 0, 1)
    assert make_field(7, 3).modulus == (2, 0, 0, 1)
    assert make_field(11, 1).modulus == (0, 1)


@pytest.mark.parametrize("p,n", SMALL)
def test_primitive_element_is_smallest_generator(p, n):
    F = make_field(p, n)
    R = RefField(p, n, F.modulus)
    g = F.primitive_element
    assert R.order(g) == F.q - 1
    assert all(R.order(x) < F.q - 1 for x in range(1, g))


def test_primitive_element_frozen_values():
    assert [make_field(*pn).primitive_element for pn in [(3, 2), (3, 3), (5, 2), (7, 2), (13, 2), (7, 3)]] \
        == [4, 3, 6, 9, 15, 22]


def test_construction_errors():
    with pytest.raises(NotPrimeError):
        make_field(4, 2)
    with pytest.raises(NotPrimeError):
        make_field(1)
    with pytest.raises(EvenCharacteristicError):
        make_field(2, 3)
    with pytest.raises(FieldError):
        make_field(3, 0)
    with pytest.raises(FieldOverflowError):
        make_field(3, 60)
    with pytest.raises(BadModulusError):
        make_field(3, 2, [1, 1])
    with pytest.raises(BadModulusError):
        make_field(3, 2, [1, 0, 2])
    with pytest.raises(BadModulusError):
        make_field(3, 2, [1, 5, 1])
    with pytest.raises(ReducibleModulusError):
        make_field(3, 2, [2, 0, 1])  # X^2 - 1
    assert issubclass(NotPrimeError, ValueError)


def test_custom_modulus_changes_encoding_not_structure():
    F = make_field(3, 2, [2, 1, 1])
    assert F.modulus == (2, 1, 1)
    assert F != make_field(3, 2)
    assert F == make_field(3, 2, [2, 1, 1])


def test_prime_helpers():
    assert [m for m in range(30) if is_prime(m)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(342) == [2, 3, 19]


# -- arithmetic against the reference ----------------------------------------------

@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_tables_match_reference_exhaustively(p, n):
    F = make_field(p, n)
    R = RefField(p, n, F.modulus)
    q = F.q
    ref_add = np.array([[R.add(x, y) for y in range(q)] for x in range(q)])
    ref_mul = np.array([[R.mul(x, y) for y in range(q)] for x in range(q)])
    assert np.array_equal(F.add_table, ref_add)
    assert np.array_equal(F.mul_table, ref_mul)
    assert np.array_equal(F.neg_table, [R.neg(x) for x in range(q)])
    assert np.array_equal(F.sub_table, [[R.sub(x, y) for y in range(q)] for x in range(q)])


@settings(max_examples=200, deadline=None)
@given(_field_st(), st.data())
def test_scalar_ops_match_tables(F, data):
    x = data.draw(st.integers(0, F.q - 1))
    y = data.draw(st.integers(0, F.q - 1))
    assert F.add(x, y) == F.add_table[x, y]
    assert F.sub(x, y) == F.sub_table[x, y]
    assert F.mul(x, y) == F.mul_table[x, y]
    assert F.neg(x) == F.neg_table[x]
    assert F.trace(x) == F.trace_table[x]
    assert F.chi(x) == F.chi_table[x]
    if x:
        assert F.inv(x) == F.inv_table[x]
        assert F.mul(x, F.inv(x)) == 1


@settings(max_examples=200, deadline=None)
@given(_field_st(), st.data())
def test_field_axioms(F, data):
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(x, y) == F.add(y, x)
    assert F.mul(x, y) == F.mul(y, x)
    assert F.mul(x, F.mul(y, z)) == F.mul(F.mul(x, y), z)
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg(x)) == 0


@settings(max_examples=100, deadline=None)
@given(_field_st(), st.data())
def test_pow_and_power_array(F, data):
    x = data.draw(st.integers(0, F.q - 1))
    d = data.draw(st.integers(0, 3 * F.q))
    expected = 1
    for _ in range(d):
        expected = F.mul(expected, x)
    assert F.pow(x, d) == expected
    assert F.power_array(d)[x] == expected


def test_inverse_of_zero():
    F = make_field(5)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert F.inv_table[0] == 0


@pytest.mark.parametrize("p,n", SMALL)
def test_trace_is_additive_onto_prime_field(p, n):
    F = make_field(p, n)
    tr = F.trace_table
    assert tr.min() >= 0 and tr.max() < p
    assert np.array_equal(tr[F.add_table], (tr[:, None] + tr[None, :]) % p)
    # balanced: each value of F_p taken p^(n-1) times
    assert np.all(np.bincount(tr, minlength=p) == F.q // p)


@pytest.mark.parametrize("p,n", SMALL + [(13, 2), (7, 3)])
def test_chi_multiplicative_exhaustive(p, n):
    F = make_field(p, n)
    chi = F.chi_table
    assert np.array_equal(chi[F.mul_table], chi[:, None] * chi[None, :])


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (7, 1), (3, 3)])
def test_chi_against_reference_squares(p, n):
    F = make_field(p, n)
    R = RefField(p, n, F.modulus)
    sq = R.squares()
    assert [F.chi(x) for x in range(F.q)] == [R.chi(x, sq) for x in range(F.q)]


def test_prime_subfield_squares_in_even_degree():
    # every element of F_p is a square in F_{p^2}
    F = make_field(7, 2)
    assert all(F.chi(k) == 1 for k in range(1, 7))


def test_sqrt_smaller_root():
    F = make_field(13)
    assert F.sqrt(F.const(-3)) == 6  # 6^2 = 36 = -3 mod 13, and 7 = -6
    assert F.sqrt(2) is None
    F9 = make_field(3, 2)
    for x in range(1, 9):
        r = F9.sqrt(x)
        if r is not None:
            assert F9.mul(r, r) == x and r <= F9.neg(r)


def test_label_and_const():
    assert make_field(5).label == "F_5"
    assert make_field(5, 3).label == "F_5^3"
    assert make_field(7).const(-3) == 4
