from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soint.errors import DomainError
from soint.ring import (
    AtLeast,
    QuadExtElem,
    QuadModulus,
    RingMatrix,
    TruncatedInt,
    alpha,
    berkowitz,
    charpoly_mod,
    int_valuation,
    is_prime,
    least_nonresidue,
    standard_gram,
)

primes = st.sampled_from([2, 3, 5, 7])


def test_is_prime_small_values():
    assert [k for k in range(20) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_valuation_saturates_at_cap():
    assert int_valuation(18, 3, 4) == 2
    assert isinstance(int_valuation(0, 3, 4), AtLeast)
    assert isinstance(int_valuation(81, 3, 4), AtLeast)


def test_truncated_inverse_and_nonunit():
    x = TruncatedInt.of(3, 4, 5)
    assert (x * x.inverse()).value == 1
    with pytest.raises(DomainError):
        TruncatedInt.of(3, 4, 3).inverse()


@given(primes, st.integers(1, 6), st.integers(), st.integers())
def test_truncated_ring_laws(p, N, a, b):
    x, y = TruncatedInt.of(p, N, a), TruncatedInt.of(p, N, b)
    m = p**N
    assert (x + y).value == (a + b) % m
    assert (x * y).value == (a * b) % m
    assert (x - y).value == (a - b) % m


def test_least_nonresidue():
    assert least_nonresidue(3) == 2
    assert least_nonresidue(7) == 3
    assert least_nonresidue(17) == 3


def test_standard_quadratic_moduli():
    odd = QuadModulus.standard(3, 4)
    assert (odd.u, odd.v) == (0, 2)
    two = QuadModulus.standard(2, 4)
    assert (two.u % 16, two.v % 16) == (15, 15)
    assert odd.reduction_irreducible() and two.reduction_irreducible()


@given(primes, st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_norm_is_multiplicative_and_sigma_an_involution(p, a, b, c, d):
    m = QuadModulus.standard(p, 5)
    x, y = QuadExtElem.of(m, a, b), QuadExtElem.of(m, c, d)
    assert (x * y).norm().value == (x.norm() * y.norm()).value
    assert x.sigma().sigma() == x
    assert (x * x.sigma()).is_real()


def test_alpha_is_trace_zero_generator():
    for p in (3, 5):
        al = alpha(QuadModulus.standard(p, 4))
        assert (al + al.sigma()).is_zero()
    al2 = alpha(QuadModulus.standard(2, 4))
    assert (al2.a.value, al2.b.value) == (1, 2)


def test_berkowitz_matches_trace_and_determinant():
    assert berkowitz([[1, 2], [3, 4]], 1, 0) == [1, -5, -2]
    assert charpoly_mod([[1, 2], [3, 4]], 27) == (22, 25)


@given(st.lists(st.integers(-50, 50), min_size=9, max_size=9))
def test_berkowitz_cubic_invariants(entries):
    rows = [entries[0:3], entries[3:6], entries[6:9]]
    coeffs = berkowitz(rows, 1, 0)
    trace = rows[0][0] + rows[1][1] + rows[2][2]
    det = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    assert coeffs[0] == 1 and coeffs[1] == -trace and coeffs[3] == -det


def test_standard_grams():
    assert standard_gram("sp", 2) == ((0, 1), (-1, 0))
    assert standard_gram("u", 2) == ((1, 0), (0, 1))


def test_ring_matrix_char_poly():
    cp = RingMatrix.from_ints([[0, 1], [-2, 0]], 2, 4).char_poly()
    assert [c.value for c in cp] == [0, 2]
