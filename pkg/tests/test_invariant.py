from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from soint.errors import DomainError, PrecisionError, UnsupportedError
from soint.invariant import (
    CharPolyData,
    ascend_from_base,
    classify_and_serre,
    discriminant_val,
    hensel_split,
    newton_polygon,
    reduction_shape,
    root_valuations,
    sigma_descend,
    taylor_shift,
    translate_to_canonical,
    with_precision_doubling,
)
from soint.ring import QuadModulus


def gl(coeffs, p, N=12):
    return CharPolyData("gl", len(coeffs), tuple(coeffs), p, N)


@pytest.mark.parametrize(
    "coeffs,p,disc,d,ram,serre",
    [
        ((0, 2), 2, 3, 1, "totally-ramified", 0),
        ((2, 4), 2, 2, 2, "unramified", 1),
        ((0, 0, 4), 2, 4, 2, "totally-ramified", 1),
        ((0, -5), 2, 2, 2, "unramified", 1),
        ((0, -18), 3, 2, 2, "unramified", 1),
        ((0, -6), 3, 1, 1, "totally-ramified", 0),
    ],
)
def test_classification(coeffs, p, disc, d, ram, serre):
    chi = gl(coeffs, p)
    assert discriminant_val(chi) == disc
    rep = classify_and_serre(chi)
    assert (rep.d_gamma, rep.ramification, rep.serre) == (d, ram, serre)


def test_newton_polygon_slopes():
    assert newton_polygon(gl((0, 2), 2)) == [(Fraction(1, 2), 2)]
    assert newton_polygon(gl((2, 4), 2)) == [(Fraction(1), 2)]
    assert root_valuations(gl((0, 0, 4), 2)) == [Fraction(2, 3)] * 3


@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(-200, 200), min_size=2, max_size=3))
def test_newton_slopes_add_up_to_constant_valuation(p, coeffs):
    assume(coeffs[-1] != 0)
    try:
        chi = gl(coeffs, p, 16)
        slopes = newton_polygon(chi)
    except (PrecisionError, DomainError):
        assume(False)
    v = 0
    c = coeffs[-1]
    while c % p == 0:
        c //= p
        v += 1
    assert sum(s * length for s, length in slopes) == v
    assert sum(length for _, length in slopes) == len(coeffs)


@pytest.mark.parametrize("start", range(6))
def test_d_gamma_does_not_depend_on_start(start):
    a, d, _ = translate_to_canonical(gl((2, 4), 2), start)
    assert d == 2


def test_translation_shifts_to_canonical_form():
    a, d, poly = translate_to_canonical(gl((0, -5), 2))
    assert (a, d) == (1, 2)
    assert tuple(taylor_shift([1, 0, -5], a, 2**12)[1:]) == poly


def test_reduction_shape():
    assert reduction_shape([1, 0, 1], 2) == ([1, 1], 2)
    with pytest.raises(DomainError):
        reduction_shape([1, 0, 2], 3)


def test_precision_error_reports_minimum():
    with pytest.raises(PrecisionError) as info:
        CharPolyData("gl", 2, (0, -4), 2, 3)
    assert info.value.minimal_precision == 4


def test_precision_doubling_succeeds():
    assert with_precision_doubling(discriminant_val, "gl", 2, (0, -(2**20)), 2) == 22


def test_composite_degree_needs_serre():
    chi = gl((0, 0, 0, 2), 2)
    with pytest.raises(UnsupportedError):
        classify_and_serre(chi)
    assert classify_and_serre(chi, serre=0, residue_degree=1).serre == 0


def test_hensel_split_cubic():
    f, g = hensel_split(CharPolyData("gl", 3, (0, -1, 0), 3, 3), (1, 0))
    assert (f, g) == ((1, 0), (1, 0, 26))


def test_hensel_split_quadratics():
    f, g = hensel_split(CharPolyData("gl", 2, (0, -6), 5, 3), (1, -1))
    assert {f, g} == {(1, 109), (1, 16)}
    f, g = hensel_split(CharPolyData("gl", 2, (1, -2), 5, 3), (1, 2))
    assert {f, g} == {(1, 2), (1, 124)}


def test_hensel_rejects_non_coprime_reduction():
    # x^2 - 4x + 3 reduces to (x + 1)^2 mod 2
    with pytest.raises(DomainError):
        hensel_split(CharPolyData("gl", 2, (-4, 3), 2, 4), (1, 1))


@given(st.integers(0, 26), st.integers(1, 26).filter(lambda c: c % 3), st.integers(0, 26))
def test_hensel_factors_multiply_back(a, b, c):
    # (x - a)(x^2 + b) with coprime reductions mod 3
    assume((a * a + b) % 3 != 0)
    poly = (-a, b, -a * b)
    N = 4
    m = 3**N
    chi = CharPolyData("gl", 3, tuple(x % m for x in poly), 3, N)
    f, g = hensel_split(chi, (1, (-a) % 3))
    prod = [0] * 4
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            prod[i + j] = (prod[i + j] + x * y) % m
    assert tuple(prod) == (1,) + tuple(x % m for x in poly)


def test_sigma_descend_and_ascend():
    p, N = 3, 6
    m = p**N
    v = QuadModulus.standard(p, N).v
    chi = CharPolyData("u", 2, ((0, 0), (3 * pow(v, -1, m) % m, 0)), p, N)
    psi = sigma_descend(chi)
    assert psi.algebra == "gl" and psi.coeffs == (0, 3)
    assert ascend_from_base(psi.coeffs, p, N) == chi.coeffs


def test_u_symmetry_is_enforced():
    with pytest.raises(DomainError):
        CharPolyData("u", 1, ((1, 0),), 3, 4)


def test_json_round_trip():
    chi = gl((2, 4), 2)
    assert CharPolyData.from_json(chi.to_json()) == chi


def test_symplectic_uses_full_polynomial():
    chi = CharPolyData("sp", 2, (3, 9), 3, 10)
    assert chi.full_poly() == [1, 0, 3, 0, 9]
