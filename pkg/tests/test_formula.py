from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soint import formula as fm
from soint.errors import DomainError
from soint.invariant import CharPolyData
from soint.qsym import QPoly, QRat, q, qpow, u_order

serres = st.integers(0, 8)
rams = st.sampled_from(["unramified", "ramified"])


def test_gl2_values():
    assert fm.so_gl2(True, "ramified", 0).geometric.evaluate(2) == Fraction(3, 4)
    assert fm.so_gl2(True, "unramified", 1).geometric.evaluate(2) == 1
    assert fm.so_gl2(False).geometric.evaluate(3) == Fraction(4, 3)
    assert fm.so_gl2(True, "unramified", 2).dmu.evaluate(2) == 10


def test_gl3_values():
    assert fm.so_gl3("hyperbolic").geometric.evaluate(2) == Fraction(21, 8)
    assert fm.so_gl3("elliptic-ramified", 0).geometric.evaluate(2) == Fraction(21, 32)
    assert fm.so_gl3("elliptic-ramified", 0).dmu == fm.as_rat(1)
    assert fm.so_gl3("elliptic-unramified", 0).geometric == QRat((q * q - 1) * (q - 1), qpow(3))


def test_gl3_rejects_impossible_serre():
    with pytest.raises(DomainError):
        fm.so_gl3("elliptic-ramified", 2)
    with pytest.raises(DomainError):
        fm.so_gl3("elliptic-unramified", 1)
    with pytest.raises(DomainError):
        fm.so_gl3("quad-factor", 3, "unramified", None)


def test_serre_of_quadratic_factor():
    assert fm.serre_of_quadratic_factor(3, 6, 2) == 1
    with pytest.raises(DomainError):
        fm.serre_of_quadratic_factor(1, 7, 2)


def test_dmu_needs_acknowledgement():
    closed = fm.so_gl2(True, "ramified", 1)
    with pytest.raises(DomainError):
        closed.value(fm.DMU, 2)
    v = closed.value(fm.DMU, 2, acknowledge_char=True)
    assert v.numeric == 3 and fm.CHAR_ASSUMPTION in v.assumptions


def test_orbital_value_json_round_trip():
    v = fm.so_gl3("elliptic-ramified", 4).value(fm.GEOMETRIC, 3)
    data = v.to_json()
    assert data["theorem"] == "gl3-elliptic-ramified-s1"
    back = fm.OrbitalValue.from_json(data)
    assert back.symbolic == v.symbolic and back.numeric == v.numeric


@pytest.mark.parametrize("d", range(0, 9))
def test_gl2_and_gl3_strata_sums(d):
    ram2 = "unramified" if d % 2 == 0 else "ramified"
    assert fm.gl2_stratified(d) == fm.so_gl2(True, ram2, d // 2).geometric
    closed = fm.so_gl3("elliptic-unramified", d) if d % 3 == 0 else fm.so_gl3("elliptic-ramified", d - 1)
    assert fm.gl3_stratified(d) == closed.geometric


def test_gl3_stratum_cases():
    assert fm.gl3_stratum_case(1, 3) == 1
    assert fm.gl3_stratum_case(1, 2) == 4
    assert fm.gl3_stratum_case(2, 2) == 3
    assert fm.gl3_stratum_case(2, 4) == 4
    assert fm.gl3_stratum_case(3, 4) == 2
    with pytest.raises(DomainError):
        fm.so_gl3_stratum(1, 2, case=2)


def test_type_k1_stratum():
    assert fm.so_type_k1_stratum(2) == QRat(q * q - 1, q * q)
    with pytest.raises(DomainError):
        fm.so_type_k1_stratum(1)


@given(serres, rams)
def test_gl2_measure_round_trip(S, ram):
    r = 2 if ram == "unramified" else 1
    data = fm.FactorData((fm.FactorInfo(2, 1, r, S),), serre=S)
    v = fm.so_gl2(True, ram, S).value(fm.GEOMETRIC, 5)
    there = fm.measure_convert(v, "to_dmu", "gl", 2, data, acknowledge_char=True)
    assert there.symbolic == fm.so_gl2(True, ram, S).dmu
    back = fm.measure_convert(there, "to_geometric", "gl", 2, data, acknowledge_char=True)
    assert back.symbolic == v.symbolic


def test_conversion_needs_field_discriminant():
    data = fm.FactorData((fm.FactorInfo(2),), disc_val=4)
    with pytest.raises(DomainError):
        data.total_serre()
    data = fm.FactorData((fm.FactorInfo(2, field_disc=2),), disc_val=4)
    assert data.total_serre() == 1


@given(st.integers(0, 3), st.integers(0, 3), rams)
def test_quad_factor_descent_and_dmu(Sq, extra, ram):
    S = Sq + extra
    r = 2 if ram == "unramified" else 1
    closed = fm.so_gl3("quad-factor", S, ram, Sq)
    assert closed.geometric == fm.parabolic_descent("gl", [2, 1]) * fm.so_gl2(True, ram, Sq).geometric
    data = fm.FactorData((fm.FactorInfo(2, 1, r, Sq), fm.FactorInfo(1)), serre=S)
    assert closed.geometric == fm.conversion_factor("gl", 3, data) * closed.dmu


def test_descent_multipliers():
    assert fm.parabolic_descent("gl", [1, 1]) == QRat(q + 1, q)
    assert fm.parabolic_descent("u", [1], n=2, m=0) == QRat(q + 1, q)
    assert fm.parabolic_descent("sp", [1], n=1, m=0) == QRat(q + 1, q)
    with pytest.raises(DomainError):
        fm.parabolic_descent("u", [1], n=3, m=0)


@given(serres)
def test_u2_conversion(S):
    ram = fm.so_u2("ramified", S)
    data = fm.FactorData((fm.FactorInfo(2, 1, 1, S),), serre=S)
    assert ram.geometric == fm.conversion_factor("u", 2, data) * ram.dmu
    unr = fm.so_u2("unramified", S)
    data = fm.FactorData((fm.FactorInfo(2, 2, 1, S, kind="split"),), serre=S)
    assert unr.geometric == fm.conversion_factor("u", 2, data) * unr.dmu


def test_u2_values():
    assert fm.so_u2("ramified", 0).geometric.evaluate(2) == Fraction(3, 4)
    assert fm.so_u2("ramified", 0).geometric.evaluate(3) == Fraction(8, 9)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("d_n", [1, 2, 3])
@pytest.mark.parametrize("d_prev", [1, 2, 4])
def test_u_dn_totals_match_closed_form(n, d_n, d_prev):
    _, total = fm.so_dn_stratum("u", n, d_n, d_prev)
    assert total == fm.so_dn_total_closed("u", n)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d_n", [1, 2, 3])
def test_sp_dn_totals_match_closed_form(n, d_n):
    _, total = fm.so_dn_stratum("sp", n, d_n)
    assert total == fm.so_dn_total_closed("sp", n)


def test_sp4_total_value():
    assert fm.so_dn_total_closed("sp", 2).evaluate(2) == Fraction(45, 64)


def test_scale_reduction_gl():
    chi = CharPolyData("gl", 2, (2, 4), 2, 10)
    scaled, mult = fm.scale_reduction(chi, 1)
    assert scaled.coeffs == (1, 1) and scaled.N == 8
    assert mult == QRat(QPoly.const(1), q)
    with pytest.raises(DomainError):
        fm.scale_reduction(CharPolyData("gl", 2, (1, 4), 2, 10), 1)


def test_scale_reduction_sp_multiplier():
    chi = CharPolyData("sp", 1, (9,), 3, 8)
    scaled, mult = fm.scale_reduction(chi, 1)
    assert scaled.coeffs == (1,)
    assert mult == QRat(QPoly.const(1), q)


def test_bracket_and_epsilon():
    assert fm.bracket(0) == fm.as_rat(1) and fm.bracket(1) == fm.as_rat(1)
    assert fm.bracket(2) == QRat(q + 1, q)
    assert fm.bracket(4) == QRat(q * q + 2 * q + 1, q * q)
    assert fm.bracket(5) == QRat(q * q + 2 * q + 2, q * q)
    assert [fm.epsilon(k) for k in range(2, 6)] == [1, 2, 1, 2]


def test_alpha_conjectural_values():
    assert [fm.alpha_conjectural(k) for k in range(6)] == [0, 0, 1, 2, 2, 2]


def test_residue_degree_one_bound_is_exact():
    # d_bar = 1: the bound coincides with the exact value
    f = fm.FactorInfo(3, 1, 1, 0, d_bar=1)
    bound = fm.lower_bound("gl", 3, fm.FactorData((f,), serre=0))
    exact = fm.so_gl3("elliptic-ramified", 0)
    assert bound.geometric == exact.geometric and bound.dmu == exact.dmu


def test_yun_polynomials():
    assert fm.yun_bounds(1, 1) == (q + 1, q + 1)
    assert fm.yun_bounds(2, 1) == (q * q + 1, q * q + q + 1)
    assert fm.yun_bounds(3, 1)[1] == q**3 + 2 * q * q + q + 1
    assert fm.yun_bounds(2, 2) == (q * q + q + 2, q * q + 2 * q + 2)
    assert fm.yun_bounds(1, 3)[0] == q + 2


@given(st.integers(2, 9), st.integers(1, 6), st.integers(1, 3))
def test_second_leading_coefficient_table(d_bar, S, r):
    got = fm.second_leading_coefficient(fm.n_prime_dmu(S, r, d_bar), S)
    assert got == fm.expected_second_coefficient(d_bar, r)


def test_u_lower_bound_without_split_part():
    data = fm.FactorData((fm.FactorInfo(2, 1, 1, 2),), serre=2)
    bound = fm.lower_bound("u", 2, data, l=1, d=1)
    assert bound.geometric == QRat(u_order(2), qpow(4)) / QRat(q + 1, q)
    assert bound.dmu.evaluate(2) == 4


def test_conjecture_coefficients_on_gl3():
    for S, ram in ((0, "ramified"), (1, "ramified"), (3, "unramified"), (4, "ramified")):
        coeff, alpha, lower = fm.conjecture_coefficient(S, ram)
        assert coeff == alpha and all(c == 0 for c in lower)
