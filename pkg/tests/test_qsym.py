from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soint.errors import DomainError
from soint.qsym import (
    ONE,
    QPoly,
    QRat,
    gl_order,
    grassmannian_count,
    parse_poly,
    parse_rat,
    q,
    qpow,
    render_poly,
    render_rat,
    sp_order,
    u_order,
)

polys = st.dictionaries(st.integers(-4, 6), st.integers(-9, 9), max_size=5).map(QPoly.from_dict)


def test_group_orders_at_small_q():
    assert gl_order(2).evaluate(2) == 6
    assert gl_order(3).evaluate(2) == 168
    assert u_order(2).evaluate(2) == 18
    assert sp_order(2).evaluate(2) == 720


def test_grassmannian():
    assert grassmannian_count(1, 3).evaluate(2) == 7
    assert grassmannian_count(2, 4).evaluate(3) == 130
    with pytest.raises(DomainError):
        grassmannian_count(3, 2)


@given(polys)
def test_render_parse_round_trip(p):
    assert parse_poly(render_poly(p)) == p


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_rational_round_trip(num, den):
    r = QRat(num, den)
    assert parse_rat(render_rat(r)) == r


@given(polys, polys, st.integers(2, 9))
def test_evaluation_is_a_ring_map(a, b, qv):
    assert (a * b).evaluate(qv) == a.evaluate(qv) * b.evaluate(qv)
    assert (a + b).evaluate(qv) == a.evaluate(qv) + b.evaluate(qv)


def test_exact_division_and_reduction():
    assert (q * q - 1) // (q - 1) == q + 1
    assert QRat(q * q - 1, q - 1).reduced() == QRat(q + 1, ONE)


def test_expansion_at_infinity():
    r = QRat(q, q - 1)
    assert [c for _, c in r.expansion_at_infinity(4)] == [Fraction(1)] * 4
    assert r.coefficient_at_infinity(-2) == 1


def test_rational_evaluation():
    assert QRat(q + 1, qpow(3)).evaluate(2) == Fraction(3, 8)
