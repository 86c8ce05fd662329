from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soint.counting import (
    Gl3Case,
    GlRefined,
    GlTypeK1,
    SpDn,
    UDn,
    c_type,
    d_t_count,
    fiber_count_kappa,
    regular_nilpotent_count,
    s_ab_count,
    torus_count,
    types_of_size,
    validate_type,
)
from soint.errors import DomainError
from soint.qsym import q, sp_order


def test_validate_type():
    assert validate_type([1, 2], 3) == (1, 2)
    with pytest.raises(DomainError):
        validate_type([2, 1], 3)
    with pytest.raises(DomainError):
        validate_type([1, 1, 1, 1], 3)


def test_c_type_small_cases():
    assert c_type((1,), 2) == q + 1
    assert c_type((2,), 2).evaluate(2) == 6
    assert c_type((1, 1), 2).evaluate(5) == 1


@given(st.integers(1, 4), st.integers(0, 4), st.sampled_from([2, 3, 5]))
def test_types_of_index_partition_all_sublattices(n, K, p):
    # sublattices of index p^K in o^n number prod_{i=1}^{n-1} (p^(K+i) - 1) / (p^i - 1)
    total = sum(c_type(t, n).evaluate(p) for t in types_of_size(K, n))
    expected = 1
    for i in range(1, n):
        expected = expected * (p ** (K + i) - 1) // (p**i - 1)
    assert total == expected


def test_d_t_count():
    assert d_t_count(1, 2) == q + 1


def test_s_ab_counts():
    assert s_ab_count("u", 1, 2, 2).evaluate(2) == 6
    assert s_ab_count("u", 2, 2, 2).evaluate(2) == 6
    assert s_ab_count("sp", 1, 1, 2).evaluate(2) == 15
    with pytest.raises(DomainError):
        s_ab_count("u", 0, 2, 2)
    with pytest.raises(DomainError):
        s_ab_count("sp", 1, 2, 2)


def test_tori_and_nilpotents():
    assert torus_count("split", 2).evaluate(3) == 6
    assert torus_count("unramified", 2).evaluate(3) == 12
    assert regular_nilpotent_count("sp", 1).evaluate(3) == 8


def test_fiber_counts():
    assert fiber_count_kappa(GlTypeK1(4)).evaluate(2) == 1344
    assert fiber_count_kappa(GlRefined(4, 1, 2)).evaluate(3) == 314928
    assert fiber_count_kappa(Gl3Case(1, 1, 3, 0)).evaluate(3) == 324
    assert fiber_count_kappa(UDn(3, 1, 2)).evaluate(3) == 972
    assert fiber_count_kappa(SpDn(2, 1)).evaluate(3) == 3888


def test_u_strata_need_positive_orders():
    with pytest.raises(DomainError):
        fiber_count_kappa(UDn(3, 0, 1))


def test_gl3_case_conditions():
    with pytest.raises(DomainError):
        fiber_count_kappa(Gl3Case(3, 1, 2))
    with pytest.raises(DomainError):
        fiber_count_kappa(Gl3Case(1, 1, 3, 5))


def test_sp_fiber_contains_group_factor():
    assert fiber_count_kappa(SpDn(1, 1)) == sp_order(0) * (q - 1) * q
