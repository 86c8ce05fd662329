from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soint.counting import SpDn, UDn, fiber_count_kappa, regular_nilpotent_count, torus_count
from soint.errors import BudgetError, DomainError
from soint.oracle import _fallback, kernels
from soint.oracle.groups import enumerate_group, enumerate_regular_nilpotents, residue_torus_order
from soint.oracle.lattices import enumerate_sublattices
from soint.oracle.linalg import elementary_divisor_exponents
from soint.oracle.volume import StratumFilter, count_fiber, first_stable, stabilization_scan
from soint.qsym import gl_order, sp_order, u_order
from soint.ring import QuadModulus


# counts frozen from exhaustive enumeration


def test_gl2_fiber_counts_frozen():
    scan = stabilization_scan(2, 2, "gl", [0, 2], range(1, 4))
    assert [e.raw_count for e in scan] == [4, 12, 48]
    assert [e.volume for e in scan] == [1, Fraction(3, 4), Fraction(3, 4)]
    assert first_stable(scan) == 2


def test_gl3_fiber_counts_frozen():
    est = count_fiber(2, 2, "gl", 3, [0, 0, 2])
    assert est.raw_count == 2688 and est.volume == Fraction(21, 32)


def test_u2_fiber_frozen():
    m = 9
    v = QuadModulus.standard(3, 2).v
    est = count_fiber(3, 2, "u", 2, [(0, 0), (3 * pow(v, -1, m) % m, 0)])
    assert est.raw_count == 72 and est.volume == Fraction(8, 9)


def test_u2_false_plateau_is_not_final():
    # x^2 + 27/v agrees at N = 2 and 3 before moving at N = 4
    vols = []
    for N in (2, 3, 4):
        m = 3**N
        v = QuadModulus.standard(3, N).v
        vols.append(count_fiber(3, N, "u", 2, [(0, 0), (27 * pow(v, -1, m) % m, 0)]).volume)
    assert vols == [Fraction(11, 9), Fraction(11, 9), Fraction(32, 27)]


def test_stratum_filter_splits_the_fiber():
    # x^2 + 4 at p = 2: the fiber splits into lattice types (1,1) and (2)
    total = count_fiber(2, 3, "gl", 2, [0, 4]).raw_count
    parts = {t: count_fiber(2, 3, "gl", 2, [0, 4], StratumFilter(lattice_type=t)).raw_count for t in [(1,), (1, 1), (2,)]}
    assert parts == {(1,): 0, (1, 1): 32, (2,): 48}
    assert sum(parts.values()) == total


def test_budget_is_enforced():
    with pytest.raises(BudgetError):
        count_fiber(2, 3, "gl", 3, [0, 0, 2], budget=100)


def test_bad_prime_rejected():
    with pytest.raises(DomainError):
        count_fiber(4, 2, "gl", 2, [0, 2])


# backends agree


@given(st.sampled_from([2, 3]), st.integers(1, 3), st.integers(0, 26), st.integers(0, 26))
def test_compiled_and_fallback_kernels_agree(p, N, c1, c2):
    m = p**N
    target = [c1 % m, c2 % m]
    fast = kernels.count_charpoly_fiber(2, p, N, target, 0, m * m)
    slow = _fallback.count_charpoly_fiber(2, p, N, target, 0, m * m)
    assert fast == slow


@given(st.integers(0, 7), st.integers(0, 7))
def test_pruned_kernel_matches_naive(c1, c2):
    target = [c1, c2]
    assert _fallback.count_charpoly_fiber(2, 2, 3, target, 0, 64) == _fallback.count_charpoly_naive(2, 2, 3, target)


# residue groups and tori


@pytest.mark.parametrize("qv", [2, 3])
def test_group_orders(qv):
    assert enumerate_group("gl", 2, qv) == gl_order(2).evaluate(qv)
    assert enumerate_group("u", 2, qv) == u_order(2).evaluate(qv)
    assert enumerate_group("sp", 1, qv) == sp_order(1).evaluate(qv)


def test_sp4_order_at_two():
    assert enumerate_group("sp", 2, 2) == 720


@pytest.mark.parametrize("case", ["split", "unramified"])
@pytest.mark.parametrize("n,d", [(1, 1), (2, 1), (2, 2)])
def test_torus_counts(case, n, d):
    assert residue_torus_order(case, n, 3, d) == torus_count(case, n, d).evaluate(3)


def test_regular_nilpotents():
    assert enumerate_regular_nilpotents("sp", 1, 3) == regular_nilpotent_count("sp", 1).evaluate(3)
    assert enumerate_regular_nilpotents("u", 2, 2) == regular_nilpotent_count("u", 2).evaluate(2)


# lattices


def test_elementary_divisors():
    assert sorted(elementary_divisor_exponents([[2, 0], [0, 4]], 2, 5)) == [1, 2]
    assert sorted(elementary_divisor_exponents([[1, 1], [1, 3]], 2, 5)) == [0, 1]


@pytest.mark.parametrize("d", [1, 2])
def test_hermitian_jordan_formula_matches_gram(d):
    assert enumerate_sublattices(2, 2, d, "u", method="formula") == enumerate_sublattices(2, 2, d, "u", method="gram")


def test_symplectic_type_one_lattices():
    counts = enumerate_sublattices(2, 2, 1, "sp")
    assert counts == {((1,), (1, 1)): 15}


# residue fibers


@pytest.mark.parametrize("shape", [UDn(2, 1, 1), UDn(2, 2, 1), UDn(3, 1, 2), SpDn(1, 1), SpDn(2, 1)])
def test_flavored_fibers_at_two(shape):
    from soint.oracle.fibers import enumerate_kappa_fiber

    assert enumerate_kappa_fiber(2, shape) == fiber_count_kappa(shape).evaluate(2)
