"""Fiber volumes of the characteristic-polynomial map over truncated rings.

For a target polynomial chi the volume estimate at precision N is

    #{X in g(Z/p^N) : charpoly(X) = chi mod p^N} * q^(-N * dim)

where dim is the fiber dimension: n^2 - n for gl_n and u_n, 2n^2 for sp_2n.
Once N is large enough the estimate no longer changes.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from ..errors import BudgetError, DomainError, PrecisionError
from ..ring import QuadModulus, alpha, berkowitz, is_prime, standard_gram
from . import kernels
from .fibers import DEFAULT_BUDGET, _Pair, _partitioned
from .linalg import elementary_divisor_exponents

ALGEBRAS = ("gl", "u", "sp")


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    """Node budget, overridable through the SO_BUDGET environment variable."""
    raw = os.environ.get("SO_BUDGET")
    if not raw:
        return default
    try:
        return int(raw, 0) if not raw.startswith("2^") else 2 ** int(raw[2:])
    except ValueError:
        raise DomainError(f"SO_BUDGET must be an integer or 2^k, got {raw!r}") from None


def fiber_dimension(algebra: str, n: int) -> int:
    if algebra in ("gl", "u"):
        return n * n - n
    if algebra == "sp":
        return 2 * n * n
    raise DomainError(f"unknown algebra {algebra!r}")


@dataclass(frozen=True)
class StratumFilter:
    """Conjunctive restrictions on the enumerated matrices.

    ``lattice_type`` is the elementary-divisor type of L / X(L).
    ``refined_t`` is m - dim Xbar(Mbar), where Mbar is the image of X(L) in
    L / pi L and m its dimension; equivalently rank(Xbar) - rank(Xbar^2).
    ``jordan_type`` is the tuple of positive exponents of the hermitian or
    symplectic form restricted to X(L).
    """

    lattice_type: tuple[int, ...] | None = None
    refined_t: int | None = None
    jordan_type: tuple[int, ...] | None = None

    def is_trivial(self) -> bool:
        return self.lattice_type is None and self.refined_t is None and self.jordan_type is None


@dataclass(frozen=True)
class VolumeEstimate:
    p: int
    N: int
    n: int
    algebra: str
    raw_count: int
    volume: Fraction
    stabilized: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "n": self.n,
            "algebra": self.algebra,
            "raw_count": self.raw_count,
            "volume": f"{self.volume.numerator}/{self.volume.denominator}",
            "stabilized": self.stabilized,
        }


# Target normalization


def _normalize_target(algebra: str, n: int, coeffs: Sequence, p: int, N: int) -> list:
    if len(coeffs) != n:
        raise DomainError(f"expected {n} coefficients, got {len(coeffs)}")
    m = p**N
    if algebra == "u":
        out = []
        for c in coeffs:
            a, b = (c, 0) if isinstance(c, int) else c
            out.append((a % m, b % m))
        return out
    return [int(c) % m for c in coeffs]


# Per-matrix invariants used by the filters


def _regular_rep(rows, u: int, v: int) -> list[list[int]]:
    """Integer matrix of an O_E-matrix acting on coordinates (a, b) of a + b t."""
    size = len(rows)
    out = [[0] * (2 * size) for _ in range(2 * size)]
    for i in range(size):
        for j in range(size):
            a, b = rows[i][j]
            # multiplication by a + b t on the basis (1, t): 1 -> a + b t, t -> b v + (a + b u) t
            out[2 * i][2 * j] = a
            out[2 * i][2 * j + 1] = b * v
            out[2 * i + 1][2 * j] = b
            out[2 * i + 1][2 * j + 1] = a + b * u
    return out


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _int_matmul(x, y, m):
    k = len(y)
    return [[sum(x[i][t] * y[t][j] for t in range(k)) % m for j in range(len(y[0]))] for i in range(len(x))]


def _positive(exps: list[int], step: int = 1) -> tuple[int, ...]:
    return tuple(e for e in sorted(exps)[::step] if e > 0)


class _Classifier:
    """Computes the filter invariants of an integer (or regular-represented) matrix."""

    def __init__(self, algebra: str, n: int, p: int, N: int, flt: StratumFilter, quad=None):
        self.algebra, self.n, self.p, self.N, self.flt = algebra, n, p, N, flt
        self.quad = quad
        self.step = 2 if algebra == "u" else 1
        self.m = p**N
        if algebra == "sp":
            self.gram = [list(r) for r in standard_gram("sp", 2 * n)]

    def accepts(self, rows) -> bool:
        flt, p, N, m = self.flt, self.p, self.N, self.m
        if self.algebra == "u":
            u, v = self.quad
            flat = _regular_rep(rows, u, v)
        else:
            flat = [list(r) for r in rows]
        if flt.lattice_type is not None:
            t = _positive(elementary_divisor_exponents(flat, p, N), self.step)
            if t != tuple(flt.lattice_type):
                return False
        if flt.refined_t is not None:
            sq = _int_matmul(flat, flat, p)
            t = (_rank_mod_p(flat, p) - _rank_mod_p(sq, p)) // self.step
            if t != flt.refined_t:
                return False
        if flt.jordan_type is not None:
            if self.algebra == "gl":
                raise DomainError("Jordan types need a hermitian or symplectic algebra")
            if self.algebra == "u":
                u, v = self.quad
                conj_t = [[_sigma(rows[j][i], u) for j in range(self.n)] for i in range(self.n)]
                gram = _regular_rep(_pair_matmul(conj_t, rows, u, v, m), u, v)
            else:
                xt = [list(r) for r in zip(*flat)]
                gram = _int_matmul(_int_matmul(xt, self.gram, m), flat, m)
            jt = _positive(elementary_divisor_exponents(gram, p, N), self.step)
            if jt != tuple(flt.jordan_type):
                return False
        return True


def _sigma(x, u):
    return (x[0] + x[1] * u, -x[1])


def _pair_matmul(x, y, u, v, m):
    size = len(x)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            a = b = 0
            for k in range(size):
                (x0, x1), (y0, y1) = x[i][k], y[k][j]
                bd = x1 * y1
                a += x0 * y0 + bd * v
                b += x0 * y1 + x1 * y0 + bd * u
            row.append((a % m, b % m))
        out.append(row)
    return out


# Enumerators


def _gl_count(n, p, N, target, flt, budget, workers) -> int:
    m = p**N
    if flt.is_trivial():
        nodes = m ** (n * (n - 1)) if n > 1 else m
        if nodes > budget:
            raise BudgetError(f"{nodes} nodes exceed the budget {budget}")
        return _partitioned(kernels.count_charpoly_fiber, (n, p, N, list(target)), m**n if n > 1 else m, workers)
    nodes = m ** (n * n - 1)
    if nodes > budget:
        raise BudgetError(f"{nodes} nodes exceed the budget {budget}")
    classifier = _Classifier("gl", n, p, N, flt)
    want = tuple(target)
    trace = (-target[0]) % m
    total = 0
    for code in itertools.product(range(m), repeat=n * n - 1):
        entries = list(code)
        # the last diagonal entry is forced by the trace
        diag = sum(entries[i * n + i] for i in range(n - 1))
        entries.append((trace - diag) % m)
        rows = [entries[i * n : (i + 1) * n] for i in range(n)]
        coeffs = tuple(c % m for c in berkowitz(rows, 1, 0)[1:])
        if coeffs == want and classifier.accepts(rows):
            total += 1
    return total


def _alpha_scalar(target_trace, al_pair, m, p):
    """s with s * alpha = target_trace, or None when the trace is not a multiple of alpha."""
    if al_pair[1] % p:
        s = target_trace[1] * pow(al_pair[1], -1, m) % m
    else:
        s = target_trace[0] * pow(al_pair[0], -1, m) % m
    if (s * al_pair[0] - target_trace[0]) % m or (s * al_pair[1] - target_trace[1]) % m:
        return None
    return s


def _u_matrices(n: int, p: int, N: int, s_total: int) -> Iterator[list[list[tuple[int, int]]]]:
    """Anti-hermitian matrices over O_E/p^N whose diagonal scalars sum to s_total.

    Diagonal entries are base multiples of the unit alpha (alpha + sigma(alpha) = 0);
    above-diagonal entries are free and determine those below.
    """
    quad = QuadModulus.standard(p, N)
    m, u = p**N, quad.u
    al = alpha(quad)
    al_pair = (al.a.value, al.b.value)
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in itertools.product(range(m), repeat=n - 1):
        last = (s_total - sum(diag)) % m
        scalars = list(diag) + [last]
        for off in itertools.product(range(m), repeat=2 * len(upper)):
            x = [[(0, 0)] * n for _ in range(n)]
            for i, s in enumerate(scalars):
                x[i][i] = (s * al_pair[0] % m, s * al_pair[1] % m)
            for k, (i, j) in enumerate(upper):
                a, b = off[2 * k], off[2 * k + 1]
                x[i][j] = (a, b)
                c0, c1 = _sigma((a, b), u)
                x[j][i] = (-c0 % m, -c1 % m)
            yield x


def _u_count(n, p, N, target, flt, budget, workers) -> int:
    m = p**N
    nodes = m ** (n * n - 1)
    if nodes > budget:
        raise BudgetError(f"{nodes} nodes exceed the budget {budget}")
    quad = QuadModulus.standard(p, N)
    al = alpha(quad)
    al_pair = (al.a.value, al.b.value)
    trace_target = ((-target[0][0]) % m, (-target[0][1]) % m)
    s_total = _alpha_scalar(trace_target, al_pair, m, p)
    if s_total is None:
        return 0
    if flt.is_trivial():
        flat = [c for pair in target for c in pair]
        args = (n, p, N, quad.u, quad.v, al_pair[0], al_pair[1], s_total, flat)
        return _partitioned(kernels.count_u_fiber, args, m if n > 1 else 1, workers)
    mod = (quad.u, quad.v, m)
    one, zero = _Pair(1, 0, mod), _Pair(0, 0, mod)
    classifier = _Classifier("u", n, p, N, flt, quad=(quad.u, quad.v))
    total = 0
    for x in _u_matrices(n, p, N, s_total):
        rows = [[_Pair(a, b, mod) for a, b in r] for r in x]
        coeffs = berkowitz(rows, one, zero)[1:]
        if all((c.a % m, c.b % m) == t for c, t in zip(coeffs, target)) and classifier.accepts(x):
            total += 1
    return total


def _sp_count(n, p, N, target, flt, budget) -> int:
    m = p**N
    size = 2 * n
    params = n * (2 * n + 1)
    nodes = m**params
    if nodes > budget:
        raise BudgetError(f"{nodes} nodes exceed the budget {budget}")
    gram = standard_gram("sp", size)
    inverse = [[-gram[i][j] for j in range(size)] for i in range(size)]  # h^2 = -1
    slots = [(i, j) for i in range(size) for j in range(i, size)]
    classifier = _Classifier("sp", n, p, N, flt)
    want = tuple(target)
    total = 0
    for code in itertools.product(range(m), repeat=params):
        sym = [[0] * size for _ in range(size)]
        for (i, j), c in zip(slots, code):
            sym[i][j] = sym[j][i] = c
        # h X symmetric is exactly the symplectic condition
        x = _int_matmul(inverse, sym, m)
        coeffs = berkowitz(x, 1, 0)[1:]
        even = tuple(coeffs[k] % m for k in range(1, size, 2))
        if even == want and (flt.is_trivial() or classifier.accepts(x)):
            total += 1
    return total


def _raw_count(p, N, algebra, n, coeffs, flt, budget, workers) -> int:
    target = _normalize_target(algebra, n, coeffs, p, N)
    if algebra == "gl":
        return _gl_count(n, p, N, target, flt, budget, workers)
    if algebra == "u":
        return _u_count(n, p, N, target, flt, budget, workers)
    return _sp_count(n, p, N, target, flt, budget)


def _validate(p: int, N: int, algebra: str, n: int) -> None:
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    if N < 1 or n < 1:
        raise DomainError("precision and rank must be positive")
    if algebra not in ALGEBRAS:
        raise DomainError(f"unknown algebra {algebra!r}")


def count_fiber(
    p: int,
    N: int,
    algebra: str,
    n: int,
    coeffs: Sequence,
    flt: StratumFilter | None = None,
    budget: int | None = None,
    workers: int = 1,
    previous: VolumeEstimate | None = None,
) -> VolumeEstimate:
    """Count the fiber over ``coeffs`` at precision N and compare with precision N - 1.

    ``coeffs`` are (c_1, ..., c_n) of x^n + c_1 x^(n-1) + ... for gl and u
    (u coefficients as pairs (a, b) meaning a + b t), and the coefficients of
    x^(2n) + c_1 x^(2n-2) + ... + c_n for sp.  ``previous`` may supply the
    precision N - 1 estimate to avoid recounting it.
    """
    _validate(p, N, algebra, n)
    flt = flt or StratumFilter()
    budget = budget_from_env() if budget is None else budget
    raw = _raw_count(p, N, algebra, n, coeffs, flt, budget, workers)
    dim = fiber_dimension(algebra, n)
    volume = Fraction(raw, p ** (N * dim))
    if N == 1:
        stable = False
    else:
        if previous is None or previous.N != N - 1:
            try:
                prev_raw = _raw_count(p, N - 1, algebra, n, coeffs, flt, budget, workers)
                prev_volume = Fraction(prev_raw, p ** ((N - 1) * dim))
            except PrecisionError:
                # the filter cannot be evaluated one step lower, so nothing is certified
                prev_volume = None
        else:
            prev_volume = previous.volume
        stable = prev_volume == volume
    return VolumeEstimate(p, N, n, algebra, raw, volume, stable)


def stabilization_scan(
    p: int,
    n: int,
    algebra: str,
    coeffs: Sequence,
    N_range: Sequence[int],
    flt: StratumFilter | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> list[VolumeEstimate]:
    """Volume estimates for each precision in ``N_range`` (ascending, consecutive)."""
    out: list[VolumeEstimate] = []
    for N in N_range:
        prev = out[-1] if out and out[-1].N == N - 1 else None
        out.append(count_fiber(p, N, algebra, n, coeffs, flt, budget, workers, previous=prev))
    return out


def first_stable(estimates: Sequence[VolumeEstimate]) -> int | None:
    """The first N whose estimate equals the one at N - 1, if any."""
    for est in estimates:
        if est.stabilized:
            return est.N - 1
    return None
