"""Enumeration of sublattices with their types and Jordan types.

gl: every sublattice M of o^n with p^K o^n inside M and index p^K, listed
by Hermite normal form and typed by elementary divisors.

u and sp: every sublattice of type (d), listed by the canonical bases
(e_1 + a_1 e_k, ..., e_{k-1} + a_{k-1} e_k, p^d e_k, e_{k+1} + p a_{k+1} e_k, ...)
with a_i mod p^d before position k and p a_i mod p^d after it.  Two such bases
give the same lattice exactly when these data agree, so nothing is counted twice.
"""

from __future__ import annotations

import itertools
from collections import Counter

from ..errors import BudgetError, DomainError
from ..ring import QuadModulus, is_prime, standard_gram
from .fibers import DEFAULT_BUDGET
from .linalg import elementary_divisor_exponents

LatticeCounts = Counter  # keys: (lattice type, jordan type or None)


def _hnf_sublattices(n: int, p: int, K: int):
    """Row-style Hermite normal forms with determinant p^K."""
    for diag in itertools.product(range(K + 1), repeat=n):
        if sum(diag) != K:
            continue
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        ranges = [range(p ** diag[j]) for (i, j) in slots]
        for vals in itertools.product(*ranges):
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = p ** diag[i]
            for (i, j), v in zip(slots, vals):
                rows[i][j] = v
            yield rows


def _hnf_count_bound(n: int, p: int, K: int) -> int:
    total = 0
    for diag in itertools.product(range(K + 1), repeat=n):
        if sum(diag) == K:
            size = 1
            for i in range(n):
                for j in range(i + 1, n):
                    size *= p ** diag[j]
            total += size
    return total


def _type_of(rows, p: int, K: int) -> tuple[int, ...]:
    exps = elementary_divisor_exponents(rows, p, K + 1)
    return tuple(sorted(e for e in exps if e > 0))


def jordan_l_formula(a: list, k: int, d: int, quad: QuadModulus) -> int:
    """l = min(ord(1 + sum_{i<k} N(a_i) + p^2 sum_{i>k} N(a_i)), d) for pairs a_i = (x, y)."""
    p = quad.p
    m = p ** (d + 2)
    total = 1
    for i, (x, y) in enumerate(a):
        norm = (x * x + x * y * quad.u - y * y * quad.v) % m
        total += norm if i < k else p * p * norm
    total %= p**d
    if total == 0:
        return d
    l = 0
    while total % p == 0:
        total //= p
        l += 1
    return l


def _u_gram_exponents(basis_cols, quad: QuadModulus, d: int) -> list[int]:
    """Elementary-divisor exponents (over o_E) of the hermitian Gram matrix of the columns."""
    p = quad.p
    prec = 2 * d + 2
    m = p**prec
    u, v = quad.u % m, quad.v % m
    size = len(basis_cols)

    def mul(x, y):
        bd = x[1] * y[1]
        return ((x[0] * y[0] + bd * v) % m, (x[0] * y[1] + x[1] * y[0] + bd * u) % m)

    def sig(x):
        return ((x[0] + x[1] * u) % m, (-x[1]) % m)

    gram = [[(0, 0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            s = (0, 0)
            for coord in range(size):
                t = mul(sig(basis_cols[i][coord]), basis_cols[j][coord])
                s = (s[0] + t[0], s[1] + t[1])
            gram[i][j] = (s[0] % m, s[1] % m)
    # regular representation over the base: each exponent appears twice
    big = [[0] * (2 * size) for _ in range(2 * size)]
    for i in range(size):
        for j in range(size):
            a, b = gram[i][j]
            big[2 * i][2 * j], big[2 * i][2 * j + 1] = a, b * v
            big[2 * i + 1][2 * j], big[2 * i + 1][2 * j + 1] = b, a + b * u
    exps = sorted(elementary_divisor_exponents(big, p, prec))
    return exps[::2]


def _sp_gram_exponents(basis_cols, p: int, d: int) -> list[int]:
    size = len(basis_cols)
    prec = 2 * d + 2
    m = p**prec
    J = standard_gram("sp", size)
    gram = [
        [sum(basis_cols[i][r] * J[r][s] * basis_cols[j][s] for r in range(size) for s in range(size)) % m for j in range(size)]
        for i in range(size)
    ]
    return sorted(elementary_divisor_exponents(gram, p, prec))


def _canonical_bases(size: int, d: int, modulus: int, unit_count: int, p: int):
    """Yield (k, a) where a lists the parameters a_i (i != k) as residue codes.

    ``unit_count`` is the residue-ring size per coefficient component: the
    parameters before k are taken mod p^d, the ones after k mod p^(d-1).
    """
    for k in range(size):
        before = [range(p ** (d * unit_count))] * k
        after = [range(p ** ((d - 1) * unit_count))] * (size - k - 1)
        for params in itertools.product(*before, *after):
            yield k, params


def _decode(code: int, p: int, e: int, components: int):
    m = p**e
    out = []
    for _ in range(components):
        code, r = divmod(code, m)
        out.append(r)
    return tuple(out)


def enumerate_sublattices(
    p: int,
    n: int,
    K: int,
    flavor: str = "gl",
    budget: int = DEFAULT_BUDGET,
    method: str = "formula",
) -> Counter:
    """Counts of sublattices keyed by (lattice type, Jordan type or None).

    gl: all sublattices of index p^K in o^n.  u: type-(K) o_E-sublattices of
    o_E^n with the identity hermitian form; ``method`` selects the closed
    l-formula or an independent Gram-matrix diagonalization for the Jordan
    type.  sp: type-(K) sublattices of the rank 2n symplectic lattice.
    """
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    if K < 0 or n < 1:
        raise DomainError("need K >= 0 and n >= 1")
    out: Counter = Counter()
    if flavor == "gl":
        nodes = _hnf_count_bound(n, p, K)
        if nodes > budget:
            raise BudgetError(f"{nodes} lattices exceed the budget {budget}")
        for rows in _hnf_sublattices(n, p, K):
            out[(_type_of(rows, p, K), None)] += 1
        return out
    if K < 1:
        raise DomainError("flavored enumeration lists type-(d) lattices and needs d >= 1")
    d = K
    if flavor == "u":
        size, comps = n, 2
        quad = QuadModulus.standard(p, d + 2)
    elif flavor == "sp":
        size, comps = 2 * n, 1
        quad = None
    else:
        raise DomainError(f"unknown flavor {flavor!r}")
    nodes = sum(p ** (comps * (d * k + (d - 1) * (size - k - 1))) for k in range(size))
    if nodes > budget:
        raise BudgetError(f"{nodes} lattices exceed the budget {budget}")
    for k, params in _canonical_bases(size, d, p**d, comps, p):
        coeffs = []
        for idx, code in enumerate(params):
            e = d if idx < k else max(d - 1, 0)
            coeffs.append(_decode(code, p, e, comps) if comps == 2 else (code, 0))
        if flavor == "sp":
            cols = _sp_basis(size, k, d, [c[0] for c in coeffs], p)
            exps = _sp_gram_exponents(cols, p, d)
            jt = tuple(e for e in exps if e > 0)
        elif method == "formula":
            l = jordan_l_formula(coeffs, k, d, quad)
            jt = tuple(e for e in (l, 2 * d - l) if e > 0)
        elif method == "gram":
            cols = _u_basis(size, k, d, coeffs, p)
            jt = tuple(e for e in _u_gram_exponents(cols, quad, d) if e > 0)
        else:
            raise DomainError(f"unknown method {method!r}")
        out[((d,), jt)] += 1
    return out


def _u_basis(size: int, k: int, d: int, coeffs, p: int):
    cols = []
    idx = 0
    for i in range(size):
        col = [(0, 0)] * size
        if i == k:
            col[k] = (p**d, 0)
        else:
            a = coeffs[idx]
            idx += 1
            col[i] = (1, 0)
            scale = 1 if i < k else p
            col[k] = (a[0] * scale, a[1] * scale)
        cols.append(col)
    return cols


def _sp_basis(size: int, k: int, d: int, coeffs, p: int):
    cols = []
    idx = 0
    for i in range(size):
        col = [0] * size
        if i == k:
            col[k] = p**d
        else:
            a = coeffs[idx]
            idx += 1
            col[i] = 1
            col[k] = a if i < k else p * a
        cols.append(col)
    return cols
