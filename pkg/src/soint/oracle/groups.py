"""Exhaustive orders of finite classical groups, residue tori and nilpotent sets.

Groups are enumerated column by column: each new column is tested against
the columns already chosen, which keeps the search near the group order.
"""

from __future__ import annotations

import itertools

from ..errors import BudgetError, DomainError
from ..ring import is_prime, standard_gram
from .fibers import DEFAULT_BUDGET
from .finite_field import GF, field


def _check_q(q: int) -> None:
    if not is_prime(q):
        raise DomainError("the enumerators support prime residue fields only")


def _vectors(F: GF, n: int):
    return list(itertools.product(range(F.size), repeat=n))


def _dot(F: GF, x, y) -> int:
    s = 0
    for a, b in zip(x, y):
        s = F.add[s][F.mul[a][b]]
    return s


def _independent(F: GF, cols) -> bool:
    """Columns are linearly independent over F."""
    rows = [list(c) for c in cols]
    rank = 0
    width = len(rows[0]) if rows else 0
    for c in range(width):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = next(y for y in range(1, F.size) if F.mul[rows[rank][c]][y] == 1)
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = F.mul[rows[i][c]][inv]
                rows[i] = [F.sub(x, F.mul[f][y]) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank == len(rows)


def _backtrack(candidates, n_cols: int, compatible, budget: int) -> int:
    visited = 0
    count = 0

    def rec(chosen):
        nonlocal visited, count
        if len(chosen) == n_cols:
            count += 1
            return
        for v in candidates:
            visited += 1
            if visited > budget:
                raise BudgetError(f"group enumeration exceeded the budget {budget}")
            if compatible(chosen, v):
                rec(chosen + [v])

    rec([])
    return count


def gl_group_order(n: int, q: int, budget: int = DEFAULT_BUDGET) -> int:
    _check_q(q)
    F = field(q)
    vecs = _vectors(F, n)
    return _backtrack(vecs, n, lambda chosen, v: _independent(F, chosen + [v]), budget)


def unitary_group_order(n: int, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{g in GL_n(F_{q^2}) : sigma(g)^t g = 1}."""
    _check_q(q)
    F = field(q, 2)
    vecs = _vectors(F, n)

    def herm(x, y):
        return _dot(F, [F.frobenius(a) for a in x], y)

    def ok(chosen, v):
        if herm(v, v) != 1:
            return False
        return all(herm(c, v) == 0 for c in chosen)

    return _backtrack(vecs, n, ok, budget)


def symplectic_group_order(n: int, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{g in GL_2n(F_q) : g^t J g = J} for the standard antidiagonal J."""
    _check_q(q)
    F = field(q)
    size = 2 * n
    J = [[x % q for x in row] for row in standard_gram("sp", size)]
    vecs = _vectors(F, size)

    def form(x, y):
        s = 0
        for i in range(size):
            for j in range(size):
                if J[i][j] and x[i] and y[j]:
                    s = F.add[s][F.mul[J[i][j]][F.mul[x[i]][y[j]]]]
        return s

    def ok(chosen, v):
        k = len(chosen)
        if form(v, v) != J[k][k]:
            return False
        return all(form(c, v) == J[i][k] for i, c in enumerate(chosen))

    return _backtrack(vecs, size, ok, budget)


def norm_one_torus_order(q: int) -> int:
    _check_q(q)
    F = field(q, 2)
    return sum(1 for x in range(1, F.size) if F.mul[x][F.frobenius(x)] == 1)


# Truncated polynomial rings kappa'[x]/(x^e) for the residue tori


def _trunc_mul(F: GF, a, b, e: int):
    out = [0] * e
    for i, x in enumerate(a):
        if x:
            for j in range(e - i):
                out[i + j] = F.add[out[i + j]][F.mul[x][b[j]]]
    return tuple(out)


def residue_torus_order(case: str, n: int, q: int, d: int = 1) -> int:
    """Points of the reductive-quotient torus attached to a degree-n extension.

    The fixed field has residue degree d and ramification e = n / d, so the
    relevant ring is R = F_{q^d}[x]/(x^e).  ``split`` counts R^x, ``unramified``
    counts z in F_{q^2d}[x]/(x^e) with z sigma(z) = 1, and ``ramified`` counts
    (a, b) in R^2 with a^2 - x b^2 = 1.
    """
    _check_q(q)
    if d < 1 or n % d:
        raise DomainError("the residue degree must divide n")
    e = n // d
    if case == "split":
        F = field(q, d)
        return sum(1 for z in itertools.product(range(F.size), repeat=e) if z[0])
    if case == "unramified":
        F = field(q, 2 * d)
        one = (1,) + (0,) * (e - 1)
        total = 0
        for z in itertools.product(range(F.size), repeat=e):
            conj = tuple(F.frobenius(c, d) for c in z)
            if _trunc_mul(F, z, conj, e) == one:
                total += 1
        return total
    if case == "ramified":
        if q == 2:
            raise DomainError("the ramified torus count requires residue characteristic > 2")
        F = field(q, d)
        one = (1,) + (0,) * (e - 1)
        total = 0
        elems = list(itertools.product(range(F.size), repeat=e))
        for a in elems:
            a2 = _trunc_mul(F, a, a, e)
            for b in elems:
                xb2 = (0,) + _trunc_mul(F, b, b, e)[: e - 1]
                if tuple(F.sub(s, t) for s, t in zip(a2, xb2)) == one:
                    total += 1
        return total
    raise DomainError(f"unknown torus case {case!r}")


def enumerate_group(group: str, n: int, q: int, budget: int = DEFAULT_BUDGET, **options) -> int:
    """Order of GL_n, U_n, Sp_2n, the norm-one torus N1, or a residue torus T over F_q."""
    key = group.lower().replace("_", "").replace("-", "")
    if key == "gl":
        return gl_group_order(n, q, budget)
    if key == "u":
        return unitary_group_order(n, q, budget)
    if key == "sp":
        return symplectic_group_order(n, q, budget)
    if key in ("n1", "n1torus"):
        return norm_one_torus_order(q)
    if key in ("t", "torus"):
        return residue_torus_order(options.get("case", "split"), n, q, options.get("d", 1))
    raise DomainError(f"unknown group {group!r}")


def _nilpotent_regular(F: GF, rows) -> bool:
    """Nilpotent of rank size - 1."""
    size = len(rows)
    power = rows
    for _ in range(size - 1):
        power = [[_dot(F, r, [rows[k][j] for k in range(size)]) for j in range(size)] for r in power]
    if any(any(r) for r in power):
        return False
    return _rank(F, rows) == size - 1


def _rank(F: GF, rows) -> int:
    independent = [r for r in rows]
    # rank via row echelon over F
    a = [list(r) for r in independent]
    rank = 0
    for c in range(len(a[0])):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = next(y for y in range(1, F.size) if F.mul[a[rank][c]][y] == 1)
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = F.mul[a[i][c]][inv]
                a[i] = [F.sub(x, F.mul[f][y]) for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def enumerate_regular_nilpotents(group: str, n: int, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """Regular nilpotent elements of Lie(U_n) or Lie(Sp_2n) over F_q."""
    _check_q(q)
    key = group.lower().replace("_", "")
    if n == 0:
        return 1
    if key in ("u", "un"):
        F = field(q, 2)
        diag = [x for x in range(F.size) if F.add[x][F.frobenius(x)] == 0]
        upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
        nodes = len(diag) ** n * F.size ** len(upper)
        if nodes > budget:
            raise BudgetError(f"{nodes} candidates exceed the budget {budget}")
        total = 0
        for dv in itertools.product(diag, repeat=n):
            for off in itertools.product(range(F.size), repeat=len(upper)):
                x = [[0] * n for _ in range(n)]
                for i, a in enumerate(dv):
                    x[i][i] = a
                for (i, j), a in zip(upper, off):
                    x[i][j] = a
                    x[j][i] = F.neg[F.frobenius(a)]
                if _nilpotent_regular(F, x):
                    total += 1
        return total
    if key in ("sp", "sp2n"):
        F = field(q)
        size = 2 * n
        J = [[x % q for x in row] for row in standard_gram("sp", size)]
        Jinv = [[(-x) % q for x in row] for row in J]
        slots = [(i, j) for i in range(size) for j in range(i, size)]
        nodes = q ** len(slots)
        if nodes > budget:
            raise BudgetError(f"{nodes} candidates exceed the budget {budget}")
        total = 0
        for code in itertools.product(range(q), repeat=len(slots)):
            sym = [[0] * size for _ in range(size)]
            for (i, j), c in zip(slots, code):
                sym[i][j] = sym[j][i] = c
            x = [[sum(Jinv[i][k] * sym[k][j] for k in range(size)) % q for j in range(size)] for i in range(size)]
            if _nilpotent_regular(F, x):
                total += 1
        return total
    raise DomainError(f"unknown group {group!r}")
