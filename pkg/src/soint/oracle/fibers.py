"""Exhaustive point counts of special fibers over the residue field.

gl shapes are described by an exponent pattern (entry (i, j) is p^E_ij times a
residue-field variable), the row exponents defining surjectivity onto M, the
exponents by which each characteristic polynomial coordinate is divided, and
the residue targets.  The compiled kernel walks them.

u and sp shapes are linear-constrained: the defining condition
hX + sigma(X^t) h = 0 is solved over Z first, giving a saturated integral
basis of the affine space, whose reduction is then enumerated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ..counting import Gl3Case, GlRefined, GlTypeK1, SpDn, UDn
from ..errors import BudgetError, DomainError
from ..ring import QuadModulus, berkowitz, is_prime
from . import kernels
from .linalg import integer_kernel_basis

DEFAULT_BUDGET = 2**30

MODE_EQUAL, MODE_NONZERO, MODE_ANY = 0, 1, 2


@dataclass
class GlFiberShape:
    """Congruence description of a gl special fiber."""

    n: int
    exps: list[list[int]]
    row_exps: list[int]
    coord_exps: list[int]
    modes: list[int]
    values: list[int]
    units: list[tuple[int, int]] = field(default_factory=list)
    rank_block: int = 0
    rank_required: int = 0
    cofactor_block: int = 0
    cofactor_allowed: list[list[int]] = field(default_factory=list)

    def validate(self) -> None:
        n = self.n
        if len(self.exps) != n or any(len(r) != n for r in self.exps):
            raise DomainError("exponent pattern must be n x n")
        for i in range(n):
            if any(e < self.row_exps[i] for e in self.exps[i]):
                raise DomainError("row exponent exceeds an entry exponent")
        if self.rank_block >= n or self.cofactor_block >= n:
            raise DomainError("rank and cofactor conditions must only involve the top rows")


def _irreducible_cubic(p: int) -> tuple[int, int, int]:
    """Coefficients (c1, c2, c3) of the first irreducible monic cubic over F_p in lexicographic order."""
    for c in itertools.product(range(p), repeat=3):
        if c[2] and all((x**3 + c[0] * x * x + c[1] * x + c[2]) % p for x in range(p)):
            return c
    raise AssertionError("every prime field has an irreducible cubic")


def gl_shape(shape, p: int, unit_value: int = 1, free_value: int = 0) -> GlFiberShape:
    """Translate a counting-module shape into an explicit congruence description.

    ``unit_value`` is the prescribed nonzero residue of the last coordinate and
    ``free_value`` the prescribed residue of coordinates whose value does not
    affect the count.
    """
    if isinstance(shape, GlTypeK1):
        n, k1 = shape.n, shape.k1
        exps = [[0] * n for _ in range(n - 1)] + [[k1] * n]
        return GlFiberShape(
            n, exps, [0] * (n - 1) + [k1], [0] * (n - 1) + [k1],
            [MODE_EQUAL] * n, [0] * (n - 1) + [unit_value],
        )
    if isinstance(shape, GlRefined):
        n, k1, k2 = shape.n, shape.k1, shape.k2
        exps = [[1] + [0] * (n - 1) for _ in range(n - 2)] + [[k1] * n, [k2] * n]
        allowed = [[0 if (j == 0 and i < n - 2) else 1 for j in range(n - 1)] for i in range(n - 1)]
        strict = k1 < k2
        return GlFiberShape(
            n,
            exps,
            [0] * (n - 2) + [k1, k2],
            [0] * (n - 3) + [1, k1, k1 + k2],
            [MODE_EQUAL] * n,
            [0] * (n - 3) + [free_value, 0, unit_value],
            rank_block=n - 2,
            rank_required=n - 3,
            cofactor_block=n - 1 if strict else 0,
            cofactor_allowed=allowed if strict else [],
        )
    if isinstance(shape, Gl3Case):
        shape.check()
        k1, k2 = shape.k1, shape.k2
        d = k1 + k2
        t = -(-d // 3)
        l = shape.l
        case = shape.case
        if case == 3:
            exps = [[0, 0, 0], [k1] * 3, [k1] * 3]
            return GlFiberShape(3, exps, [0, k1, k1], [0, k1, 2 * k1], [MODE_EQUAL] * 3, [0, 0, unit_value])
        top = shape.l_max()
        unit = (1, 0) if l < top else (0, 1)
        if case == 1:
            exps = [[k1, k1 - l, 0], [k1 + l, k1, k1], [k2] * 3]
            coord = [k1, 2 * k1, d]
            modes, values = [MODE_EQUAL] * 3, [0, 0, unit_value]
        elif case == 2:
            exps = [[t, k2 - k1 - l, 0], [k1 + l, k1, k1], [k2] * 3]
            coord = [t, k2, d]
            modes, values = [MODE_EQUAL] * 3, [free_value, 0, unit_value]
        else:
            exps = [[t, t - l, 0], [t + l, t, t], [2 * t] * 3]
            coord = [t, 2 * t, 3 * t]
            modes, values = [MODE_EQUAL] * 3, list(_irreducible_cubic(p))
        return GlFiberShape(3, exps, [0, exps[1][1], exps[2][0]], coord, modes, values, units=[unit])
    raise DomainError(f"{shape!r} is not a gl shape")


def count_gl_shape(spec: GlFiberShape, p: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    spec.validate()
    n = spec.n
    nodes = p ** (n * n)
    if nodes > budget:
        raise BudgetError(f"{nodes} candidate matrices exceed the budget {budget}")
    flat = [e for row in spec.exps for e in row]
    units = [i * n + j for i, j in spec.units]
    allowed = [a for row in spec.cofactor_allowed for a in row]
    args = (
        n, p, flat, list(spec.row_exps), list(spec.coord_exps), list(spec.modes), list(spec.values),
        units, spec.rank_block, spec.rank_required, spec.cofactor_block, allowed,
    )
    return _partitioned(kernels.kappa_fiber_gl, args, p**n, workers)


def _run_partition(func, args, lo, hi):
    return func(*args, lo, hi)


def _partitioned(func, args, first_count: int, workers: int) -> int:
    """Split the first-row range into independent pieces and add the results."""
    if workers <= 1 or first_count < 2:
        return func(*args, 0, first_count)
    from concurrent.futures import ProcessPoolExecutor

    step = -(-first_count // workers)
    bounds = [(lo, min(lo + step, first_count)) for lo in range(0, first_count, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_partition, func, args, lo, hi) for lo, hi in bounds]
        return sum(f.result() for f in futures)


# Quadratic-extension arithmetic on integer pairs (a, b) meaning a + b t.


class _Pair:
    __slots__ = ("a", "b", "mod")

    def __init__(self, a, b, mod):
        self.a, self.b, self.mod = a, b, mod

    def __add__(self, o):
        return _Pair(self.a + o.a, self.b + o.b, self.mod)

    def __sub__(self, o):
        return _Pair(self.a - o.a, self.b - o.b, self.mod)

    def __neg__(self):
        return _Pair(-self.a, -self.b, self.mod)

    def __mul__(self, o):
        u, v, m = self.mod
        bd = self.b * o.b
        a = self.a * o.a + bd * v
        b = self.a * o.b + self.b * o.a + bd * u
        if m:
            a, b = a % m, b % m
        return _Pair(a, b, self.mod)


def _pair_sigma(x: tuple[int, int], u: int) -> tuple[int, int]:
    return x[0] + x[1] * u, -x[1]


def _pair_mul(x, y, u, v):
    bd = x[1] * y[1]
    return x[0] * y[0] + bd * v, x[0] * y[1] + x[1] * y[0] + bd * u


@dataclass
class FlavoredFiberResult:
    count: int
    dimension: int


def _flavored_setup(shape, p: int, xi: int | None, b_value: int):
    """Gram matrix, entry exponents and coordinate data for a u or sp shape."""
    if isinstance(shape, UDn):
        n = shape.n
        size = n
        d_n = shape.d_n
        d_tilde = shape.d_prev if shape.d_prev < d_n else d_n
        quad = QuadModulus.standard(p, 1)
        u, v = (-1, -1) if p == 2 else (0, quad.v)
        if shape.d_prev < d_n:
            a_val = p**shape.d_prev
        else:
            a_val = 0 if xi is None else p**xi
            if xi is not None and xi < d_n:
                raise DomainError("the Gram corner exponent must be at least d_n")
        gram = [[(0, 0)] * size for _ in range(size)]
        gram[0][0] = (a_val, 0)
        gram[0][size - 1] = (1, 0)
        gram[size - 1][0] = (1, 0)
        gram[size - 1][size - 1] = (b_value, 0)
        for i in range(1, size - 1):
            gram[i][i] = (1, 0)
        flavor = "u"
    elif isinstance(shape, SpDn):
        n = shape.n
        size = 2 * n
        d_n = shape.d_n
        d_tilde = d_n
        u, v = 0, 0
        gram = [[(0, 0)] * size for _ in range(size)]
        half = size // 2
        for i in range(size):
            gram[i][size - 1 - i] = ((1 if i < half else -1), 0)
        flavor = "sp"
    else:
        raise DomainError(f"{shape!r} is not a u or sp shape")
    exps = [[0] * size for _ in range(size)]
    for i in range(size - 1):
        exps[i][0] = d_tilde
    for j in range(size):
        exps[size - 1][j] = d_n
    return flavor, n, size, d_n, d_tilde, (u, v), gram, exps


def count_flavored_shape(
    shape,
    p: int,
    targets: Sequence[tuple[int, int]] | None = None,
    xi: int | None = None,
    b_value: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> FlavoredFiberResult:
    """Count residue points of the type-(d_n) fiber for u_n or sp_2n.

    ``targets`` fixes the residues (as pairs a + b t) of the last two
    coordinates; by default the last coordinate is a fixed nonzero element of
    its line and the second-to-last is nonzero exactly when d_{n-1} <= d_n.
    """
    if not is_prime(p):
        raise DomainError("p must be prime")
    flavor, n, size, d_n, d_tilde, (u, v), gram, exps = _flavored_setup(shape, p, xi, b_value)
    quad = flavor == "u"
    comps = 2 if quad else 1
    nvars = size * size * comps

    def build(vec):
        x = [[None] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                k = (i * size + j) * comps
                a = vec[k]
                b = vec[k + 1] if quad else 0
                scale = p ** exps[i][j]
                x[i][j] = (a * scale, b * scale)
        return x

    def defect(vec):
        x = build(vec)
        out = []
        for i in range(size):
            for j in range(size):
                s = (0, 0)
                for k in range(size):
                    t1 = _pair_mul(gram[i][k], x[k][j], u, v)
                    t2 = _pair_mul(_pair_sigma(x[k][i], u), gram[k][j], u, v)
                    s = (s[0] + t1[0] + t2[0], s[1] + t1[1] + t2[1])
                out.append(s[0])
                if quad:
                    out.append(s[1])
        return out

    columns = []
    for k in range(nvars):
        e = [0] * nvars
        e[k] = 1
        columns.append(defect(e))
    matrix = [[columns[k][r] for k in range(nvars)] for r in range(len(columns[0]))]
    basis = integer_kernel_basis(matrix)
    dim = len(basis)
    expected = n * n if flavor == "u" else n * (2 * n + 1)
    if dim != expected:
        raise ArithmeticError(f"constraint space has dimension {dim}, expected {expected}")
    if p**dim > budget:
        raise BudgetError(f"{p ** dim} residue points exceed the budget {budget}")

    big = d_n + 1
    m = p**big
    basis = [[c % m for c in b] for b in basis]
    mod = (u % m, v % m, m)
    zero, one = _Pair(0, 0, mod), _Pair(1, 0, mod)

    if flavor == "u":
        coord_idx = list(range(size))
        coord_exps = [0] * (size - 2) + [d_tilde, d_n]
    else:
        coord_idx = [2 * i + 1 for i in range(n)]
        coord_exps = [0] * (n - 1) + [d_n]
    if targets is None:
        targets = _default_targets(flavor, n, shape, p)

    count = 0
    for lam in itertools.product(range(p), repeat=dim):
        vec = [0] * nvars
        for coeff, b in zip(lam, basis):
            if coeff:
                for k, c in enumerate(b):
                    if c:
                        vec[k] += coeff * c
        x = build([c % m for c in vec])
        if not _surjective(x, exps, size, p, u, v, d_n):
            continue
        rows = [[_Pair(e[0] % m, e[1] % m, mod) for e in row] for row in x]
        coeffs = berkowitz(rows, one, zero)[1:]
        ok = True
        for pos, (ci, e) in enumerate(zip(coord_idx, coord_exps)):
            c = coeffs[ci]
            pe = p**e
            if c.a % pe or c.b % pe:
                raise ArithmeticError("coordinate is not divisible by its prescribed power")
            red = ((c.a // pe) % p, (c.b // pe) % p)
            if pos < len(coord_idx) - 2:
                want = (0, 0)
            else:
                want = targets[pos - (len(coord_idx) - 2)]
                if want is None:
                    want = (0, 0)
            if red != (want[0] % p, want[1] % p):
                ok = False
                break
        if flavor == "sp" and ok:
            for ci in range(0, size, 2):
                c = coeffs[ci]
                if c.a % p or c.b % p:
                    raise ArithmeticError("odd coefficient of a symplectic matrix is nonzero")
        if ok:
            count += 1
    return FlavoredFiberResult(count, dim)


def _line_element(parity_odd: bool, p: int) -> tuple[int, int]:
    """A nonzero residue in the line A_i: imaginary for odd i, real for even i."""
    if parity_odd:
        return (1, 2) if p == 2 else (0, 1)
    return (1, 0)


def _default_targets(flavor: str, n: int, shape, p: int):
    if flavor == "sp":
        return [(0, 0), (1, 0)]
    last = _line_element(n % 2 == 1, p)
    if shape.d_prev <= shape.d_n:
        prev = _line_element((n - 1) % 2 == 1, p)
    else:
        prev = (0, 0)
    return [prev, last]


def _surjective(x, exps, size, p, u, v, d_n) -> bool:
    """The map L -> M is onto: the matrix with the last row divided by p^d_n is invertible mod p."""
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            a, b = x[i][j]
            if i == size - 1:
                a //= p**d_n
                b //= p**d_n
            row.append((a % p, b % p))
        rows.append(row)
    return _det_quad_mod_p(rows, p, u % p, v % p) != (0, 0)


def _det_quad_mod_p(rows, p, u, v) -> tuple[int, int]:
    mod = (u, v, p)
    entries = [[_Pair(a, b, mod) for a, b in r] for r in rows]
    c = berkowitz(entries, _Pair(1, 0, mod), _Pair(0, 0, mod))[-1]
    sign = -1 if len(rows) % 2 else 1
    return ((sign * c.a) % p, (sign * c.b) % p)


def enumerate_kappa_fiber(q: int, shape, budget: int = DEFAULT_BUDGET, **options) -> int:
    """Exhaustive count of residue points for any counting-module shape at prime q."""
    if isinstance(shape, (UDn, SpDn)):
        return count_flavored_shape(shape, q, budget=budget, **options).count
    return count_gl_shape(gl_shape(shape, q, **options), q, budget=budget)
