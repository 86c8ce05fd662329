"""Pure-Python enumeration kernels.

These mirror ``_kernels.pyx`` function for function and are used when the
compiled extension is unavailable.  Both walk the top n-1 rows of a matrix
exhaustively and treat the last row analytically: every characteristic
polynomial coefficient is affine in the entries of any single row.
"""

from __future__ import annotations

from ..ring import berkowitz, charpoly_mod


def _digits(code: int, base: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        code, r = divmod(code, base)
        out.append(r)
    return out


def _valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    k = 0
    while x % p == 0 and k < cap:
        x //= p
        k += 1
    return k


def count_linear_solutions(matrix: list[list[int]], rhs: list[int], p: int, prec: int) -> int:
    """Number of y in (Z/p^prec)^n with matrix . y = rhs, by Smith-style reduction."""
    m = p**prec
    a = [[x % m for x in row] for row in matrix]
    b = [x % m for x in rhs]
    rows, cols = len(a), len(a[0]) if a else 0
    total = 1
    k = 0
    while k < min(rows, cols):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if a[i][j]:
                    v = _valuation(a[i][j], p, prec)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        a[k], a[pi] = a[pi], a[k]
        b[k], b[pi] = b[pi], b[k]
        for row in a:
            row[k], row[pj] = row[pj], row[k]
        pv = p**v
        unit_inv = pow(a[k][k] // pv, -1, m)
        for i in range(k + 1, rows):
            if a[i][k]:
                f = (a[i][k] // pv) * unit_inv % m
                a[i] = [(x - f * y) % m for x, y in zip(a[i], a[k])]
                b[i] = (b[i] - f * b[k]) % m
        for j in range(k + 1, cols):
            a[k][j] = 0
        if b[k] % pv:
            return 0
        total *= pv
        k += 1
    for i in range(k, rows):
        if b[i]:
            return 0
    return total * m ** (cols - k)


def _charpoly_last_row_affine(top: list[list[int]], last_exps: list[int], n: int, p: int, m: int):
    """Base coefficients (last row zero) and per-column slopes, all mod m."""
    base = charpoly_mod(top + [[0] * n], m)
    slopes = []
    for j in range(n):
        row = [0] * n
        row[j] = p ** last_exps[j]
        c = charpoly_mod(top + [row], m)
        slopes.append([(c[i] - base[i]) % m for i in range(n)])
    return base, slopes


def count_charpoly_fiber(n: int, p: int, prec: int, target: list[int], first_lo: int, first_hi: int) -> int:
    """#{X in M_n(Z/p^prec) : charpoly(X) = target} for first-row codes in [first_lo, first_hi)."""
    m = p**prec
    if n == 1:
        return sum(1 for x in range(first_lo, first_hi) if (-x) % m == target[0] % m)
    rest = (n - 2) * n
    total = 0
    for first in range(first_lo, first_hi):
        row0 = _digits(first, m, n)
        for code in range(m**rest):
            digits = _digits(code, m, rest)
            top = [row0] + [digits[i * n : (i + 1) * n] for i in range(n - 2)]
            base, slopes = _charpoly_last_row_affine(top, [0] * n, n, p, m)
            matrix = [[slopes[j][i] for j in range(n)] for i in range(n)]
            rhs = [(target[i] - base[i]) % m for i in range(n)]
            total += count_linear_solutions(matrix, rhs, p, prec)
    return total


def count_charpoly_naive(n: int, p: int, prec: int, target: list[int]) -> int:
    """Reference count visiting every matrix; used to validate the pruned kernel."""
    m = p**prec
    want = tuple(t % m for t in target)
    total = 0
    for code in range(m ** (n * n)):
        d = _digits(code, m, n * n)
        rows = [d[i * n : (i + 1) * n] for i in range(n)]
        if charpoly_mod(rows, m) == want:
            total += 1
    return total


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    a = [list(r) for r in rows]
    s = len(a)
    det = 1
    for k in range(s):
        piv = next((i for i in range(k, s) if a[i][k] % p), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, s):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return det % p


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    a = [list(r) for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for i in range(len(a)):
            if i != rank and a[i][c] % p:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _minor(rows: list[list[int]], i: int, j: int) -> list[list[int]]:
    return [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]


def _cofactor_ok(block: list[list[int]], allowed: list[int], p: int) -> bool:
    s = len(block)
    for i in range(s):
        for j in range(s):
            if allowed[i * s + j] and _det_mod_p(_minor(block, i, j), p):
                return True
    return False


def kappa_fiber_gl(
    n: int,
    p: int,
    exps: list[int],
    row_exps: list[int],
    coord_exps: list[int],
    modes: list[int],
    values: list[int],
    units: list[int],
    rank_block: int,
    rank_required: int,
    cof_block: int,
    cof_allowed: list[int],
    first_lo: int,
    first_hi: int,
) -> int:
    """Count F_p-points of a congruence-shaped gl special fiber.

    Entry (i, j) is p^exps[i*n+j] * y_ij with y_ij in [0, p).  Coordinate i is
    c_i / p^coord_exps[i] mod p where c_i is the characteristic polynomial
    coefficient.  Mode 0 requires it to equal values[i], mode 1 requires it to
    be nonzero, mode 2 leaves it free.  The open conditions are: X with row i
    divided by p^row_exps[i] is invertible mod p, every listed unit entry
    y_ij is nonzero, the leading rank_block square of that matrix has rank
    rank_required, and some allowed cofactor of its leading cof_block square
    is nonzero.
    """
    big = max(coord_exps) + 1
    m = p**big
    last = n - 1
    top_count = n * (n - 1)
    live = [[exps[i * n + j] == row_exps[i] for j in range(n)] for i in range(n)]
    top_units = [u for u in units if u < top_count]
    last_units = [u - top_count for u in units if u >= top_count]
    pe = [p**e for e in coord_exps]
    total = 0
    for first in range(first_lo, first_hi):
        row0 = _digits(first, p, n)
        for code in range(p ** (top_count - n)):
            y = row0 + _digits(code, p, top_count - n)
            if any(y[u] == 0 for u in top_units):
                continue
            reduced = [[y[i * n + j] if live[i][j] else 0 for j in range(n)] for i in range(last)]
            if rank_block and _rank_mod_p([r[:rank_block] for r in reduced[:rank_block]], p) != rank_required:
                continue
            if cof_block and not _cofactor_ok([r[:cof_block] for r in reduced[:cof_block]], cof_allowed, p):
                continue
            top = [[y[i * n + j] * p ** exps[i * n + j] % m for j in range(n)] for i in range(last)]
            base, slopes = _charpoly_last_row_affine(top, exps[last * n :], n, p, m)
            f0, g = [], []
            for i in range(n):
                if base[i] % pe[i]:
                    raise ArithmeticError("shape exponents do not divide the base coefficient")
                f0.append(base[i] // pe[i] % p)
                row = []
                for j in range(n):
                    if slopes[j][i] % pe[i]:
                        raise ArithmeticError("shape exponents do not divide a slope coefficient")
                    row.append(slopes[j][i] // pe[i] % p)
                g.append(row)
            cof = []
            for j in range(n):
                sign = -1 if (last + j) % 2 else 1
                cof.append(sign * _det_mod_p(_minor(reduced + [[0] * n], last, j), p) % p if live[last][j] else 0)
            for lcode in range(p**n):
                z = _digits(lcode, p, n)
                if any(z[u] == 0 for u in last_units):
                    continue
                if sum(c * zz for c, zz in zip(cof, z)) % p == 0:
                    continue
                ok = True
                for i in range(n):
                    f = (f0[i] + sum(g[i][j] * z[j] for j in range(n))) % p
                    mode = modes[i]
                    if (mode == 0 and f != values[i] % p) or (mode == 1 and f == 0):
                        ok = False
                        break
                if ok:
                    total += 1
    return total


def count_u_fiber(n, p, prec, u, v, al_re, al_im, s_total, target, first_lo, first_hi) -> int:
    """Anti-hermitian X over (Z/p^prec)[t] with diagonal s_i * alpha and sum s_i = s_total.

    ``target`` is the flat list (re_1, im_1, ..., re_n, im_n) of charpoly
    coefficients.  The partition index is the first diagonal scalar.
    """
    from .fibers import _Pair

    m = p**prec
    mod = (u % m, v % m, m)
    one, zero = _Pair(1, 0, mod), _Pair(0, 0, mod)
    want = [t % m for t in target]
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    free_count = (n - 2 if n >= 2 else 0) + 2 * len(upper)
    total = 0
    for first in range(first_lo, first_hi):
        for code in range(m**free_count):
            digits = _digits(code, m, free_count)
            if n == 1:
                scalars = [s_total % m]
            else:
                middle = digits[: n - 2]
                scalars = [first] + middle + [(s_total - first - sum(middle)) % m]
            x = [[zero] * n for _ in range(n)]
            for i, s in enumerate(scalars):
                x[i][i] = _Pair(s * al_re % m, s * al_im % m, mod)
            for k, (i, j) in enumerate(upper):
                a, b = digits[n - 2 + 2 * k], digits[n - 2 + 2 * k + 1]
                x[i][j] = _Pair(a, b, mod)
                x[j][i] = _Pair((-(a + b * u)) % m, b, mod)
            coeffs = berkowitz(x, one, zero)[1:]
            if all(c.a % m == want[2 * i] and c.b % m == want[2 * i + 1] for i, c in enumerate(coeffs)):
                total += 1
    return total
