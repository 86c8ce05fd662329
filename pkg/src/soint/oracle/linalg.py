"""Exact integer linear algebra used by the oracles."""

from __future__ import annotations

from typing import Sequence

from ..errors import PrecisionError
from ..ring import int_valuation, AtLeast


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    return a, x0, y0


def integer_kernel_basis(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """A Z-basis of {y in Z^c : A y = 0}; the kernel is automatically saturated.

    Unimodular column operations bring A to column echelon form while the
    same operations act on an identity block; the identity columns sitting
    under zero columns of A span the kernel.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    columns = [[matrix[i][j] for i in range(rows)] + [int(k == j) for k in range(cols)] for j in range(cols)]
    k = 0
    for i in range(rows):
        for j in range(k + 1, cols):
            b = columns[j][i]
            if b == 0:
                continue
            a = columns[k][i]
            g, x, y = _egcd(a, b)
            ca, cb = columns[k], columns[j]
            columns[k] = [x * s + y * t for s, t in zip(ca, cb)]
            columns[j] = [(a // g) * t - (b // g) * s for s, t in zip(ca, cb)]
        if k < cols and columns[k][i] != 0:
            k += 1
            if k == cols:
                break
    return [col[rows:] for col in columns[k:]]


def elementary_divisor_exponents(matrix: Sequence[Sequence[int]], p: int, prec: int) -> list[int]:
    """Valuations of the elementary divisors of an integer matrix read modulo p^prec.

    Raises PrecisionError when a pivot saturates, since truncation cannot
    certify a valuation of prec or more.
    """
    m = p**prec
    a = [[x % m for x in row] for row in matrix]
    n_rows = len(a)
    n_cols = len(a[0]) if n_rows else 0
    out = []
    for k in range(min(n_rows, n_cols)):
        best = None
        for i in range(k, n_rows):
            for j in range(k, n_cols):
                v = int_valuation(a[i][j], p, prec)
                if not isinstance(v, AtLeast) and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise PrecisionError(
                f"elementary divisor {k + 1} is not certified below precision {prec}", prec + 1
            )
        v, bi, bj = best
        a[k], a[bi] = a[bi], a[k]
        for row in a:
            row[k], row[bj] = row[bj], row[k]
        pv = p**v
        inv = pow(a[k][k] // pv, -1, m)
        for i in range(k + 1, n_rows):
            if a[i][k]:
                f = (a[i][k] // pv) * inv % m
                a[i] = [(x - f * y) % m for x, y in zip(a[i], a[k])]
        for j in range(k + 1, n_cols):
            if a[k][j]:
                f = (a[k][j] // pv) * inv % m
                for i in range(n_rows):
                    a[i][j] = (a[i][j] - f * a[i][k]) % m
        out.append(v)
    return out
