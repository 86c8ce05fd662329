"""Small finite fields F_{p^k} with table-driven arithmetic, for group enumeration."""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import DomainError
from ..ring import is_prime


def _poly_mulmod(a: tuple[int, ...], b: tuple[int, ...], modulus: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Product of coefficient vectors (low degree first) reduced by a monic modulus."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for i in range(k + 1):
                prod[deg - k + i] = (prod[deg - k + i] - c * modulus[i]) % p
    return tuple(prod[:k])


def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k over F_p (low degree first), by exhaustive root-free test."""
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        modulus = tail + (1,)
        if tail[0] == 0:
            continue
        if _is_irreducible(modulus, p):
            return modulus
    raise AssertionError("irreducible polynomials exist in every degree")


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if _divides(tail + (1,), modulus, p):
                return False
    return True


def _divides(f: tuple[int, ...], g: tuple[int, ...], p: int) -> bool:
    r = list(g)
    df = len(f) - 1
    for deg in range(len(r) - 1, df - 1, -1):
        c = r[deg]
        if c:
            for i in range(df + 1):
                r[deg - df + i] = (r[deg - df + i] - c * f[i]) % p
    return not any(r[:df])


class GF:
    """F_{p^k}; elements are integers 0..p^k - 1 encoding base-p coefficient vectors."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p) or k < 1:
            raise DomainError("finite fields need a prime characteristic and positive degree")
        self.p, self.k = p, k
        self.size = p**k
        self.modulus = _irreducible(p, k)
        vecs = [self._vec(x) for x in range(self.size)]
        self.add = [[self._code(tuple((a + b) % p for a, b in zip(vecs[x], vecs[y]))) for y in range(self.size)] for x in range(self.size)]
        self.neg = [self._code(tuple((-a) % p for a in vecs[x])) for x in range(self.size)]
        self.mul = [[self._code(_poly_mulmod(vecs[x], vecs[y], self.modulus, p)) for y in range(self.size)] for x in range(self.size)]

    def _vec(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def _code(self, v: tuple[int, ...]) -> int:
        return sum(c * self.p**i for i, c in enumerate(v))

    def sub(self, x: int, y: int) -> int:
        return self.add[x][self.neg[y]]

    def power(self, x: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul[out][x]
        return out

    def frobenius(self, x: int, times: int = 1) -> int:
        """x -> x^(p^times)."""
        return self.power(x, self.p**times)

    def embed(self, a: int) -> int:
        """Image of the prime-field element a."""
        return a % self.p

    def subfield(self, d: int) -> list[int]:
        """Elements of the unique subfield of degree d."""
        if self.k % d:
            raise DomainError(f"F_{self.size} has no subfield of degree {d}")
        return [x for x in range(self.size) if self.frobenius(x, d) == x]


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> GF:
    return GF(p, k)
