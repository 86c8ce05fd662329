"""Arithmetic in Z/p^N, its unramified quadratic extension, and matrices over them.

Elements are immutable.  Combining elements of different precision (or of
different primes, or different quadratic moduli) raises ``DomainError``:
silently coercing would corrupt valuations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class AtLeast:
    """Saturated valuation: the element is zero at the working precision."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


def int_valuation(value: int, p: int, cap: int) -> int | AtLeast:
    """Order of ``value`` at ``p`` when it is below ``cap``, else ``AtLeast(cap)``."""
    value %= p**cap
    if value == 0:
        return AtLeast(cap)
    k = 0
    while value % p == 0:
        value //= p
        k += 1
    return k


@dataclass(frozen=True)
class TruncatedInt:
    """A residue class in Z/p^N."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise DomainError("precision must be at least 1")
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if not 0 <= self.value < self.p**self.precision:
            raise DomainError("value must lie in [0, p^N); use TruncatedInt.of to reduce")

    @classmethod
    def of(cls, p: int, precision: int, value: int) -> "TruncatedInt":
        return cls(p, precision, value % p**precision)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def _coerce(self, other) -> int:
        if isinstance(other, TruncatedInt):
            if other.p != self.p or other.precision != self.precision:
                raise DomainError(
                    f"mixed precision: Z/{self.p}^{self.precision} vs Z/{other.p}^{other.precision}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _make(self, value: int) -> "TruncatedInt":
        return TruncatedInt(self.p, self.precision, value % self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._make(pow(self.value, k, self.modulus))

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> "TruncatedInt":
        if not self.is_unit():
            raise DomainError(f"{self.value} is not a unit mod {self.p}^{self.precision}")
        return self._make(pow(self.value, -1, self.modulus))

    def val(self) -> int | AtLeast:
        return int_valuation(self.value, self.p, self.precision)

    def reduce(self, precision: int) -> "TruncatedInt":
        if precision > self.precision:
            raise DomainError("cannot raise precision by reduction")
        return TruncatedInt(self.p, precision, self.value % self.p**precision)

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p}^{self.precision})"


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue modulo an odd prime."""
    if p == 2:
        raise DomainError("p = 2 has no quadratic non-residue in the needed sense")
    for e in range(2, p):
        if pow(e, (p - 1) // 2, p) == p - 1:
            return e
    raise AssertionError("unreachable for odd primes")


@dataclass(frozen=True)
class QuadModulus:
    """The relation t^2 = u*t + v defining the unramified quadratic extension."""

    p: int
    precision: int
    u: int
    v: int

    @classmethod
    def standard(cls, p: int, precision: int) -> "QuadModulus":
        """t^2 = eps (least non-residue) for odd p, and t^2 + t + 1 = 0 for p = 2."""
        m = p**precision
        if p == 2:
            return cls(p, precision, (-1) % m, (-1) % m)
        return cls(p, precision, 0, least_nonresidue(p) % m)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def reduction_irreducible(self) -> bool:
        p = self.p
        return all((x * x - self.u * x - self.v) % p for x in range(p))


@dataclass(frozen=True)
class QuadExtElem:
    """The element a + b*t of (Z/p^N)[t]/(t^2 - u t - v)."""

    a: TruncatedInt
    b: TruncatedInt
    modulus: QuadModulus

    def __post_init__(self):
        for part in (self.a, self.b):
            if part.p != self.modulus.p or part.precision != self.modulus.precision:
                raise DomainError("coefficient precision differs from the modulus")
        if not self.modulus.reduction_irreducible():
            raise DomainError("modulus must reduce to an irreducible quadratic")

    @classmethod
    def of(cls, modulus: QuadModulus, a: int, b: int = 0) -> "QuadExtElem":
        p, n = modulus.p, modulus.precision
        return cls(TruncatedInt.of(p, n, a), TruncatedInt.of(p, n, b), modulus)

    def _pair(self, other) -> tuple[int, int]:
        if isinstance(other, QuadExtElem):
            if other.modulus != self.modulus:
                raise DomainError("mixed precision or modulus in quadratic extension")
            return other.a.value, other.b.value
        if isinstance(other, TruncatedInt):
            return self.a._coerce(other), 0
        if isinstance(other, int):
            return other, 0
        return NotImplemented

    def _make(self, a: int, b: int) -> "QuadExtElem":
        return QuadExtElem.of(self.modulus, a, b)

    def __add__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return self._make(self.a.value + o[0], self.b.value + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        return self._make(self.a.value - o[0], self.b.value - o[1])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return o
        a, b = self.a.value, self.b.value
        c, d = o
        bd = b * d
        return self._make(a * c + bd * self.modulus.v, a * d + b * c + bd * self.modulus.u)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.a.value, -self.b.value)

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = self._make(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sigma(self) -> "QuadExtElem":
        """The nontrivial involution a + b t -> (a + b u) - b t."""
        return self._make(self.a.value + self.b.value * self.modulus.u, -self.b.value)

    def norm(self) -> TruncatedInt:
        n = self * self.sigma()
        assert n.b.is_zero()
        return n.a

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_real(self) -> bool:
        """True when the element lies in the base ring (fixed by sigma)."""
        return self.b.is_zero()

    def val(self) -> int | AtLeast:
        """Valuation; the extension is unramified so it is the minimum over coordinates."""
        va, vb = self.a.val(), self.b.val()
        if isinstance(va, AtLeast):
            return vb
        if isinstance(vb, AtLeast):
            return va
        return min(va, vb)

    def is_unit(self) -> bool:
        return self.val() == 0

    def inverse(self) -> "QuadExtElem":
        return self.sigma() * self.norm().inverse()

    def __repr__(self) -> str:
        return f"({self.a.value} + {self.b.value}*t mod {self.modulus.p}^{self.modulus.precision})"


def alpha(modulus: QuadModulus) -> QuadExtElem:
    """A fixed unit with alpha + sigma(alpha) = 0: t for odd p, 2t + 1 for p = 2."""
    if modulus.p == 2:
        return QuadExtElem.of(modulus, 1, 2)
    return QuadExtElem.of(modulus, 0, 1)


def berkowitz(rows: Sequence[Sequence], one, zero) -> list:
    """Coefficients [1, c_1, ..., c_n] of det(x I - A), without any division.

    Works over any commutative ring whose elements support +, - and *.
    """
    n = len(rows)
    poly = [one]
    for k in range(n):
        a = rows[k][k]
        row = [rows[k][j] for j in range(k)]
        col = [rows[i][k] for i in range(k)]
        toeplitz = [one, -a]
        vec = col
        for _ in range(k):
            s = zero
            for r, c in zip(row, vec):
                s = s + r * c
            toeplitz.append(-s)
            vec = [sum((rows[i][j] * vec[j] for j in range(k)), zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            s = zero
            for j in range(max(0, i - len(toeplitz) + 1), min(i, k) + 1):
                s = s + toeplitz[i - j] * poly[j]
            new.append(s)
        poly = new
    return poly


def charpoly_mod(rows: Sequence[Sequence[int]], modulus: int) -> tuple[int, ...]:
    """(c_1, ..., c_n) of the characteristic polynomial of an integer matrix mod ``modulus``."""
    coeffs = berkowitz(rows, 1, 0)
    return tuple(c % modulus for c in coeffs[1:])


FLAVORS = ("gl", "u", "sp")


def standard_gram(flavor: str, n: int) -> tuple[tuple[int, ...], ...]:
    """Identity for u; for sp the antidiagonal form with +1 above and -1 below the centre."""
    if flavor == "u":
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if flavor == "sp":
        if n % 2:
            raise DomainError("symplectic Gram matrix needs even size")
        half = n // 2
        return tuple(
            tuple((1 if i < half else -1) if i + j == n - 1 else 0 for j in range(n))
            for i in range(n)
        )
    raise DomainError(f"no Gram matrix for flavor {flavor!r}")


@dataclass(frozen=True)
class RingMatrix:
    """A square matrix over Z/p^N or its quadratic extension, tagged with an algebra flavor."""

    entries: tuple[tuple, ...]
    flavor: str = "gl"
    gram: tuple[tuple, ...] | None = None

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise DomainError("matrix must be square")
        if self.flavor not in FLAVORS:
            raise DomainError(f"unknown flavor {self.flavor!r}")
        if self.flavor != "gl" and self.gram is None:
            object.__setattr__(self, "gram", self._lift(standard_gram(self.flavor, n)))

    @classmethod
    def from_ints(cls, rows: Iterable[Iterable[int]], p: int, precision: int, flavor: str = "gl"):
        entries = tuple(tuple(TruncatedInt.of(p, precision, x) for x in r) for r in rows)
        return cls(entries, flavor)

    @property
    def n(self) -> int:
        return len(self.entries)

    def _sample(self):
        return self.entries[0][0]

    def _lift(self, rows):
        s = self._sample()
        if isinstance(s, QuadExtElem):
            return tuple(tuple(QuadExtElem.of(s.modulus, x) for x in r) for r in rows)
        return tuple(tuple(TruncatedInt.of(s.p, s.precision, x) for x in r) for r in rows)

    def _one_zero(self):
        s = self._sample()
        return s * 0 + 1, s * 0

    def char_poly(self) -> tuple:
        one, zero = self._one_zero()
        return tuple(berkowitz(self.entries, one, zero)[1:])

    def matmul(self, other: "RingMatrix") -> "RingMatrix":
        _, zero = self._one_zero()
        n = self.n
        rows = tuple(
            tuple(sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), zero) for j in range(n))
            for i in range(n)
        )
        return RingMatrix(rows, "gl")

    def conjugate_transpose(self) -> "RingMatrix":
        def sig(x):
            return x.sigma() if isinstance(x, QuadExtElem) else x

        n = self.n
        return RingMatrix(tuple(tuple(sig(self.entries[j][i]) for j in range(n)) for i in range(n)), "gl")

    def flavored_predicate(self) -> bool:
        """True iff h X + sigma(X^t) h = 0 entrywise."""
        if self.flavor == "gl":
            raise DomainError("the flavored predicate is undefined for gl")
        h = RingMatrix(self.gram, "gl")
        x = RingMatrix(self.entries, "gl")
        left = h.matmul(x).entries
        right = x.conjugate_transpose().matmul(h).entries
        return all((a + b).is_zero() for ra, rb in zip(left, right) for a, b in zip(ra, rb))
