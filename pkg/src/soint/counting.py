"""Closed counting formulas: sublattices by type, hermitian Jordan types, tori,
regular nilpotents and special-fiber point counts.

Every function returns a ``QPoly`` in q, the residue cardinality of the base
field.  Counts over the quadratic extension are obtained with
``residue_power=2`` (substituting q^2 for q) rather than implicitly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError
from .qsym import ONE, QPoly, gl_order, grassmannian_count, q, qpow, sp_order, u_order


def validate_type(t: Sequence[int], n: int) -> tuple[int, ...]:
    t = tuple(t)
    if len(t) > n:
        raise DomainError(f"type {t} is longer than the rank {n}")
    if any(k < 1 for k in t) or any(a > b for a, b in zip(t, t[1:])):
        raise DomainError(f"type {t} must be a nondecreasing tuple of positive integers")
    return t


def c_type(t: Sequence[int], n: int, residue_power: int = 1) -> QPoly:
    """Number of sublattices M of o^n with L/M of elementary-divisor type ``t``."""
    t = validate_type(t, n)
    mult = Counter(t)
    parts = sorted(mult)
    s_prev = n - len(t)
    r_prev = 0
    out = ONE
    for r in parts:
        m = mult[r]
        s = s_prev + m
        exponent = ((r - r_prev - 1) * (n - s_prev) + (n - s)) * s_prev
        out = out * grassmannian_count(m, s) * qpow(exponent)
        s_prev, r_prev = s, r
    return out.substitute_power(residue_power) if residue_power != 1 else out


def types_of_size(total: int, n: int) -> list[tuple[int, ...]]:
    """All nondecreasing types of length at most n with the given sum."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, least: int):
        if remaining == 0:
            out.append(prefix)
            return
        if len(prefix) == n:
            return
        for k in range(least, remaining + 1):
            rec(prefix + (k,), remaining - k, k)

    rec((), total, 1)
    return out


def d_t_count(t: int, m: int) -> QPoly:
    """Number of t-dimensional subspaces of an m-dimensional space."""
    return grassmannian_count(t, m)


FLAVOR_ALIASES = {"u": "u", "(E,1)": "u", "E1": "u", "sp": "sp", "(F,-1)": "sp", "F-1": "sp"}


def _flavor(flavor: str) -> str:
    try:
        return FLAVOR_ALIASES[flavor.replace(" ", "")]
    except KeyError:
        raise DomainError(f"unknown flavor {flavor!r}") from None


def s_ab_count(flavor: str, l: int, d: int, n: int) -> QPoly:
    """Number of type-(d) sublattices with Jordan type (l, 2d - l)."""
    fl = _flavor(flavor)
    if d < 1 or n < 1:
        raise DomainError("need d >= 1 and n >= 1")
    if fl == "u":
        head = (qpow(n) - (-1) ** n) * (qpow(n - 1) - (-1) ** (n - 1))
        if 1 <= l <= d - 1:
            return (head // (q + 1)).shift(2 * (d - 1) * (n - 1) - l)
        if l == d:
            return (head // (q * q - 1)).shift((d - 1) * (2 * n - 3))
        raise DomainError(f"hermitian Jordan index must satisfy 1 <= l <= d, got l={l}, d={d}")
    if l != d:
        raise DomainError("symplectic type-(d) lattices only have Jordan type (d, d)")
    return ((qpow(2 * n) - 1) // (q - 1)).shift((2 * n - 1) * (d - 1))


def torus_count(case: str, n: int, d: int = 1, char_above_two: bool = False) -> QPoly:
    """Points of the reductive quotient of the special fiber of the centralizer torus."""
    if case == "split":
        return qpow(n) - qpow(n - d)
    if case == "unramified":
        return qpow(n) + qpow(n - d)
    if case == "ramified":
        if not char_above_two:
            raise DomainError("the ramified torus count requires residue characteristic > 2")
        return qpow(n) * 2
    raise DomainError(f"unknown torus case {case!r}")


def regular_nilpotent_count(group: str, n: int) -> QPoly:
    """Regular nilpotent elements of the Lie algebra of U_n or Sp_2n over F_q."""
    g = group.lower().replace("_", "")
    if n == 0:
        return ONE
    if g in ("u", "un"):
        return u_order(n) // ((q + 1) * qpow(n - 1))
    if g in ("sp", "sp2n"):
        return sp_order(n) // qpow(n)
    raise DomainError(f"unknown group {group!r}")


@dataclass(frozen=True)
class GlTypeK1:
    """Type (k1) stratum of gl_n."""

    n: int
    k1: int = 1


@dataclass(frozen=True)
class GlRefined:
    """Refined (k1, k2) stratum of gl_n, n >= 4, with the one-dimensional refinement."""

    n: int
    k1: int
    k2: int


@dataclass(frozen=True)
class Gl3Case:
    """One l-stratum of a gl_3 (k1, k2) case; ``l`` is ignored for the equal-parts case."""

    case: int
    k1: int
    k2: int
    l: int = 0

    def l_max(self) -> int:
        d = self.k1 + self.k2
        if self.case == 1:
            return self.k1
        if self.case == 2:
            return self.k2 - self.k1
        if self.case == 4:
            return -(-d // 3)
        return 0

    def check(self) -> None:
        d = self.k1 + self.k2
        t, s = -(-d // 3), d // 3
        ok = {
            1: self.k1 < self.k2 and self.k1 < t,
            2: self.k1 < self.k2 and self.k1 > s,
            3: self.k1 == self.k2,
            4: d % 3 == 0 and self.k1 == t,
        }.get(self.case)
        if not ok or self.k1 < 1:
            raise DomainError(f"parameters {self} violate the case conditions")
        if self.case != 3 and not 0 <= self.l <= self.l_max():
            raise DomainError(f"l must lie in [0, {self.l_max()}]")


@dataclass(frozen=True)
class UDn:
    """Type-(d_n) stratum of u_n with the two constant-term orders d_{n-1}, d_n."""

    n: int
    d_prev: int
    d_n: int


@dataclass(frozen=True)
class SpDn:
    """Type-(d_n) stratum of sp_2n."""

    n: int
    d_n: int = 1


Shape = Union[GlTypeK1, GlRefined, Gl3Case, UDn, SpDn]


def fiber_count_kappa(shape: Shape) -> QPoly:
    """Closed count of F_q-points of the special fiber attached to ``shape``."""
    if isinstance(shape, GlTypeK1):
        if shape.n < 2 or shape.k1 < 1:
            raise DomainError("type (k1) strata need n >= 2 and k1 >= 1")
        return gl_order(shape.n - 1).shift(shape.n - 1)
    if isinstance(shape, GlRefined):
        n = shape.n
        if n < 4 or not 1 <= shape.k1 <= shape.k2:
            raise DomainError("refined strata need n >= 4 and 1 <= k1 <= k2")
        base = gl_order(n - 3) // ((q - 1) * qpow(n - 4))
        if shape.k1 < shape.k2:
            return base * 2 * (q - 1) ** 3 * qpow(6 * n - 15)
        return base * (q - 1) ** 3 * (q + 1) * qpow(6 * n - 16)
    if isinstance(shape, Gl3Case):
        shape.check()
        if shape.case == 3:
            return (q + 1) * (q - 1) ** 2 * qpow(3)
        if shape.l in (0, shape.l_max()):
            return qpow(4) * (q - 1) ** 2
        return qpow(3) * (q - 1) ** 3
    if isinstance(shape, UDn):
        n = shape.n
        if n < 2:
            raise DomainError("u_n strata need n >= 2")
        if shape.d_prev < 1 or shape.d_n < 1:
            raise DomainError("u_n strata need d_(n-1) >= 1 and d_n >= 1")
        if shape.d_prev < shape.d_n:
            return u_order(n - 2).shift(3 * n - 4)
        return u_order(n - 2) * (q - 1) * qpow(3 * n - 5)
    if isinstance(shape, SpDn):
        n = shape.n
        if n < 1:
            raise DomainError("sp_2n strata need n >= 1")
        return sp_order(n - 1) * (q - 1) * qpow(3 * n - 2)
    raise DomainError(f"unknown shape {shape!r}")
