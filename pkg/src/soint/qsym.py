"""Exact Laurent polynomials and rational functions in a formal variable q.

``QPoly`` stores integer coefficients starting at a possibly negative lowest
exponent.  ``QRat`` is a numerator/denominator pair compared by
cross-multiplication.  Both evaluate exactly to ``Fraction`` at integer q.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

from .errors import DomainError

Number = Union[int, Fraction]


@dataclass(frozen=True)
class QPoly:
    """sum_i coeffs[i] * q^(low + i), normalized so both ends are nonzero."""

    low: int = 0
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        low = self.low
        while c and c[-1] == 0:
            c.pop()
        start = 0
        while start < len(c) and c[start] == 0:
            start += 1
        c = c[start:]
        low = low + start if c else 0
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "low", low)

    @classmethod
    def const(cls, c: int) -> "QPoly":
        return cls(0, (c,))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "QPoly":
        return cls(exponent, (coeff,))

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "QPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(e, 0) for e in range(lo, hi + 1)))

    def terms(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise DomainError("degree of the zero polynomial")
        return self.low + len(self.coeffs) - 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, exponent: int) -> int:
        i = exponent - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @staticmethod
    def _lift(x) -> "QPoly":
        if isinstance(x, QPoly):
            return x
        if isinstance(x, int):
            return QPoly.const(x)
        return NotImplemented

    def __add__(self, other):
        o = QPoly._lift(other)
        if o is NotImplemented:
            return NotImplemented
        t = self.terms()
        for e, c in o.terms().items():
            t[e] = t.get(e, 0) + c
        return QPoly.from_dict(t)

    __radd__ = __add__

    def __neg__(self):
        return QPoly(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = QPoly._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = QPoly._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return QPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return QPoly(self.low + o.low, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.coeffs) == 1 and self.coeffs[0] in (1, -1):
                return QPoly(self.low * k, (self.coeffs[0] ** -k,))
            raise DomainError("negative power of a non-monomial polynomial")
        result = QPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k."""
        return QPoly(self.low + k, self.coeffs) if self.coeffs else self

    def __truediv__(self, other) -> "QRat":
        return QRat(self, QPoly._lift(other))

    def __rtruediv__(self, other) -> "QRat":
        return QRat(QPoly._lift(other), self)

    def divmod_exact(self, other: "QPoly") -> "QPoly":
        """Exact quotient self / other; raises DomainError if the division leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return QPoly()
        rem = dict(self.terms())
        quot: dict[int, int] = {}
        dlo, dhi, lead = other.low, other.degree, other.leading()
        dterms = other.terms()
        while rem:
            top = max(rem)
            if top - dhi < self.low - dlo:
                break
            c, r = divmod(rem[top], lead)
            if r:
                raise DomainError("polynomial division is not exact")
            shift = top - dhi
            quot[shift] = c
            for e, dc in dterms.items():
                v = rem.get(e + shift, 0) - c * dc
                if v:
                    rem[e + shift] = v
                else:
                    rem.pop(e + shift, None)
        if rem:
            raise DomainError("polynomial division is not exact")
        return QPoly.from_dict(quot)

    def __floordiv__(self, other) -> "QPoly":
        return self.divmod_exact(QPoly._lift(other))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def __call__(self, q: Number) -> Fraction:
        return self.evaluate(q)

    def evaluate(self, q: Number) -> Fraction:
        q = Fraction(q)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc * q**self.low if self.low else acc

    def substitute_power(self, k: int) -> "QPoly":
        """p(q^k)."""
        if k < 1:
            raise DomainError("substitution exponent must be positive")
        return QPoly.from_dict({e * k: c for e, c in self.terms().items()})

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"QPoly({render_poly(self)!r})"


def _poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Primitive gcd of two integer polynomials (Euclid over Q, then made primitive)."""
    a = a.shift(-a.low) if not a.is_zero() else a
    b = b.shift(-b.low) if not b.is_zero() else b
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        while x and len(x) >= len(y):
            f = x[-1] / y[-1]
            off = len(x) - len(y)
            for i, c in enumerate(y):
                x[off + i] -= f * c
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    if not x:
        return QPoly.const(1)
    den = 1
    for c in x:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in x]
    g = QPoly(0, tuple(ints))
    cont = g.content()
    g = QPoly(0, tuple(c // cont for c in g.coeffs))
    if g.leading() < 0:
        g = -g
    return g


@dataclass(frozen=True, eq=False)
class QRat:
    """A rational function num/den in q."""

    num: QPoly
    den: QPoly = QPoly.const(1)

    def __post_init__(self):
        num, den = QPoly._lift(self.num), QPoly._lift(self.den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def _lift(x) -> "QRat":
        if isinstance(x, QRat):
            return x
        if isinstance(x, (QPoly, int)):
            return QRat(QPoly._lift(x))
        if isinstance(x, Fraction):
            return QRat(QPoly.const(x.numerator), QPoly.const(x.denominator))
        return NotImplemented

    def __eq__(self, other) -> bool:
        o = QRat._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash(self.reduced().render())

    def __add__(self, other):
        o = QRat._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return QRat(self.num + o.num, self.den).reduced()
        return QRat(self.num * o.den + o.num * self.den, self.den * o.den).reduced()

    __radd__ = __add__

    def __neg__(self):
        return QRat(-self.num, self.den)

    def __sub__(self, other):
        o = QRat._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = QRat._lift(other)
        if o is NotImplemented:
            return o
        return QRat(self.num * o.num, self.den * o.den).reduced()

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QRat._lift(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return QRat(self.num * o.den, self.den * o.num).reduced()

    def __rtruediv__(self, other):
        return QRat._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QRat(self.den, self.num) ** (-k)
        return QRat(self.num**k, self.den**k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def reduced(self) -> "QRat":
        """Cancel the polynomial gcd and move all powers of q into a monomial shift."""
        num, den = self.num, self.den
        if num.is_zero():
            return QRat(QPoly(), QPoly.const(1))
        shift = num.low - den.low
        num, den = num.shift(-num.low), den.shift(-den.low)
        g = _poly_gcd(num, den)
        if g.degree > 0 or g.leading() != 1:
            num, den = num // g, den // g
        c = gcd(num.content(), den.content())
        if den.leading() < 0:
            c = -c
        num = QPoly(0, tuple(x // c for x in num.coeffs))
        den = QPoly(0, tuple(x // c for x in den.coeffs))
        if shift >= 0:
            num = num.shift(shift)
        else:
            den = den.shift(-shift)
        return QRat(num, den)

    def evaluate(self, q: Number) -> Fraction:
        d = self.den.evaluate(q)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q={q}")
        return self.num.evaluate(q) / d

    __call__ = evaluate

    def as_poly(self) -> QPoly:
        """The polynomial equal to this function; DomainError if it is not one."""
        r = self.reduced()
        if len(r.den.coeffs) == 1 and r.den.coeffs[0] in (1, -1):
            return r.num.shift(-r.den.low) * r.den.coeffs[0]
        raise DomainError("rational function is not a Laurent polynomial")

    def expansion_at_infinity(self, terms: int) -> list[tuple[int, Fraction]]:
        """First ``terms`` coefficients of the expansion in descending powers of q.

        Returns (exponent, coefficient) pairs starting at deg(num) - deg(den).
        """
        if self.num.is_zero():
            return []
        num = {e: Fraction(c) for e, c in self.num.terms().items()}
        dterms = self.den.terms()
        dtop = self.den.degree
        lead = Fraction(self.den.leading())
        top = self.num.degree
        out = []
        for k in range(terms):
            e = top - k
            c = num.get(e, Fraction(0)) / lead
            out.append((e - dtop, c))
            if c:
                for de, dc in dterms.items():
                    key = e - dtop + de
                    num[key] = num.get(key, Fraction(0)) - c * dc
        return out

    def coefficient_at_infinity(self, exponent: int) -> Fraction:
        """Coefficient of q^exponent in the expansion in descending powers of q."""
        if self.num.is_zero():
            return Fraction(0)
        top = self.num.degree - self.den.degree
        if exponent > top:
            return Fraction(0)
        return dict(self.expansion_at_infinity(top - exponent + 1)).get(exponent, Fraction(0))

    def render(self) -> str:
        return render_rat(self)

    def __str__(self) -> str:
        return render_rat(self)

    def __repr__(self) -> str:
        return f"QRat({render_rat(self)!r})"


q = QPoly.monomial(1)
ONE = QPoly.const(1)


def qpow(k: int) -> QPoly:
    return QPoly.monomial(k)


def as_rat(x) -> QRat:
    r = QRat._lift(x)
    if r is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a rational function of q")
    return r


@lru_cache(maxsize=None)
def gl_order(n: int) -> QPoly:
    """#GL_n(F_q) = prod_{i<n} (q^n - q^i)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    out = ONE
    for i in range(n):
        out = out * (qpow(n) - qpow(i))
    return out


@lru_cache(maxsize=None)
def u_order(n: int) -> QPoly:
    """#U_n(F_q) = q^(n(n-1)/2) prod_{i=1}^n (q^i - (-1)^i)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    out = qpow(n * (n - 1) // 2)
    for i in range(1, n + 1):
        out = out * (qpow(i) - (-1) ** i)
    return out


@lru_cache(maxsize=None)
def sp_order(n: int) -> QPoly:
    """#Sp_2n(F_q) = q^(n^2) prod_{i=1}^n (q^(2i) - 1)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    out = qpow(n * n)
    for i in range(1, n + 1):
        out = out * (qpow(2 * i) - 1)
    return out


@lru_cache(maxsize=None)
def grassmannian_count(k: int, n: int) -> QPoly:
    """Number of k-dimensional subspaces of F_q^n (Gaussian binomial)."""
    if k < 0 or k > n:
        raise DomainError(f"Grassmannian Gr({k},{n}) needs 0 <= k <= n")
    num, den = ONE, ONE
    for i in range(k):
        num = num * (qpow(n) - qpow(i))
        den = den * (qpow(k) - qpow(i))
    return num // den


def render_poly(p: QPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.terms(), reverse=True):
        c = p.coefficient(e)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = "q" if e == 1 else f"q^{e}"
            body = power if mag == 1 else f"{mag}*{power}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render_rat(r: QRat) -> str:
    if len(r.den.coeffs) == 1 and r.den.coeffs[0] == 1 and r.den.low == 0:
        return render_poly(r.num)
    return f"({render_poly(r.num)}) / ({render_poly(r.den)})"


_TERM = re.compile(r"^(?:(\d+)\*?)?(?:q(?:\^(-?\d+))?)?$")


def parse_poly(text: str) -> QPoly:
    """Inverse of ``render_poly``; accepts '*' and '^' with optional spaces and signs."""
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise DomainError("empty polynomial")
    tokens = re.findall(r"[+-]?[^+-]+", s.replace("^-", "^~"))
    terms: dict[int, int] = {}
    for tok in tokens:
        tok = tok.replace("~", "-")
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-")
        m = _TERM.match(tok)
        if not m or not tok:
            raise DomainError(f"cannot parse term {tok!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        if "q" in tok:
            e = int(m.group(2)) if m.group(2) else 1
        else:
            if m.group(1) is None:
                raise DomainError(f"cannot parse term {tok!r}")
            e = 0
        terms[e] = terms.get(e, 0) + sign * coeff
    return QPoly.from_dict(terms)


def parse_rat(text: str) -> QRat:
    """Inverse of ``render_rat``: 'num' or '(num) / (den)'."""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return QRat(parse_poly(text[:i].strip()), parse_poly(text[i + 1 :].strip()))
    return QRat(parse_poly(text.strip()))


def rat_sum(values: Iterable) -> QRat:
    total = QRat(QPoly())
    for v in values:
        total = total + v
    return total
