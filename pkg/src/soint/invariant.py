"""Invariants of a characteristic polynomial over a p-adic integer ring.

Coefficients are representatives modulo p^N.  Every valuation that the
truncation cannot certify raises ``PrecisionError`` rather than guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, PrecisionError, UnsupportedError
from .ring import AtLeast, QuadModulus, alpha, berkowitz, int_valuation, is_prime

ALGEBRAS = ("gl", "u", "sp")


# Polynomials over Z/m as coefficient lists, highest degree first.


def _poly_mod(poly: Sequence[int], m: int) -> list[int]:
    return [c % m for c in poly]


def taylor_shift(poly: Sequence[int], a: int, m: int) -> list[int]:
    """Coefficients of poly(x + a), highest degree first, modulo m."""
    coeffs = list(poly)
    n = len(coeffs) - 1
    # repeated synthetic division
    for i in range(n):
        for j in range(1, n - i + 1):
            coeffs[j] = (coeffs[j] + a * coeffs[j - 1]) % m
    return _poly_mod(coeffs, m)


def _sylvester(f: Sequence, g: Sequence, zero) -> list[list]:
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    rows = []
    for i in range(dg):
        rows.append([zero] * i + list(f) + [zero] * (size - df - 1 - i))
    for i in range(df):
        rows.append([zero] * i + list(g) + [zero] * (size - dg - 1 - i))
    return rows


def _det(rows, one, zero):
    n = len(rows)
    c = berkowitz(rows, one, zero)[-1]
    return -c if n % 2 else c


def _derivative(poly: Sequence) -> list:
    n = len(poly) - 1
    return [poly[i] * (n - i) for i in range(n)]


# Data types


@dataclass(frozen=True)
class CharPolyData:
    """A monic characteristic polynomial known modulo p^N.

    gl: coeffs are (c_1, ..., c_n) of x^n + c_1 x^(n-1) + ... + c_n.
    u: the same shape with entries (a, b) meaning a + b t in the unramified
       quadratic extension; c_i + (-1)^(i+1) sigma(c_i) = 0 must hold.
    sp: (c_1, ..., c_n) of the even polynomial x^(2n) + c_1 x^(2n-2) + ... + c_n.
    """

    algebra: str
    n: int
    coeffs: tuple
    p: int
    N: int
    disc_val: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise DomainError(f"unknown algebra {self.algebra!r}")
        if not is_prime(self.p):
            raise DomainError(f"p = {self.p} is not prime")
        if self.N < 1 or self.n < 1:
            raise DomainError("rank and precision must be positive")
        if len(self.coeffs) != self.n:
            raise DomainError(f"expected {self.n} coefficients, got {len(self.coeffs)}")
        m = self.p**self.N
        if self.algebra == "u":
            norm = tuple(((c[0] % m, c[1] % m) if not isinstance(c, int) else (c % m, 0)) for c in self.coeffs)
            object.__setattr__(self, "coeffs", norm)
            self._check_u_symmetry()
        else:
            object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))
        object.__setattr__(self, "disc_val", _discriminant_valuation(self))

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def quad(self) -> QuadModulus:
        return QuadModulus.standard(self.p, self.N)

    def _check_u_symmetry(self) -> None:
        quad = self.quad()
        m = self.modulus
        for i, (a, b) in enumerate(self.coeffs, start=1):
            sa, sb = (a + b * quad.u) % m, (-b) % m
            sign = 1 if (i + 1) % 2 == 0 else -1
            if (a + sign * sa) % m or (b + sign * sb) % m:
                raise DomainError(f"coefficient c_{i} violates the sigma-symmetry of the hermitian case")

    def full_poly(self) -> list:
        """Coefficients of the whole polynomial, highest degree first (pairs for u)."""
        if self.algebra == "u":
            return [(1, 0)] + list(self.coeffs)
        if self.algebra == "sp":
            out = [1]
            for c in self.coeffs:
                out += [0, c]
            return out
        return [1] + list(self.coeffs)

    def degree(self) -> int:
        return 2 * self.n if self.algebra == "sp" else self.n

    def to_json(self) -> dict:
        coeffs = [[str(a), str(b)] for a, b in self.coeffs] if self.algebra == "u" else [str(c) for c in self.coeffs]
        return {"p": self.p, "N": self.N, "algebra": self.algebra, "n": self.n, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data: dict) -> "CharPolyData":
        algebra = data["algebra"]
        raw = data["coeffs"]
        if algebra == "u":
            coeffs = tuple((int(a), int(b)) for a, b in raw)
        else:
            coeffs = tuple(int(c) for c in raw)
        return cls(algebra, int(data["n"]), coeffs, int(data["p"]), int(data["N"]))


@dataclass(frozen=True)
class InvariantReport:
    d_gamma: int
    ramification: str
    res_deg: int
    serre: int | None
    disc_val: int
    d_bar: int
    translation: int = 0


# Discriminant


def _discriminant_valuation(chi: CharPolyData) -> int:
    p, N, m = chi.p, chi.N, chi.modulus
    poly = chi.full_poly()
    if chi.algebra == "u":
        from .oracle.fibers import _Pair

        quad = chi.quad()
        mod = (quad.u, quad.v, m)
        f = [_Pair(a, b, mod) for a, b in poly]
        deg = len(poly) - 1
        fp = [_Pair(a * (deg - i), b * (deg - i), mod) for i, (a, b) in enumerate(poly[:-1])]
        if deg == 1:
            return 0
        det = _det(_sylvester(f, fp, _Pair(0, 0, mod)), _Pair(1, 0, mod), _Pair(0, 0, mod))
        va = int_valuation(det.a % m, p, N)
        vb = int_valuation(det.b % m, p, N)
        vals = [v for v in (va, vb) if not isinstance(v, AtLeast)]
        if not vals:
            raise PrecisionError(f"the discriminant vanishes modulo p^{N}", N + 1)
        return min(vals)
    if len(poly) == 2:
        return 0
    det = _det(_sylvester(poly, _derivative(poly), 0), 1, 0) % m
    v = int_valuation(det, p, N)
    if isinstance(v, AtLeast):
        raise PrecisionError(f"the discriminant vanishes modulo p^{N}; the polynomial is not certified separable", N + 1)
    return v


def discriminant_val(chi: CharPolyData) -> int:
    """ord of the discriminant, certified below the working precision."""
    return chi.disc_val


# Newton polygon


def newton_polygon(chi: CharPolyData) -> list[tuple[Fraction, int]]:
    """Segments (slope, length) of the lower hull; slopes are root valuations, ascending.

    The hull runs over the points (n - i, ord c_i) together with (n, 0).
    """
    p, N, m = chi.p, chi.N, chi.modulus
    poly = chi.full_poly()
    deg = len(poly) - 1
    exact: list[tuple[int, int]] = [(deg, 0)]
    saturated: list[int] = []
    for i in range(1, deg + 1):
        c = poly[i]
        if chi.algebra == "sp" and i % 2 == 1:
            continue  # odd coefficients are identically zero
        if chi.algebra == "u":
            va, vb = int_valuation(c[0], p, N), int_valuation(c[1], p, N)
            known = [v for v in (va, vb) if not isinstance(v, AtLeast)]
            v = min(known) if known else AtLeast(N)
        else:
            v = int_valuation(c % m, p, N)
        if isinstance(v, AtLeast):
            saturated.append(deg - i)
        else:
            exact.append((deg - i, v))
    if 0 in saturated:
        raise PrecisionError("the constant term vanishes at the working precision", N + 1)
    hull = _lower_hull(sorted(exact))
    for x in saturated:
        if _hull_value(hull, x) >= N:
            raise PrecisionError(f"the valuation of the x^{x} coefficient is needed but saturated", N + 1)
    segments = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        segments.append((Fraction(y0 - y1, x1 - x0), x1 - x0))
    return sorted(segments)


def root_valuations(chi: CharPolyData) -> list[Fraction]:
    out: list[Fraction] = []
    for slope, length in newton_polygon(chi):
        out += [slope] * length
    return out


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_value(hull, x) -> Fraction:
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if x0 <= x <= x1:
            return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
    raise ValueError("abscissa outside the hull")


# Polynomials over F_p, lowest degree first, for factor-shape tests


def _fp_trim(f: list[int]) -> list[int]:
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def _fp_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 1)
    for deg in range(len(f) - 1, dg - 1, -1):
        c = f[deg] * inv % p
        if c:
            q[deg - dg] = c
            for i in range(dg + 1):
                f[deg - dg + i] = (f[deg - dg + i] - c * g[i]) % p
    return _fp_trim(q), _fp_trim(f[:dg] if dg else [0])


def _fp_mul(f: list[int], g: list[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _fp_trim(out)


def _least_irreducible_factor(f: list[int], p: int) -> list[int]:
    """Monic irreducible factor of least degree, the first in lexicographic order."""
    n = len(f) - 1
    for d in range(1, n + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if _fp_divmod(f, g, p)[1] == [0]:
                return g
    return f


def reduction_shape(poly_high_first: Sequence[int], p: int) -> tuple[list[int], int]:
    """(g, e) with the reduction mod p equal to g^e for a monic irreducible g.

    Raises DomainError when the reduction is not a power of one irreducible,
    which certifies reducibility over the p-adic field.
    """
    f = _fp_trim([c % p for c in reversed(poly_high_first)])
    g = _least_irreducible_factor(f, p)
    e = (len(f) - 1) // (len(g) - 1)
    power = [1]
    for _ in range(e):
        power = _fp_mul(power, g, p)
    if power != f:
        raise DomainError("the reduction is not a power of one irreducible polynomial, so the polynomial is reducible")
    return g, e


# Translation to the canonical constant-term order


def _constant_order(poly: list[int], p: int, N: int) -> int:
    v = int_valuation(poly[-1], p, N)
    if isinstance(v, AtLeast):
        raise PrecisionError("the translated constant term vanishes at the working precision", N + 1)
    return v


def translate_to_canonical(chi: CharPolyData, start: int = 0) -> tuple[int, int, tuple[int, ...]]:
    """Translate chi(x) to chi(x + a) until the constant-term order d_a is canonical.

    Returns (a, d_gamma, coefficients of chi(x + a)).  While d_a = n t and the
    reduction of chi_a(p^t x) / p^(n t) is a power of a linear polynomial
    (x - beta), the translation moves by p^t * beta with beta the least
    positive representative.  The loop stops when d_a is not a multiple of n
    or that reduction is a power of an irreducible of degree > 1.
    """
    if chi.algebra != "gl":
        raise DomainError("translation is defined for gl characteristic polynomials")
    p, N, n, m = chi.p, chi.N, chi.n, chi.modulus
    reduction_shape([1] + list(chi.coeffs), p)
    a = start % m
    poly = taylor_shift([1] + list(chi.coeffs), a, m)
    while True:
        d = _constant_order(poly, p, N)
        if (n - 1) * d > chi.disc_val:
            raise DomainError("the constant-term order exceeds the discriminant bound, so the polynomial is reducible")
        if d % n:
            break
        t = d // n
        scaled = []
        for i, c in enumerate(poly):
            step = p ** (t * i)
            if c % step:
                raise DomainError("the Newton polygon has more than one slope, so the polynomial is reducible")
            scaled.append(c // step % p)
        g, _ = reduction_shape(scaled, p)
        if len(g) > 2:
            break
        beta = (-g[0]) % p
        if beta == 0:
            raise DomainError("the scaled reduction has the root zero, so the polynomial is reducible")
        a = (a + p**t * beta) % m
        poly = taylor_shift([1] + list(chi.coeffs), a, m)
    return a, d, tuple(poly[1:])


def classify_and_serre(
    chi: CharPolyData,
    serre: int | None = None,
    residue_degree: int | None = None,
    start: int = 0,
) -> InvariantReport:
    """Ramification, Serre invariant and related orders for an elliptic gl element.

    For prime n the Serre invariant follows from d_gamma.  For other n it must
    be supplied, together with the residue degree when known.
    """
    a, d, poly = translate_to_canonical(chi, start)
    n, p = chi.n, chi.p
    if is_prime(n):
        if d % n == 0:
            t = d // n
            scaled = [c // p ** (t * i) % p for i, c in enumerate((1,) + poly)]
            g, _ = reduction_shape(scaled, p)
            if len(g) - 1 != n:
                raise DomainError("the scaled reduction is not irreducible although d_gamma is divisible by n")
            return InvariantReport(d, "unramified", n, n * (n - 1) // 2 * t, chi.disc_val, d, a)
        return InvariantReport(d, "totally-ramified", 1, (d - 1) * (n - 1) // 2, chi.disc_val, d, a)
    if serre is None:
        raise UnsupportedError(f"n = {n} is not prime: the Serre invariant requires external S(gamma)")
    return InvariantReport(d, "composite", residue_degree or 0, serre, chi.disc_val, d, a)


# Hensel lifting over Z/p^N, polynomials lowest degree first


def _zp_mul(f, g, m):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % m
    return out


def _zp_add(f, g, m):
    size = max(len(f), len(g))
    return [((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % m for i in range(size)]


def _zp_sub(f, g, m):
    return _zp_add(f, [-c for c in g], m)


def _zp_divmod_monic(f, g, m):
    f = [c % m for c in f]
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [0], f + [0] * (dg - len(f)) if dg else [0]
    q = [0] * (len(f) - dg)
    for deg in range(len(f) - 1, dg - 1, -1):
        c = f[deg]
        if c:
            q[deg - dg] = c
            for i in range(dg + 1):
                f[deg - dg + i] = (f[deg - dg + i] - c * g[i]) % m
    return q, f[:dg] if dg else [0]


def _trim_to(f, length, m):
    f = [c % m for c in f] + [0] * max(0, length - len(f))
    if any(f[length:]):
        raise ArithmeticError("polynomial longer than expected")
    return f[:length]


def _fp_xgcd(f, g, p):
    """s, t with s f + t g = 1 over F_p (lowest degree first)."""
    r0, r1 = _fp_trim([c % p for c in f]), _fp_trim([c % p for c in g])
    s0, s1, t0, t1 = [1], [0], [0], [1]
    while r1 != [0]:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _fp_trim(_zp_sub(s0, _fp_mul(q, s1, p), p))
        t0, t1 = t1, _fp_trim(_zp_sub(t0, _fp_mul(q, t1, p), p))
    if len(r0) != 1:
        raise DomainError("the factors of the reduction are not coprime; descent input must be supplied externally")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def hensel_split(chi: CharPolyData, factor: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lift a coprime factorization of the reduction to chi = f g modulo p^N.

    ``factor`` is the monic f-bar, highest degree first.  Returns monic f and g,
    highest degree first, using quadratic Hensel steps.
    """
    if chi.algebra != "gl":
        raise DomainError("Hensel splitting is implemented for gl polynomials")
    p, N, m = chi.p, chi.N, chi.modulus
    full = list(reversed([1] + list(chi.coeffs)))
    fbar = _fp_trim([c % p for c in reversed(list(factor))])
    if fbar[-1] != 1:
        raise DomainError("the factor must be monic")
    reduced = _fp_trim([c % p for c in full])
    gbar, rem = _fp_divmod(reduced, fbar, p)
    if rem != [0]:
        raise DomainError("the given factor does not divide the reduction")
    s, t = _fp_xgcd(gbar, fbar, p)  # s g + t f = 1
    g, h = gbar, fbar  # g * h = chi with h monic
    df = len(fbar) - 1
    dg = len(gbar) - 1
    k = 1
    while k < N:
        k = min(2 * k, N)
        mk = p**k
        e = _zp_sub(full, _zp_mul(g, h, mk), mk)
        q, r = _zp_divmod_monic(_zp_mul(s, e, mk), h, mk)
        g_new = _zp_add(_zp_add(g, _zp_mul(t, e, mk), mk), _zp_mul(q, g, mk), mk)
        h_new = _zp_add(h, r, mk)
        g_new = _trim_to(g_new, dg + 1, mk)
        h_new = _trim_to(h_new, df + 1, mk)
        b = _zp_sub(_zp_add(_zp_mul(s, g_new, mk), _zp_mul(t, h_new, mk), mk), [1], mk)
        c, d = _zp_divmod_monic(_zp_mul(s, b, mk), h_new, mk)
        s = _zp_sub(s, d, mk)
        t = _zp_sub(_zp_sub(t, _zp_mul(t, b, mk), mk), _zp_mul(c, g_new, mk), mk)
        g, h = g_new, h_new
    f_out = tuple(c % m for c in reversed(h))
    g_out = tuple(c % m for c in reversed(g))
    return f_out, g_out


# Descent from the hermitian and symplectic cases


def sigma_descend(chi: CharPolyData) -> CharPolyData:
    """The base-ring polynomial attached to a u or sp characteristic polynomial.

    u: psi(x) = alpha^n chi(x / alpha), whose coefficients alpha^i c_i lie in
    the base ring.  sp: psi with psi(x^2) = chi(x).
    """
    if chi.algebra == "sp":
        return CharPolyData("gl", chi.n, chi.coeffs, chi.p, chi.N)
    if chi.algebra != "u":
        raise DomainError("descent applies to the u and sp algebras")
    quad = chi.quad()
    m = chi.modulus
    al = alpha(quad)
    power = (1, 0)
    out = []
    for a, b in chi.coeffs:
        power = _quad_mul(power, (al.a.value, al.b.value), quad.u, quad.v, m)
        re, im = _quad_mul(power, (a, b), quad.u, quad.v, m)
        if im % m:
            raise DomainError("descended coefficient is not in the base ring")
        out.append(re)
    return CharPolyData("gl", chi.n, tuple(out), chi.p, chi.N)


def _quad_mul(x, y, u, v, m):
    bd = x[1] * y[1]
    return ((x[0] * y[0] + bd * v) % m, (x[0] * y[1] + x[1] * y[0] + bd * u) % m)


def ascend_from_base(psi_coeffs: Sequence[int], p: int, N: int) -> tuple[tuple[int, int], ...]:
    """The u coefficients c_i = alpha^(-i) psi_i, inverse to ``sigma_descend``."""
    quad = QuadModulus.standard(p, N)
    m = p**N
    al = alpha(quad)
    inv = al.inverse()
    inv_pair = (inv.a.value, inv.b.value)
    power = (1, 0)
    out = []
    for c in psi_coeffs:
        power = _quad_mul(power, inv_pair, quad.u, quad.v, m)
        out.append(_quad_mul(power, (c % m, 0), quad.u, quad.v, m))
    return tuple(out)


# Precision management


def with_precision_doubling(
    op: Callable[[CharPolyData], object],
    algebra: str,
    n: int,
    coeffs: Sequence,
    p: int,
    N: int = 8,
    cap: int = 256,
):
    """Run ``op`` on exact coefficients truncated at N, doubling N on precision errors."""
    while True:
        try:
            return op(CharPolyData(algebra, n, tuple(coeffs), p, N))
        except PrecisionError as err:
            nxt = max(2 * N, err.minimal_precision or 0)
            if nxt > cap:
                raise PrecisionError(f"precision cap {cap} reached", nxt) from err
            N = nxt
