"""Closed formulas for stable orbital integrals as exact rational functions of q.

Each closed form carries both normalizations: the geometric measure coming
from the characteristic-polynomial map, and the measure dmu used for the
comparison bounds.  Conversions between them need char F = 0 or char F > n,
which the caller must acknowledge explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .invariant import CharPolyData
from .qsym import ONE, QPoly, QRat, as_rat, gl_order, q, qpow, render_poly, sp_order, u_order

GEOMETRIC = "geometric"
DMU = "dmu"
MEASURES = (GEOMETRIC, DMU)
CHAR_ASSUMPTION = "char F = 0 or char F > n"


def _qr(x) -> QRat:
    return as_rat(x)


def _inv_qpow(k: int) -> QRat:
    return QRat(ONE, qpow(k))


# Values


@dataclass(frozen=True)
class OrbitalValue:
    measure: str
    symbolic: QRat
    q: int | None
    theorem: str
    assumptions: tuple[str, ...] = ()

    @property
    def numeric(self) -> Fraction | None:
        return None if self.q is None else self.symbolic.evaluate(self.q)

    def at(self, q_value: int) -> "OrbitalValue":
        return OrbitalValue(self.measure, self.symbolic, q_value, self.theorem, self.assumptions)

    def to_json(self) -> dict:
        r = self.symbolic.reduced()
        value = self.numeric
        return {
            "measure": self.measure,
            "symbolic": {"num": render_poly(r.num), "den": render_poly(r.den)},
            "q": self.q,
            "value": None if value is None else f"{value.numerator}/{value.denominator}",
            "theorem": self.theorem,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrbitalValue":
        from .qsym import parse_poly

        sym = QRat(parse_poly(data["symbolic"]["num"]), parse_poly(data["symbolic"]["den"]))
        return cls(data["measure"], sym, data.get("q"), data["theorem"], tuple(data.get("assumptions", ())))


@dataclass(frozen=True)
class ClosedForm:
    """A closed orbital integral in both measures; ``dmu`` is None when undetermined."""

    geometric: QRat
    dmu: QRat | None
    theorem: str
    assumptions: tuple[str, ...] = ()

    def value(self, measure: str = GEOMETRIC, q_value: int | None = None, acknowledge_char: bool = False) -> OrbitalValue:
        if measure == GEOMETRIC:
            return OrbitalValue(GEOMETRIC, self.geometric, q_value, self.theorem, self.assumptions)
        if measure != DMU:
            raise DomainError(f"unknown measure {measure!r}")
        if not acknowledge_char:
            raise DomainError(f"the dmu normalization requires acknowledging the assumption {CHAR_ASSUMPTION}")
        if self.dmu is None:
            raise DomainError("the dmu value needs the Serre invariant of this instance")
        notes = tuple(dict.fromkeys(self.assumptions + (CHAR_ASSUMPTION,)))
        return OrbitalValue(DMU, self.dmu, q_value, self.theorem, notes)


# gl_1 and gl_2


def so_gl1() -> ClosedForm:
    return ClosedForm(_qr(1), _qr(1), "gl1")


def so_gl2_dmu(elliptic: bool, ram: str | None, serre: int) -> QRat:
    S = serre
    if not elliptic:
        return _qr(qpow(S))
    if ram == "unramified":
        return _qr(1) + (q + 1) * QRat(qpow(S) - 1, q - 1)
    if ram == "ramified":
        return QRat(qpow(S + 1) - 1, q - 1)
    raise DomainError(f"ramification must be 'unramified' or 'ramified', got {ram!r}")


def so_gl2(elliptic: bool = True, ram: str | None = None, serre: int | None = None) -> ClosedForm:
    """gl_2: elliptic (unramified or ramified with Serre invariant S) or hyperbolic."""
    base = QRat(q + 1, q)
    if not elliptic:
        dmu = None if serre is None else so_gl2_dmu(False, None, serre)
        return ClosedForm(base, dmu, "gl2-hyperbolic", ("char F = 0 or char F > 2",))
    if serre is None or serre < 0:
        raise DomainError("elliptic gl2 needs a Serre invariant S >= 0")
    S = serre
    if ram == "unramified":
        geo = base - QRat(QPoly.const(2), qpow(S + 1))
    elif ram == "ramified":
        geo = base - QRat(q + 1, qpow(S + 2))
    else:
        raise DomainError(f"ramification must be 'unramified' or 'ramified', got {ram!r}")
    return ClosedForm(geo, so_gl2_dmu(True, ram, S), f"gl2-elliptic-{ram}")


# gl_3

GL3_CASES = ("elliptic-unramified", "elliptic-ramified", "quad-factor", "hyperbolic")


def serre_of_quadratic_factor(serre: int, disc_val: int, quad_disc_val: int) -> int:
    """S of the quadratic factor from S, ord disc of the cubic and ord disc of the factor."""
    diff = disc_val - quad_disc_val
    if diff % 2 or serre - diff // 2 < 0:
        raise DomainError("inconsistent discriminant valuations for the quadratic factor")
    return serre - diff // 2


def so_gl3(case: str, serre: int | None = None, quad_ram: str | None = None, quad_serre: int | None = None) -> ClosedForm:
    """gl_3 closed forms.

    elliptic-unramified needs S = 3d'; elliptic-ramified needs S = 3d' or 3d'+1
    (S = 3d'+2 cannot occur).  quad-factor needs the ramification and Serre
    invariant of the irreducible quadratic factor; its dmu value also needs S.
    """
    c3 = q * q + q + 1
    top = QRat((q + 1) * c3, qpow(3))
    if case == "hyperbolic":
        dmu = None if serre is None else _qr(qpow(serre))
        return ClosedForm(top, dmu, "gl3-hyperbolic", (CHAR_ASSUMPTION,))
    if case == "quad-factor":
        if quad_serre is None or quad_serre < 0:
            raise DomainError("quad-factor needs the Serre invariant of the quadratic factor")
        Sp = quad_serre
        if quad_ram == "unramified":
            geo = top - QRat(c3 * 2, qpow(Sp + 3))
        elif quad_ram == "ramified":
            geo = top - QRat((q + 1) * c3, qpow(Sp + 4))
        else:
            raise DomainError("quad-factor needs quad_ram 'unramified' or 'ramified'")
        dmu = None
        if serre is not None:
            if serre < Sp:
                raise DomainError("S of the cubic cannot be smaller than S of its quadratic factor")
            dmu = qpow(serre - Sp) * so_gl2_dmu(True, quad_ram, Sp)
        return ClosedForm(geo, dmu, f"gl3-quad-factor-{quad_ram}", (CHAR_ASSUMPTION,))
    if serre is None or serre < 0:
        raise DomainError("elliptic gl3 needs a Serre invariant S >= 0")
    dp, rem = divmod(serre, 3)
    if case == "elliptic-unramified":
        if rem:
            raise DomainError("an unramified cubic has S divisible by 3")
        geo = top - QRat(c3 * 3, qpow(dp + 3)) + QRat(QPoly.const(3), qpow(3 * dp + 3))
        dmu = QRat(c3, (q - 1) ** 2) * (_qr(qpow(3 * dp)) - 3 * QRat(qpow(2 * dp) - 1, q + 1) - 1) + 1
        return ClosedForm(geo, dmu, "gl3-elliptic-unramified")
    if case == "elliptic-ramified":
        if rem == 2:
            raise DomainError("a totally ramified cubic cannot have S congruent to 2 mod 3")
        if rem == 0:
            geo = top - QRat((2 * q + 1) * c3, qpow(dp + 4)) + QRat(c3, qpow(3 * dp + 5))
            dmu = QRat(q * q, (q - 1) ** 2) * (_qr(qpow(3 * dp)) - (2 * q + 1) * QRat(qpow(2 * dp) - 1, q * (q + 1)) - 1) + 1
        else:
            geo = top - QRat((q + 2) * c3, qpow(dp + 4)) + QRat(c3, qpow(3 * dp + 6))
            dmu = QRat(q * q, (q - 1) ** 2) * (_qr(qpow(3 * dp + 1)) - (q + 2) * QRat(qpow(2 * dp) - 1, q + 1) - q) + q + 1
        return ClosedForm(geo, dmu, f"gl3-elliptic-ramified-s{rem}")
    raise DomainError(f"unknown gl3 case {case!r}; expected one of {GL3_CASES}")


def gl3_stratum_case(k1: int, k2: int) -> int:
    """Which of the four (k1, k2) cases applies, for 0 < k1 <= k2."""
    if not 0 < k1 <= k2:
        raise DomainError("strata need 0 < k1 <= k2")
    d = k1 + k2
    t, s = -(-d // 3), d // 3
    if k1 == k2:
        return 3
    if d == 3 * t and k1 == t:
        return 4
    if k1 < t:
        return 1
    if k1 > s:
        return 2
    raise AssertionError("the four cases cover every (k1, k2)")


def so_gl3_stratum(k1: int, k2: int, case: int | None = None) -> QRat:
    """c_(k1,k2) times the (k1, k2) stratum volume for an elliptic gl_3 element."""
    expected = gl3_stratum_case(k1, k2)
    if case is not None and case != expected:
        raise DomainError(f"(k1, k2) = ({k1}, {k2}) falls in case {expected}, not {case}")
    d = k1 + k2
    head = (qpow(3) - 1) * (q * q - 1)
    if expected == 3:
        return QRat(head * qpow(k1), qpow(5 + d))
    if expected == 1:
        m = k1
    elif expected == 2:
        m = k2 - k1
    else:
        m = -(-d // 3)
    return QRat(head * qpow(k2) * ((m + 1) * q - (m - 1)), qpow(6 + d))


def so_type_k1_stratum(n: int, k1: int = 1) -> QRat:
    """c_(k1) times the (k1) stratum volume; independent of k1."""
    if n < 2 or k1 < 1:
        raise DomainError("type (k1) strata need n >= 2 and k1 >= 1")
    return QRat(gl_order(n), (q - 1) * qpow(n * n - 1))


def unramified_residue_value(n: int) -> QRat:
    """Volume when the reduction of chi is irreducible of degree n."""
    return QRat(gl_order(n), qpow(n * n)) * QRat(qpow(n), qpow(n) - 1)


def gl2_stratified(d: int) -> QRat:
    """Sum over strata (k1, d - k1) for an elliptic gl_2 element with d_gamma = d."""
    if d < 0:
        raise DomainError("d must be non-negative")
    total = QRat(QPoly())
    for k1 in range(d // 2 + 1):
        rest = d - 2 * k1
        inner = so_type_k1_stratum(2) if rest > 0 else unramified_residue_value(2)
        total = total + _inv_qpow(k1) * inner
    return total


def gl3_stratified(d: int) -> QRat:
    """Sum over s and strata (k1, k2) with k1 + k2 = d - 3s for an elliptic gl_3 element."""
    if d < 0:
        raise DomainError("d must be non-negative")
    total = QRat(QPoly())
    for s in range(d // 3 + 1):
        rest = d - 3 * s
        level = QRat(QPoly())
        for k1 in range(rest // 2 + 1):
            k2 = rest - k1
            if k1 == 0:
                level = level + (so_type_k1_stratum(3) if k2 > 0 else unramified_residue_value(3))
            else:
                level = level + so_gl3_stratum(k1, k2)
        total = total + _inv_qpow(3 * s) * level
    return total


# Scaling and measure conversion


def scale_reduction(chi: CharPolyData, k: int) -> tuple[CharPolyData, QRat]:
    """chi(p^k x) / p^(deg k) with the stratum multiplier.

    gl and u: q^(-k n(n-1)/2); sp: q^(-k n^2).  Requires ord c_i >= i k
    (for sp, ord of the x^(2n-2i) coefficient >= 2 i k).
    """
    if k < 1:
        raise DomainError("k must be positive")
    p, N, n = chi.p, chi.N, chi.n
    step = 2 if chi.algebra == "sp" else 1
    loss = step * n * k
    if loss >= N:
        raise DomainError(f"precision {N} is too small to divide by p^{loss}")
    new = []
    for i, c in enumerate(chi.coeffs, start=1):
        div = p ** (step * i * k)
        if chi.algebra == "u":
            a, b = c
            if a % div or b % div:
                raise DomainError(f"ord c_{i} is below {i * k}")
            new.append((a // div, b // div))
        else:
            if c % div:
                raise DomainError(f"ord c_{i} is below {step * i * k}")
            new.append(c // div)
    scaled = CharPolyData(chi.algebra, n, tuple(new), p, N - loss)
    exponent = k * n * n if chi.algebra == "sp" else k * n * (n - 1) // 2
    return scaled, _inv_qpow(exponent)


@dataclass(frozen=True)
class FactorInfo:
    """One irreducible factor of the characteristic polynomial.

    degree n_i; res_deg d_i = [kappa_R : kappa]; r the residue degree of the
    field over kappa_R (so the field has inertial degree d_i r); serre the
    Serre invariant S_i; d_bar as in the lower bounds; field_disc the
    valuation of the field discriminant when known; kind 'irred' or 'split'
    in the hermitian and symplectic cases, where ``ramified_over_fixed``
    records whether the extension over the sigma-fixed field ramifies.
    """

    degree: int
    res_deg: int = 1
    r: int = 1
    serre: int = 0
    d_bar: int = 0
    field_disc: int | None = None
    kind: str = "irred"
    ramified_over_fixed: bool = False

    @property
    def inertial_degree(self) -> int:
        return self.res_deg * self.r

    @property
    def serre_over_residue_ring(self) -> int:
        if self.serre % self.res_deg:
            raise DomainError("S must be a multiple of the residue degree")
        return self.serre // self.res_deg


@dataclass(frozen=True)
class FactorData:
    factors: tuple[FactorInfo, ...]
    serre: int | None = None
    disc_val: int | None = None
    serre_psi: int = 0

    def total_serre(self) -> int:
        """S of the whole element: given, or (ord disc - sum of field discs) / 2."""
        if self.serre is not None:
            return self.serre
        if self.disc_val is None or any(f.field_disc is None for f in self.factors):
            raise DomainError("the conversion needs S or every field-discriminant valuation together with ord disc")
        diff = self.disc_val - sum(f.field_disc for f in self.factors)
        if diff < 0 or diff % 2:
            raise DomainError("discriminant valuations are inconsistent")
        return diff // 2

    def rho(self) -> int:
        return self.total_serre() - sum(f.serre for f in self.factors)


def group_factor(algebra: str, n: int) -> QRat:
    """#G(kappa) q^(-dim G) for GL_n, U_n or Sp_2n."""
    if algebra == "gl":
        return QRat(gl_order(n), qpow(n * n))
    if algebra == "u":
        return QRat(u_order(n), qpow(n * n))
    if algebra == "sp":
        return QRat(sp_order(n), qpow(n * (2 * n + 1)))
    raise DomainError(f"unknown algebra {algebra!r}")


def torus_factor(algebra: str, factors: Iterable[FactorInfo]) -> QRat:
    """#T(kappa) q^(-dim T) of the centralizer torus."""
    out = _qr(1)
    for f in factors:
        x = qpow(f.inertial_degree)
        if algebra == "gl" or f.kind == "split":
            out = out * QRat(x - 1, x)
        elif algebra == "sp" and f.ramified_over_fixed:
            out = out * 2
        else:
            out = out * QRat(x + 1, x)
    return out


def conversion_factor(algebra: str, n: int, data: FactorData) -> QRat:
    """The ratio geometric / dmu."""
    shift = data.total_serre() - (data.serre_psi if algebra == "sp" else 0)
    return _inv_qpow(shift) * group_factor(algebra, n) / torus_factor(algebra, data.factors)


def measure_convert(
    value: OrbitalValue,
    direction: str,
    algebra: str,
    n: int,
    data: FactorData,
    acknowledge_char: bool = False,
) -> OrbitalValue:
    """Convert between the geometric measure and dmu ('to_dmu' or 'to_geometric')."""
    if not acknowledge_char:
        raise DomainError(f"measure conversion requires acknowledging the assumption {CHAR_ASSUMPTION}")
    factor = conversion_factor(algebra, n, data)
    notes = tuple(dict.fromkeys(value.assumptions + (CHAR_ASSUMPTION,)))
    if direction == "to_dmu":
        if value.measure != GEOMETRIC:
            raise DomainError("to_dmu expects a geometric value")
        return OrbitalValue(DMU, value.symbolic / factor, value.q, value.theorem, notes)
    if direction == "to_geometric":
        if value.measure != DMU:
            raise DomainError("to_geometric expects a dmu value")
        return OrbitalValue(GEOMETRIC, value.symbolic * factor, value.q, value.theorem, notes)
    raise DomainError(f"unknown direction {direction!r}")


# Parabolic descent


def parabolic_descent(algebra: str, blocks: Sequence[int], n: int | None = None, m: int = 0) -> QRat:
    """Multiplier relating the orbital integral to those of its blocks.

    gl: ``blocks`` are the factor degrees n_i.  u and sp: ``m`` is the rank
    of the block with irreducible factors (half-rank for sp) and ``blocks``
    the sizes l_i of the split blocks, with n = m + 2 sum l_i (u) or
    n = m + sum l_i (sp).
    """
    if algebra == "gl":
        total = sum(blocks)
        if n is not None and n != total:
            raise DomainError("block degrees must sum to n")
        out = group_factor("gl", total)
        for b in blocks:
            out = out / group_factor("gl", b)
        return out
    if n is None:
        raise DomainError("u and sp descent need n")
    if algebra == "u":
        if m + 2 * sum(blocks) != n:
            raise DomainError("u descent needs n = m + 2 sum l_i")
        out = group_factor("u", n) / group_factor("u", m)
        for l in blocks:
            out = out / QRat(gl_order(l).substitute_power(2), qpow(2 * l * l))
        return out
    if algebra == "sp":
        if m + sum(blocks) != n:
            raise DomainError("sp descent needs n = m + sum l_i")
        out = group_factor("sp", n) / group_factor("sp", m)
        for l in blocks:
            out = out / group_factor("gl", l)
        return out
    raise DomainError(f"unknown algebra {algebra!r}")


# Hermitian and symplectic closed forms


def so_u2(ram: str, serre: int) -> ClosedForm:
    """u_2 with a quadratic fixed field, unramified or ramified over F."""
    if serre < 0:
        raise DomainError("S must be non-negative")
    S = serre
    if ram == "unramified":
        return ClosedForm(QRat(q + 1, q), _qr(qpow(S)), "u2-unramified", ("char F = 0 or char F > 2",))
    if ram == "ramified":
        geo = QRat((q + 1) * (qpow(S + 1) - 1), qpow(S + 2))
        return ClosedForm(geo, QRat(qpow(S + 1) - 1, q - 1), "u2-ramified", ("char F = 0 or char F > 2",))
    raise DomainError(f"ramification must be 'unramified' or 'ramified', got {ram!r}")


def s_ab_value(algebra: str, l: int, d: int, n: int) -> QPoly:
    from .counting import s_ab_count

    return s_ab_count(algebra, l, d, n)


def so_dn_lattice(algebra: str, n: int, d_n: int, d_prev: int | None = None) -> QRat:
    """Volume of one type-(d_n) stratum lattice with the contributing Jordan type."""
    if n < 1 or d_n < 1:
        raise DomainError("need n >= 1 and d_n >= 1")
    if algebra == "u":
        if n < 2:
            raise DomainError("u strata need n >= 2")
        if d_prev is None or d_prev < 1:
            raise DomainError("the u case needs d_(n-1) >= 1")
        if d_prev < d_n:
            return QRat(u_order(n - 2), qpow((n - 2) ** 2 + (2 * n - 2) * d_n - d_prev))
        return QRat(u_order(n - 2) * (q - 1), qpow((n - 2) ** 2 + (2 * n - 3) * d_n + 1))
    if algebra == "sp":
        return QRat(sp_order(n - 1) * (q - 1), qpow(2 * n * n - 3 * n + 2 + (2 * n - 1) * d_n))
    raise DomainError(f"unknown algebra {algebra!r}")


def so_dn_stratum(algebra: str, n: int, d_n: int, d_prev: int | None = None) -> tuple[QRat, QRat]:
    """(single-lattice value, total over type-(d_n) lattices).

    The total counts the lattices whose Jordan type makes the stratum
    non-empty: (d_(n-1), 2 d_n - d_(n-1)) when d_(n-1) < d_n, else (d_n, d_n).
    """
    single = so_dn_lattice(algebra, n, d_n, d_prev)
    if algebra == "u":
        l = d_prev if d_prev < d_n else d_n
        if l < 1:
            raise DomainError("the u stratum needs d_(n-1) >= 1")
        count = s_ab_value("u", l, d_n, n)
    else:
        count = s_ab_value("sp", d_n, d_n, n)
    return single, single * count


def so_dn_total_closed(algebra: str, n: int) -> QRat:
    """The type-(d_n) total in closed form, independent of d_n and d_(n-1)."""
    if algebra == "u":
        return QRat(u_order(n), (ONE + QRat(ONE, q)).num * qpow(n * n - 1))
    if algebra == "sp":
        return group_factor("sp", n)
    raise DomainError(f"unknown algebra {algebra!r}")


# Lower bounds


def epsilon(d_bar: int) -> int:
    return 1 if d_bar % 2 == 0 else 2


def alpha_conjectural(d_bar: int) -> int:
    """Second-order coefficient predicted by the conjectural expansion; evidence only."""
    if d_bar <= 1:
        return 0
    return 1 if d_bar == 2 else 2


def bracket(d_bar: int) -> QRat:
    """1 + 2x^-1 + ... + 2x^-(floor(d/2)-1) + eps(d) x^-floor(d/2), and 1 when d_bar <= 1."""
    if d_bar <= 1:
        return _qr(1)
    h = d_bar // 2
    num = {h: 1}
    for j in range(1, h):
        num[h - j] = 2
    num[0] = epsilon(d_bar)
    return QRat(QPoly.from_dict(num), qpow(h))


def n_prime(d_bar: int) -> QRat:
    """x/(x-1) times the bracket, as a function of x = q."""
    return QRat(q, q - 1) * bracket(d_bar)


def n_prime_dmu(serre_r: int, r: int, d_bar: int) -> QRat:
    """(x^S + ... + x^(S-r+1)) times the bracket; 1 when d_bar = 1."""
    if d_bar == 1:
        return _qr(1)
    lead = QPoly.from_dict({serre_r - j: 1 for j in range(r)})
    return _qr(lead) * bracket(d_bar)


def _at_power(r: QRat, k: int) -> QRat:
    return QRat(r.num.substitute_power(k), r.den.substitute_power(k)) if k != 1 else r


@dataclass(frozen=True)
class BoundValue:
    geometric: QRat
    dmu: QRat | None


def lower_bound(
    algebra: str,
    n: int,
    data: FactorData,
    l: int | None = None,
    d: int | None = None,
    split_factors: Sequence[FactorInfo] = (),
    fixed_ramified: bool = False,
) -> BoundValue:
    """Lower bounds in both measures.

    gl: the product over ``data.factors`` with x = q^(d_i).  u: the irreducible
    block uses l and d, the split factors use x = q^(2 d_i).  sp: the same with
    x = q^(d_i), and ``fixed_ramified`` selects the factor 2 in dmu.
    """
    if algebra == "gl":
        geo = group_factor("gl", n)
        dmu = QRat(qpow(data.rho()), ONE) if data.serre is not None or data.disc_val is not None else None
        for f in data.factors:
            geo = geo * _at_power(n_prime(f.d_bar), f.res_deg)
            if dmu is not None:
                dmu = dmu * _at_power(n_prime_dmu(f.serre_over_residue_ring, f.r, f.d_bar), f.res_deg)
        return BoundValue(geo, dmu)
    if l is None or d is None:
        raise DomainError("the hermitian and symplectic bounds need l and d")
    power = 2 if algebra == "u" else 1
    if algebra == "u":
        geo = group_factor("u", n) / (_qr(1) + _inv_qpow(l))
        lead = (_qr(1) + _inv_qpow(d)) / (_qr(1) + _inv_qpow(l))
    elif algebra == "sp":
        geo = group_factor("sp", n)
        lead = _qr(2) if fixed_ramified else _qr(1) + _inv_qpow(d)
    else:
        raise DomainError(f"unknown algebra {algebra!r}")
    rho = data.total_serre() - sum(f.serre for f in split_factors)
    shift = rho - (data.serre_psi if algebra == "sp" else 0)
    dmu = lead * (qpow(shift) if shift >= 0 else _inv_qpow(-shift))
    for f in split_factors:
        geo = geo * _at_power(n_prime(f.d_bar), power * f.res_deg)
        dmu = dmu * _at_power(n_prime_dmu(f.serre_over_residue_ring, f.r, f.d_bar), power * f.res_deg)
    return BoundValue(geo, dmu)


# Comparison bounds


def _partitions_up_to(total: int):
    """All partitions with |lambda| <= total, as nonincreasing tuples."""
    out = [()]

    def rec(prefix, remaining, largest):
        for part in range(min(remaining, largest), 0, -1):
            lam = prefix + (part,)
            out.append(lam)
            rec(lam, remaining - part, part)

    rec((), total, total)
    return out


def yun_bounds(serre_r: int, r: int) -> tuple[QPoly, QPoly]:
    """The comparison polynomials N(x) and M(x) in the variable x = q.

    M uses the standard conventions: l(lambda) is the number of parts and
    m_1(lambda) the multiplicity of the part 1.
    """
    S = serre_r
    if S < 0 or r < 1:
        raise DomainError("need S >= 0 and r >= 1")
    if r <= S:
        N = QPoly.from_dict({S - j: 1 for j in range(r)}) + r
    else:
        N = QPoly.from_dict({j: 1 for j in range(1, S + 1)}) + (S + 1)
    terms: dict[int, int] = {}
    for lam in _partitions_up_to(S):
        size, length, ones = sum(lam), len(lam), lam.count(1)
        if ones < r:
            terms[S - length] = terms.get(S - length, 0) + 1
        if S - r <= size < S:
            terms[size - length] = terms.get(size - length, 0) + 1
    return N, QPoly.from_dict(terms)


def second_leading_coefficient(poly: QRat | QPoly, leading_exponent: int) -> Fraction:
    """Coefficient of q^(leading - 1) in the expansion at infinity."""
    r = as_rat(poly)
    return r.coefficient_at_infinity(leading_exponent - 1)


def expected_second_coefficient(d_bar: int, r: int) -> int:
    """The case table for the N'-bound: d_bar = 2 gives 1 or 2, d_bar >= 3 gives 2 or 3."""
    if d_bar < 2:
        raise DomainError("the table covers d_bar >= 2")
    base = 1 if d_bar == 2 else 2
    return base if r == 1 else base + 1


# Parameters of prime-degree elliptic elements


@dataclass(frozen=True)
class EllipticParams:
    """Bound parameters of an elliptic gl_n element with n prime and reduction a power of a linear factor."""

    n: int
    ram: str
    serre: int

    @property
    def d_gamma(self) -> int:
        n, S = self.n, self.serre
        if self.ram == "unramified":
            per = n * (n - 1) // 2
            if S % per:
                raise DomainError("unramified S must be a multiple of n(n-1)/2")
            return n * (S // per)
        # S = (d - 1)(n - 1)/2
        twice = 2 * S
        if twice % (n - 1):
            raise DomainError("ramified S must be a multiple of (n-1)/2")
        d = twice // (n - 1) + 1
        if d % n == 0:
            raise DomainError(f"no totally ramified element has S = {S} for n = {n}")
        return d

    def factor(self) -> FactorInfo:
        d = self.d_gamma
        if self.ram == "unramified" and d == 0:
            return FactorInfo(self.n, res_deg=self.n, r=1, serre=0, d_bar=0)
        r = self.n if self.ram == "unramified" else 1
        return FactorInfo(self.n, res_deg=1, r=r, serre=self.serre, d_bar=d)


def closed_elliptic(n: int, ram: str, serre: int) -> ClosedForm:
    if n == 2:
        return so_gl2(True, ram, serre)
    if n == 3:
        return so_gl3(f"elliptic-{ram}", serre)
    raise DomainError("closed elliptic forms exist for n = 2 and n = 3")


def conjecture_coefficient(serre: int, ram: str) -> tuple[Fraction, int, list[Fraction]]:
    """Evidence data for gl_3: (coefficient of q^-d in the normalized expansion, alpha(d_bar), lower terms).

    The normalized expansion divides the closed geometric value by
    #GL_3 q^-9 * x/(x-1) with x = q^d and d the residue degree.  The lower
    terms are the coefficients of q^-1 .. q^-(d-1), which should vanish.
    """
    params = EllipticParams(3, ram, serre)
    f = params.factor()
    value = so_gl3(f"elliptic-{ram}", serre).geometric
    x = qpow(f.res_deg)
    ratio = value / (group_factor("gl", 3) * QRat(x, x - 1))
    coeff = ratio.coefficient_at_infinity(-f.res_deg)
    lower = [ratio.coefficient_at_infinity(-j) for j in range(1, f.res_deg)]
    return coeff, alpha_conjectural(f.d_bar), lower

