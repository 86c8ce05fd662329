"""Command-line front end: ``so compute | stratify | bounds | convert | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from . import formula as fm
from .counting import c_type, s_ab_count
from .errors import DomainError, SOError
from .invariant import CharPolyData, classify_and_serre, with_precision_doubling
from .oracle.volume import budget_from_env, first_stable, stabilization_scan
from .qsym import QRat, parse_poly, rat_sum, render_rat

EMITS = ("rational", "symbolic", "json")


@dataclass(frozen=True)
class JobSpec:
    command: str
    algebra: str = "gl"
    n: int = 2
    coeffs: tuple | None = None
    preset: str | None = None
    p: int | None = None
    q: int | None = None
    measure: str = fm.GEOMETRIC
    serre: int | None = None
    ram: str | None = None
    precision: int | None = None
    budget: int | None = None

    def validate(self) -> None:
        if self.algebra not in ("gl", "u", "sp"):
            raise DomainError(f"unknown algebra {self.algebra!r}")
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.measure not in fm.MEASURES:
            raise DomainError(f"measure must be one of {fm.MEASURES}")
        if self.ram is not None and self.ram not in ("unramified", "ramified"):
            raise DomainError("--ram must be 'unramified' or 'ramified'")

    def to_json(self) -> dict:
        data = asdict(self)
        if self.coeffs is not None:
            data["coeffs"] = list(self.coeffs)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "JobSpec":
        data = dict(data)
        if data.get("coeffs") is not None:
            data["coeffs"] = tuple(tuple(c) if isinstance(c, list) else c for c in data["coeffs"])
        return cls(**data)


# Named closed-form families, keyed by (algebra, n, name)

PRESET_NAMES = {
    ("gl", 1): ("gl1",),
    ("gl", 2): ("hyperbolic", "elliptic-unramified", "elliptic-ramified"),
    ("gl", 3): fm.GL3_CASES,
    ("u", 2): ("unramified", "ramified"),
}


def _family(algebra: str, n: int, name: str, args: argparse.Namespace) -> fm.ClosedForm:
    S = args.serre
    if algebra == "gl" and n == 1:
        return fm.so_gl1()
    if algebra == "gl" and n == 2:
        if name == "hyperbolic":
            return fm.so_gl2(False, None, S)
        if name in ("elliptic-unramified", "elliptic-ramified"):
            return fm.so_gl2(True, name.split("-")[1], S)
    if algebra == "gl" and n == 3:
        if name == "quad-factor":
            return fm.so_gl3(name, S, args.quad_ram, args.quad_serre)
        if name in fm.GL3_CASES:
            return fm.so_gl3(name, S)
    if algebra == "u" and n == 2 and name in ("unramified", "ramified", "elliptic-unramified", "elliptic-ramified"):
        if S is None:
            raise DomainError("u2 needs --serre")
        return fm.so_u2(name.split("-")[-1], S)
    known = ", ".join(PRESET_NAMES.get((algebra, n), ())) or "none"
    raise DomainError(f"no closed form named {name!r} for {algebra}_{n}; known: {known}")


def parse_coeffs(text: str, algebra: str) -> tuple:
    """Comma-separated coefficients c_1..c_n; hermitian entries as a:b meaning a + b t."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if algebra == "u":
            a, _, b = item.partition(":")
            out.append((int(a), int(b or 0)))
        else:
            out.append(int(item))
    return tuple(out)


def parse_instance(text: str) -> tuple[int, tuple[int, ...]]:
    """A monic polynomial in x, like x^2+2x+2, as (n, (c_1, ..., c_n))."""
    poly = parse_poly(text.replace("x", "q"))
    terms = poly.terms()
    n = max(terms) if terms else 0
    if n < 1 or terms.get(n) != 1 or min(terms) < 0:
        raise DomainError(f"{text!r} is not a monic polynomial of positive degree")
    return n, tuple(terms.get(n - i, 0) for i in range(1, n + 1))


def _closed_from_coeffs(args: argparse.Namespace, coeffs: tuple) -> tuple[fm.ClosedForm, dict]:
    if args.algebra != "gl" or args.n not in (2, 3):
        raise DomainError("coefficient input is supported for elliptic gl_2 and gl_3; use --preset or --ram otherwise")
    if args.p is None:
        raise DomainError("coefficient input needs --p")

    def classify(chi: CharPolyData):
        return classify_and_serre(chi)

    if args.N is not None:
        report = classify(CharPolyData("gl", args.n, coeffs, args.p, args.N))
    else:
        report = with_precision_doubling(classify, "gl", args.n, coeffs, args.p)
    ram = "unramified" if report.ramification == "unramified" else "ramified"
    info = {"d_gamma": report.d_gamma, "ramification": ram, "serre": report.serre, "disc_val": report.disc_val}
    return fm.closed_elliptic(args.n, ram, report.serre), info


def _emit(value: fm.OrbitalValue, emit: str, extra: dict | None = None) -> str:
    if emit == "json":
        data = value.to_json()
        if extra:
            data["instance"] = extra
        return json.dumps(data, sort_keys=True)
    if emit == "symbolic":
        return render_rat(value.symbolic.reduced())
    if value.q is None:
        raise DomainError("--emit rational needs --q or --p")
    r = value.numeric
    return f"{r.numerator}/{r.denominator}"


def cmd_compute(args: argparse.Namespace) -> int:
    q_value = args.q if args.q is not None else args.p
    extra: dict = {}
    if args.preset:
        closed = _family(args.algebra, args.n, args.preset, args)
    elif args.coeffs:
        closed, extra = _closed_from_coeffs(args, parse_coeffs(args.coeffs, args.algebra))
        args.serre = extra["serre"]
    elif args.ram:
        closed = _family(args.algebra, args.n, f"elliptic-{args.ram}", args)
    else:
        raise DomainError("compute needs --coeffs, --preset or --ram")
    value = closed.value(args.measure, q_value, acknowledge_char=args.assume_char)
    print(_emit(value, args.emit, extra or None))
    return 0


def _rat_text(r: QRat, q_value: int | None) -> str:
    if q_value is None:
        return render_rat(r)
    v = r.evaluate(q_value)
    return f"{v.numerator}/{v.denominator}"


def stratify_rows(algebra: str, n: int, d: int, d_prev: int | None = None) -> tuple[list[dict], QRat]:
    """Rows (type, count, per-lattice value, contribution) and their total."""
    rows = []
    if algebra == "gl" and n in (2, 3):
        for s in range(d // n + 1 if n == 3 else 1):
            rest = d - 3 * s
            for k1 in range(rest // 2 + 1):
                k2 = rest - k1
                if n == 2:
                    inner = fm.so_type_k1_stratum(2) if rest - 2 * k1 > 0 else fm.unramified_residue_value(2)
                    inner = fm._inv_qpow(k1) * inner
                    t = tuple(k for k in (k1, k2) if k > 0)
                    scale = 0
                else:
                    if k1 == 0:
                        inner = fm.so_type_k1_stratum(3) if k2 > 0 else fm.unramified_residue_value(3)
                    else:
                        inner = fm.so_gl3_stratum(k1, k2)
                    inner = fm._inv_qpow(3 * s) * inner
                    t = tuple(k for k in (k1, k2) if k > 0)
                    scale = s
                count = c_type(t, n) if t else c_type((), n)
                rows.append(
                    {
                        "type": list(t),
                        "scale": scale,
                        "count": count,
                        "per_lattice": inner / count,
                        "contribution": inner,
                    }
                )
        return rows, rat_sum(r["contribution"] for r in rows)
    if algebra in ("u", "sp"):
        single, total = fm.so_dn_stratum(algebra, n, d, d_prev)
        live = (d_prev if d_prev < d else d) if algebra == "u" else d
        for l in range(1, d + 1) if algebra == "u" else (d,):
            count = s_ab_count(algebra, l, d, n)
            per = single if l == live else QRat(count * 0)
            rows.append({"type": [d], "jordan": [l, 2 * d - l], "count": count, "per_lattice": per, "contribution": per * count})
        return rows, total
    raise DomainError("stratify supports gl_2, gl_3 and the type-(d_n) strata of u_n and sp_2n")


def cmd_stratify(args: argparse.Namespace) -> int:
    q_value = args.q if args.q is not None else args.p
    rows, total = stratify_rows(args.algebra, args.n, args.d, args.d_prev)
    if args.emit == "json":
        out = [{k: (_rat_text(v, q_value) if not isinstance(v, (list, int)) else v) for k, v in r.items()} for r in rows]
        print(json.dumps({"rows": out, "total": _rat_text(total, q_value)}, sort_keys=True))
        return 0
    for r in rows:
        label = "(" + ",".join(map(str, r["type"])) + ")"
        if "jordan" in r:
            label += " jordan (" + ",".join(map(str, r["jordan"])) + ")"
        elif r.get("scale"):
            label += f" scale {r['scale']}"
        print(f"{label}\t{_rat_text(fm.as_rat(r['count']), q_value)}\t{_rat_text(r['per_lattice'], q_value)}\t{_rat_text(r['contribution'], q_value)}")
    print(f"total\t{_rat_text(total, q_value)}")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.serre is None or args.ram is None:
        raise DomainError("bounds needs --serre and --ram")
    if args.q is None:
        raise DomainError("bounds needs --q")
    if args.algebra == "gl":
        from .suite import bound_report

        values = bound_report(args.n, args.ram, args.serre, args.q)
    elif args.algebra == "u" and args.n == 2:
        values = u2_bound_report(args.ram, args.serre, args.q)
    else:
        raise DomainError("bounds supports elliptic gl_2, gl_3 and u_2")
    text = {k: (f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v) for k, v in values.items()}
    if args.emit == "json":
        print(json.dumps(text, sort_keys=True))
    else:
        for key in ("yun_N", "yun_M", "bound", "exact", "ordered"):
            if key in text:
                print(f"{key}\t{text[key]}")
    return 0


def u2_bound_report(ram: str, serre: int, q_value: int) -> dict:
    """N'-bound against the exact u_2 value; l = 1 and d the inertial degree of the fixed field."""
    if ram != "ramified":
        raise DomainError("the u_2 bound applies to an irreducible characteristic polynomial (ramified case)")
    f = fm.FactorInfo(2, 1, 1, serre)
    bound = fm.lower_bound("u", 2, fm.FactorData((f,), serre=serre), l=1, d=1).dmu
    exact = fm.so_u2(ram, serre).dmu
    values = {"bound": bound.evaluate(q_value), "exact": exact.evaluate(q_value)}
    values["ordered"] = values["bound"] < values["exact"]
    return values


def cmd_verify(args: argparse.Namespace) -> int:
    from .suite import CRITERIA, Record

    budget = args.budget if args.budget is not None else budget_from_env()
    records: list[Record] = []
    if args.instance:
        if args.p is None:
            raise DomainError("--instance needs --p")
        n, coeffs = parse_instance(args.instance)
        lo, _, hi = (args.scan_N or "1..3").partition("..")
        scan = stabilization_scan(args.p, n, "gl", list(coeffs), range(int(lo), int(hi or lo) + 1), budget=budget)
        ns = argparse.Namespace(algebra="gl", n=n, p=args.p, N=None)
        try:
            closed, _ = _closed_from_coeffs(ns, coeffs)
            expected = closed.geometric.evaluate(args.p)
            formula_text = f"{expected.numerator}/{expected.denominator}"
        except DomainError as err:
            expected, formula_text = None, f"unavailable: {err}"
        last = scan[-1].volume
        stable_at = first_stable(scan)
        records.append(
            Record(
                args.instance,
                formula_text,
                f"{last.numerator}/{last.denominator}",
                stable_at,
                expected is not None and stable_at is not None and last == expected,
                detail={"volumes": [f"{e.volume.numerator}/{e.volume.denominator}" for e in scan]},
            )
        )
    else:
        names = [args.only] if args.only else list(CRITERIA)
        for name in names:
            if name not in CRITERIA:
                raise DomainError(f"unknown check {name!r}; choose from {', '.join(CRITERIA)}")
            records.extend(CRITERIA[name][1](budget=budget))
    for rec in records:
        if args.emit == "json":
            print(json.dumps(rec.to_json(), sort_keys=True))
        else:
            status = "EVIDENCE" if rec.evidence else ("PASS" if rec.match else "FAIL")
            vols = rec.detail.get("volumes")
            tail = f" volumes {', '.join(vols)}" if vols else ""
            print(f"{status}\t{rec.instance}\tformula {rec.formula_value}\toracle {rec.oracle_value}{tail}")
    failed = [r for r in records if not r.match and not r.evidence]
    return 5 if failed else 0


def cmd_convert(args: argparse.Namespace) -> int:
    """Convert a closed form between the two measures for an elliptic gl element."""
    if args.serre is None or args.ram is None:
        raise DomainError("convert needs --serre and --ram")
    closed = _family(args.algebra, args.n, f"elliptic-{args.ram}", args)
    params = fm.EllipticParams(args.n, args.ram, args.serre)
    f = params.factor()
    if args.algebra == "u":
        f = fm.FactorInfo(2, 1, 1, args.serre)
    data = fm.FactorData((f,), serre=args.serre)
    q_value = args.q if args.q is not None else args.p
    if args.measure == fm.GEOMETRIC:
        src = closed.value(fm.GEOMETRIC, q_value)
        out = fm.measure_convert(src, "to_dmu", args.algebra, args.n, data, acknowledge_char=args.assume_char)
    else:
        src = closed.value(fm.DMU, q_value, acknowledge_char=args.assume_char)
        out = fm.measure_convert(src, "to_geometric", args.algebra, args.n, data, acknowledge_char=args.assume_char)
    print(_emit(out, args.emit))
    return 0


def job_from_args(args: argparse.Namespace) -> JobSpec:
    coeffs = getattr(args, "coeffs", None)
    return JobSpec(
        command=args.command,
        algebra=getattr(args, "algebra", "gl"),
        n=getattr(args, "n", 2),
        coeffs=parse_coeffs(coeffs, args.algebra) if coeffs else None,
        preset=getattr(args, "preset", None),
        p=getattr(args, "p", None),
        q=getattr(args, "q", None),
        measure=getattr(args, "measure", fm.GEOMETRIC),
        serre=getattr(args, "serre", None),
        ram=getattr(args, "ram", None),
        precision=getattr(args, "N", None),
        budget=getattr(args, "budget", None),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="so", description="Exact stable orbital integrals and their brute-force checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--algebra", choices=("gl", "u", "sp"), default="gl")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--p", type=int, help="residue characteristic; also the default q")
        p.add_argument("--q", type=int, help="evaluate at this q")
        p.add_argument("--serre", type=int, help="Serre invariant S")
        p.add_argument("--ram", choices=("unramified", "ramified"))
        p.add_argument("--emit", choices=EMITS, default="rational")
        p.add_argument("--assume-char", action="store_true", help="acknowledge char F = 0 or char F > n (needed for dmu)")

    c = sub.add_parser("compute", help="evaluate a closed formula")
    common(c)
    c.add_argument("--coeffs", help="c_1,...,c_n of x^n + c_1 x^(n-1) + ... + c_n")
    c.add_argument("--N", type=int, help="working precision for coefficient input (default: doubling)")
    c.add_argument("--preset", help="closed-form family, e.g. hyperbolic or elliptic-ramified")
    c.add_argument("--measure", choices=fm.MEASURES, default=fm.GEOMETRIC)
    c.add_argument("--quad-ram", choices=("unramified", "ramified"))
    c.add_argument("--quad-serre", type=int)
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("stratify", help="list the strata contributing to a closed formula")
    common(s)
    s.add_argument("--d", type=int, required=True, help="d_gamma for gl, d_n for u and sp")
    s.add_argument("--d-prev", type=int, help="d_(n-1) for u")
    s.set_defaults(func=cmd_stratify)

    b = sub.add_parser("bounds", help="compare Yun's bounds, the N' bound and the exact dmu value")
    common(b)
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("convert", help="convert a closed form between the two measures")
    common(v)
    v.add_argument("--measure", choices=fm.MEASURES, default=fm.GEOMETRIC, help="measure of the source value")
    v.set_defaults(func=cmd_convert)

    r = sub.add_parser("verify", help="check formulas against exhaustive enumeration")
    r.add_argument("--only", help="run one check: gl2-oracle, gl3-oracle, u2-sp4, counts, fibers, symbolic, bounds, conjecture")
    r.add_argument("--instance", help="monic polynomial such as x^2+2")
    r.add_argument("--p", type=int)
    r.add_argument("--scan-N", help="precision range lo..hi")
    r.add_argument("--budget", type=int)
    r.add_argument("--emit", choices=EMITS, default="rational")
    r.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job_from_args(args).validate()
        return args.func(args)
    except SOError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())
