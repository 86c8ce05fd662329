"""Time the compiled oracle kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each case is run once per
backend; the counts must agree, so the script doubles as a consistency check.
"""

from __future__ import annotations

import argparse
import time

from soint.oracle import _fallback
from soint.oracle.volume import _alpha_scalar
from soint.ring import QuadModulus, alpha

try:
    from soint.oracle import _kernels
except ImportError:  # extension not compiled
    _kernels = None


def _gl_case(n: int, p: int, N: int, target: list[int]):
    first = (p**N) ** n

    def run(mod):
        return mod.count_charpoly_fiber(n, p, N, target, 0, first)

    return f"gl{n} charpoly fiber p={p} N={N}", run


def _u_case(p: int, N: int):
    m = p**N
    quad = QuadModulus.standard(p, N)
    al = alpha(quad)
    pair = (al.a.value, al.b.value)
    target = [(0, 0), (3 * pow(quad.v, -1, m) % m, 0)]
    s_total = _alpha_scalar((0, 0), pair, m, p)
    flat = [c for t in target for c in t]

    def run(mod):
        return mod.count_u_fiber(2, p, N, quad.u, quad.v, pair[0], pair[1], s_total, flat, 0, m)

    return f"u2 fiber p={p} N={N}", run


def cases(quick: bool):
    out = [_gl_case(2, 2, 3, [0, 2]), _gl_case(2, 3, 2, [0, 3]), _gl_case(3, 2, 2, [0, 0, 2])]
    if not quick:
        out += [_gl_case(2, 2, 5, [0, 2]), _gl_case(3, 2, 3, [0, 0, 2]), _u_case(3, 2)]
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="skip the slow cases")
    args = parser.parse_args()
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return
    print(f"{'case':36} {'count':>10} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, run in cases(args.quick):
        t0 = time.perf_counter()
        fast = run(_kernels)
        t1 = time.perf_counter()
        slow = run(_fallback)
        t2 = time.perf_counter()
        if fast != slow:
            raise SystemExit(f"{name}: backends disagree ({fast} vs {slow})")
        ratio = (t2 - t1) / max(t1 - t0, 1e-9)
        print(f"{name:36} {fast:>10} {t1 - t0:>10.4f} {t2 - t1:>10.4f} {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
