"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit
from math import comb

import numpy as np

from tetraplectic import _backend
from tetraplectic.orbit_forms import sp_bracket_table


def cases(rng):
    a = rng.standard_normal((8, 8, 4))
    b = rng.standard_normal((8, 8, 4))
    dets = [rng.standard_normal((5, 5, 4)) for _ in range(200)]
    table = np.ascontiguousarray(sp_bracket_table(3))
    coeffs = rng.standard_normal(comb(21, 4))
    return {
        "qmatmul 8x8": lambda k: k.qmatmul(a, b),
        "dieudonne_det 5x5 (x200)": lambda k: [k.dieudonne_det(d, 1e-12) for d in dets],
        "CE d on sp(3), degree 4": lambda k: k.ce_differential(21, 4, coeffs, table),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _backend.available()
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s}" + "".join(f"{name:>14s}" for name in backends) + "   speedup")
    for label, fn in cases(rng).items():
        times = {}
        for name, mod in backends.items():
            fn(mod)
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:28s}" + "".join(f"{t * 1e3:12.3f}ms" for t in times.values())
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
