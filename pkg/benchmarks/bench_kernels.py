"""Time rank mod p with the compiled kernel against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from plane_blowups import _fallback
from plane_blowups.linalg import DEFAULT_PRIME

try:
    from plane_blowups import _kernels
except ImportError:
    _kernels = None


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'fallback s':>12} {'compiled s':>12} {'speedup':>8}")
    for n in args.sizes:
        a = rng.integers(0, args.prime, size=(n, n), dtype=np.int64)
        t_py = min(timeit.repeat(lambda: _fallback.rank_modp(a.copy(), args.prime), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{n:>6} {t_py:>12.4f} {'n/a':>12} {'':>8}")
            continue
        t_c = min(timeit.repeat(lambda: _kernels.rank_modp(a.copy(), args.prime), number=1, repeat=args.repeat))
        assert _kernels.rank_modp(a.copy(), args.prime) == _fallback.rank_modp(a.copy(), args.prime)
        print(f"{n:>6} {t_py:>12.4f} {t_c:>12.4f} {t_py / t_c:>8.1f}")


if __name__ == "__main__":
    main()
