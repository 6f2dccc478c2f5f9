"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import sys
import timeit

import numpy as np

from mocakit import _pykernels
from mocakit.nonlinear_moca import _rule_images, rule_from_index, type_masks

try:
    from mocakit import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    table = np.array(rule_from_index(5, 0x6a5c).full_table(), dtype=np.uint8)
    images = _rule_images(5)
    orient = np.arange(images.shape[0], dtype=np.int64)
    left = np.tile(orient, len(type_masks(5)))
    right = left ^ np.repeat(type_masks(5), orient.size)
    signs = (1 - 2 * rng.integers(0, 2, 1 << 14)).astype(np.int64)
    perm = rng.permutation(1 << 16).astype(np.int64)
    a = rng.permutation(1 << 10).astype(np.uint32)
    b = rng.permutation(1 << 10).astype(np.uint32)
    return {
        "binary_ca_image d=5 width=12": lambda k: k.binary_ca_image(table, 5, 12),
        "batch_orthogonal d=5 (17920 pairs)": lambda k: k.batch_orthogonal(images, left, right, 16),
        "fwht n=14": lambda k: k.fwht(signs.copy()),
        "cycle_lengths 2^16": lambda k: k.cycle_lengths(perm),
        "superposition_is_bijective N=32": lambda k: k.superposition_is_bijective(a, b, 32),
    }


def check_agreement():
    for name, fn in cases().items():
        x, y = fn(_pykernels), fn(_ckernels)
        if isinstance(x, list) or isinstance(y, list):
            ok = list(x) == list(y)
        else:
            ok = np.array_equal(np.asarray(x), np.asarray(y))
        if not ok:
            raise SystemExit(f"backends disagree on {name}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    check_agreement()
    rows = []
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        rows.append({"kernel": name, "python_s": py, "cython_s": cy, "speedup": py / cy})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':<38}{'python':>12}{'cython':>12}{'speedup':>10}")
        for r in rows:
            print(f"{r['kernel']:<38}{r['python_s']:>11.4f}s{r['cython_s']:>11.4f}s"
                  f"{r['speedup']:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
