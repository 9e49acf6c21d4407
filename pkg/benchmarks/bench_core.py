"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_core.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import sys
import timeit

import numpy as np

from rdsmetric import _backend


def cases(rng):
    pts = lambda n: np.ascontiguousarray(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
    ens = lambda n, t: np.ascontiguousarray(rng.normal(size=(n, t, 1)) + 1j * rng.normal(size=(n, t, 1)))
    g4 = np.ascontiguousarray(rng.uniform(size=(10, 20, 10, 20)))
    a = rng.uniform(size=(200, 200))
    slot = np.ascontiguousarray(a @ a.T / 200)
    small_slot = np.ascontiguousarray(slot[:60, :60])
    small_g4 = np.ascontiguousarray(g4[:4, :10, :4, :10])
    x1, x2 = ens(50, 64), ens(50, 64)
    p, q = pts(400), pts(400)
    return [
        ("gaussian_gram 400x400", lambda b: b.gaussian_gram(p, q, 0.5)),
        ("l1_mean N=50 T=64", lambda b: b.l1_mean(x1, x2, 0.5)),
        ("enum_l m=2 N=10 tau=20", lambda b: b.enum_l(g4, 2)),
        ("enum_l m=3 N=4 tau=10", lambda b: b.enum_l(small_g4, 3)),
        ("enum_l_tilde m=2 S=200", lambda b: b.enum_l_tilde(slot, 2)),
        ("enum_l_tilde m=3 S=60", lambda b: b.enum_l_tilde(small_slot, 3)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args(argv)

    if "cython" not in _backend.available():
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1
    backends = {name: _backend.get(name) for name in ("cython", "python")}
    results = []
    print(f"{'case':<28}{'cython (s)':>12}{'python (s)':>12}{'speedup':>9}  agree")
    for name, fn in cases(np.random.default_rng(0)):
        row = {"case": name}
        outs = {}
        for bname, b in backends.items():
            outs[bname] = fn(b)
            row[bname] = min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat))
        agree = np.allclose(outs["cython"], outs["python"], rtol=1e-11, atol=1e-14)
        row["speedup"] = row["python"] / row["cython"]
        row["agree"] = bool(agree)
        results.append(row)
        print(f"{name:<28}{row['cython']:>12.4g}{row['python']:>12.4g}{row['speedup']:>8.1f}x  {agree}")
    if args.json:
        with open(args.json, "w") as f:
            json.dump(results, f, indent=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
