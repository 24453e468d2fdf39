"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--quick]
"""

import argparse
import time

import numpy as np

from bentdesign import _fallback, kernels
from bentdesign.boolfn import parse_function
from bentdesign.codes import code_from_ints
from bentdesign.constructions import mm_bent, translation_design
from bentdesign.gf2 import pack_ints


def workloads(quick):
    rng = np.random.default_rng(1)
    n = 256
    mat = pack_ints([int.from_bytes(rng.bytes(n // 8), "little") for _ in range(n)], n)

    td = translation_design(mm_bent(4, list(range(16)), parse_function("x1*x2*x3", 4))).design
    masks = pack_ints([blk.mask for blk in td.blocks], td.v)
    full = pack_ints([(1 << td.v) - 1], td.v)[0]

    k = 16 if quick else 20
    code = code_from_ints([int.from_bytes(rng.bytes(8), "little") for _ in range(k)], 64)
    gen = code.generator.data

    f4 = parse_function("x1*x2+x3*x4").to_int()
    f5 = parse_function("x1*x3+x2*x4+x1*x2*x5").to_int()
    return [
        ("rref 256x256", lambda mod: mod.rref(mat, n)),
        ("tsdp scan, 256 blocks", lambda mod: mod.sd_scan(masks, full, 3)),
        (f"weight distribution k={k}", lambda mod: mod.weight_distribution(gen, 64)),
        ("codewords of weight 32", lambda mod: mod.codewords_of_weight(gen, 64, 32)),
        ("affine scan m=4", lambda mod: mod.scan_affine(f4, f4, 4, 0, 1, 16, 0)),
        ("affine scan m=5, first row 1..2", lambda mod: mod.scan_affine(f5, f5, 5, 0, 1, 3, 0)),
    ]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    mods = kernels.backends()
    if len(mods) == 1:
        print("compiled extension not available; only the fallback will be timed")
    names = [m.BACKEND for m in mods]
    print(f"{'kernel':<34}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(mods) > 1 else ""))
    for label, run in workloads(args.quick):
        times = [best_of(lambda: run(mod), args.repeat) for mod in mods]
        line = f"{label:<34}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            line += f"{times[-1] / times[0]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
