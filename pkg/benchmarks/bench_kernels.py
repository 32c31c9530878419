"""Compare the compiled LCS kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--words 300] [--chars 50000] [--repeat 3]

Times the all-pairs cognate matrix on random word lists and a full mapping
run on a synthetic bitext, once per backend.
"""
import argparse
import contextlib
import time

import numpy as np

from bimap import _kernels_py, kernels
from bimap.pipeline import map_bitext
from bimap.synth import SynthSpec, generate_synthetic

try:
    from bimap import _kernels as _compiled
except ImportError:
    _compiled = None


@contextlib.contextmanager
def backend(impl):
    saved = kernels.lcs_length, kernels.lcsr_exceeds, kernels.cognate_matrix
    kernels.lcs_length, kernels.lcsr_exceeds, kernels.cognate_matrix = (
        impl.lcs_length, impl.lcsr_exceeds, impl.cognate_matrix)
    try:
        yield
    finally:
        kernels.lcs_length, kernels.lcsr_exceeds, kernels.cognate_matrix = saved


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def random_words(rng, n):
    letters = np.array(list("abcdefghijklmnopqrstuvwxyz"))
    return ["".join(rng.choice(letters, size=int(rng.integers(3, 12)))) for _ in range(n)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--words", type=int, default=300)
    ap.add_argument("--chars", type=int, default=50000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    xs, ys = random_words(rng, args.words), random_words(rng, args.words)
    b = generate_synthetic(SynthSpec(n_chars=args.chars, seed=0))

    impls = [("python", _kernels_py)] + ([("compiled", _compiled)] if _compiled else [])
    rows = {}
    for name, impl in impls:
        with backend(impl):
            from bimap import matching
            matching._cognate.cache_clear()
            t_matrix = best_of(lambda: kernels.cognate_matrix(xs, ys, 0.7), args.repeat)
            t_map = best_of(lambda: map_bitext(b.x_text, b.y_text, None, b.stop_x, b.stop_y), args.repeat)
        rows[name] = (t_matrix, t_map)

    print(f"{'backend':<10}{'matrix ' + str(args.words) + 'x' + str(args.words):>20}{'map ' + str(args.chars):>16}")
    for name, (tm, tp) in rows.items():
        print(f"{name:<10}{tm:>19.4f}s{tp:>15.3f}s")
    if "compiled" in rows:
        p, c = rows["python"], rows["compiled"]
        print(f"{'speedup':<10}{p[0] / c[0]:>19.1f}x{p[1] / c[1]:>15.1f}x")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
