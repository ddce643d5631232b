"""Time the sliding-window moment engine against window size on a 512x512 image."""

import time

import numpy as np

from multipole_edges import Bitmap, PipelineConfig, fast_moment_fields


def best_of(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(size=512):
    bm = Bitmap(np.random.default_rng(0).integers(0, 256, (size, size)))
    base = None
    for side in (2, 3, 5, 9, 15, 31, 63):
        anchor = "topleft-even" if side % 2 == 0 else "centered-odd"
        cfg = PipelineConfig(side, side, anchor)
        t = best_of(lambda: fast_moment_fields(bm, cfg))
        base = base or t
        print(f"{side:3d}x{side:<3d} {t * 1e3:8.1f} ms  x{t / base:.2f}")


if __name__ == "__main__":
    main()
