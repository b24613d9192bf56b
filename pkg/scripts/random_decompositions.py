#!/usr/bin/env python3
"""Decompose random trace-zero matrices and report timings per size.

    python scripts/random_decompositions.py --count 500 --max-n 12 --seed 1
"""

import argparse
import random
import time
from collections import defaultdict
from dataclasses import asdict, dataclass

from gmpy2 import mpq

from waringmat import ModelSpectrum, decompose, verify
from waringmat.matrix import Matrix
from waringmat.waring import Coefficients


@dataclass
class Config:
    count: int = 500
    min_n: int = 2
    max_n: int = 12
    seed: int = 0
    entry_bound: int = 5


def small_rational(rng, bound, nonzero=False):
    while True:
        x = mpq(rng.randint(-bound, bound), rng.randint(1, 3))
        if x or not nonzero:
            return x


def random_instance(rng, cfg):
    n = rng.randint(cfg.min_n, cfg.max_n)
    q = rng.randint((n + 1) // 2, n)
    lams = []
    while len(lams) < q:
        x = small_rational(rng, 6, nonzero=True)
        if x not in lams:
            lams.append(x)
    while True:
        a1, a2 = small_rational(rng, 4, True), small_rational(rng, 4, True)
        if a1 + a2:
            break
    rows = [[rng.randint(-cfg.entry_bound, cfg.entry_bound) for _ in range(n)] for _ in range(n)]
    rows[-1][-1] -= sum(rows[i][i] for i in range(n))
    return Matrix(rows), ModelSpectrum(n, q, tuple(lams)), Coefficients(a1, a2, -a1 - a2)


def run(cfg):
    rng = random.Random(cfg.seed)
    per_n = defaultdict(list)
    failures = 0
    for _ in range(cfg.count):
        T, spec, coeffs = random_instance(rng, cfg)
        t0 = time.perf_counter()
        d = decompose(T, spec, coeffs)
        per_n[spec.n].append(time.perf_counter() - t0)
        failures += not verify(d).ok
    return per_n, failures


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    cfg = Config(**vars(ap.parse_args()))
    print("config:", asdict(cfg))
    per_n, failures = run(cfg)
    print(f"{'n':>3} {'runs':>5} {'mean ms':>9} {'max ms':>9}")
    for n in sorted(per_n):
        ts = per_n[n]
        print(f"{n:>3} {len(ts):>5} {1000 * sum(ts) / len(ts):>9.2f} {1000 * max(ts):>9.2f}")
    total = sum(sum(ts) for ts in per_n.values())
    print(f"total {total:.2f}s, verification failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
