#!/usr/bin/env python3
"""Write random trace-zero matrices as a1*f(..) + a2*f(..) + a3*f(..) for a few polynomials.

For each polynomial and size it prints the chosen prime, the witness
attempt and spectrum, and re-evaluates f on every returned argument tuple.
"""

import argparse
import random
import time
from dataclasses import asdict, dataclass, field

from waringmat import parse, waring_for_polynomial
from waringmat.matrix import Matrix
from waringmat.ncpoly import evaluate
from waringmat.pipeline import WitnessNotFound
from waringmat.scalar import render_scalar_list
from waringmat.waring import Coefficients


@dataclass
class Config:
    polynomials: list = field(default_factory=lambda: ["X1", "X1*X2 - X2*X1", "X1*X1*X2 - X2*X1*X1"])
    min_n: int = 2
    max_n: int = 8
    budget: int = 10_000
    seed: int = 0
    workers: int = 1


def random_traceless(rng, n):
    rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
    rows[-1][-1] -= sum(rows[i][i] for i in range(n))
    return Matrix(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--poly", action="append", dest="polynomials", help="repeatable; defaults to three samples")
    ap.add_argument("--min-n", type=int, default=Config.min_n)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--budget", type=int, default=Config.budget)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--workers", type=int, default=Config.workers)
    args = {k: v for k, v in vars(ap.parse_args()).items() if v is not None}
    cfg = Config(**args)
    print("config:", asdict(cfg))

    rng = random.Random(cfg.seed)
    coeffs = Coefficients(1, 2, -3)
    failures = 0
    for text in cfg.polynomials:
        f = parse(text)
        print(f"\nf = {f}")
        for n in range(cfg.min_n, cfg.max_n + 1):
            T = random_traceless(rng, n)
            t0 = time.perf_counter()
            try:
                r = waring_for_polynomial(f, n, T, coeffs, cfg.budget, cfg.seed, cfg.workers)
            except WitnessNotFound as exc:
                print(f"  n={n}: not found ({exc})")
                failures += 1
                continue
            ok = all(evaluate(f, tup) == img for tup, img in zip(r.tuples, r.images))
            failures += not ok
            print(
                f"  n={n}: p={r.prime.p} q={r.spec.q} attempt={r.witness.attempt} "
                f"spectrum=({', '.join(render_scalar_list(r.witness.spectrum))}) "
                f"re-evaluated={'ok' if ok else 'MISMATCH'} {time.perf_counter() - t0:.2f}s"
            )
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
