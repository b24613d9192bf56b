#!/usr/bin/env python3
"""Sweep select_prime over 2..N and summarise how tight the window n/2 + 1 <= p <= n is."""

import argparse
import time
from collections import Counter
from dataclasses import asdict, dataclass

from waringmat.primes import is_prime, select_prime


@dataclass
class Config:
    limit: int = 1_000_000
    spot_checks: int = 2000


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=Config.limit)
    ap.add_argument("--spot-checks", type=int, default=Config.spot_checks)
    cfg = Config(**vars(ap.parse_args()))
    print("config:", asdict(cfg))

    t0 = time.perf_counter()
    gaps = Counter()
    worst = (0, 2, 2)
    for n in range(2, cfg.limit + 1):
        p = select_prime(n).p
        assert n + 2 <= 2 * p <= 2 * n, (n, p)
        gap = n - p
        gaps[gap] += 1
        if gap > worst[0]:
            worst = (gap, n, p)
    elapsed = time.perf_counter() - t0

    # independent primality spot checks by trial division
    step = max(1, cfg.limit // cfg.spot_checks)
    for n in range(2, cfg.limit + 1, step):
        assert is_prime(select_prime(n).p)

    print(f"checked 2..{cfg.limit} in {elapsed:.2f}s")
    print(f"largest n - p: {worst[0]} (n = {worst[1]}, p = {worst[2]})")
    print("most common n - p:", ", ".join(f"{g}:{c}" for g, c in gaps.most_common(5)))


if __name__ == "__main__":
    main()
