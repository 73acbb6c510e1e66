#!/usr/bin/env python3
"""Writes a MovieLens-style ratings file drawn from planted nonnegative factors.

Ratings are round(clip(<a_u, x_i> + noise, 1, 5)); each user rates a random
subset of items. Output lines look like "user::item::rating::timestamp".
"""
import argparse

import numpy as np


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--users", type=int, default=80)
    ap.add_argument("--items", type=int, default=50)
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--noise", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("out")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    scale = np.sqrt(3.5 / args.rank)
    a = rng.uniform(0.2, 1.0, (args.users, args.rank)) * scale
    x = rng.uniform(0.2, 1.0, (args.items, args.rank)) * scale * 2.8
    with open(args.out, "w") as f:
        for u in range(args.users):
            items = np.flatnonzero(rng.random(args.items) < args.density)
            y = x[items] @ a[u] + rng.normal(0.0, args.noise, items.size)
            ratings = np.clip(np.rint(y), 1, 5).astype(int)
            f.writelines(
                f"{u + 1}::{1000 + i}::{r}::{978300000 + u * 100 + i}\n" for i, r in zip(items, ratings)
            )


if __name__ == "__main__":
    main()
