#!/usr/bin/env python3
"""Seeded search experiments: the label-map acceptance rate against the
birthday estimate, and a scan for double-point triangle configurations."""

import argparse
import math

from rigidsurf.arrangement import build_heart, singular_points
from rigidsurf.cover import acceptance_estimate, empirical_acceptance, random_label_search
from rigidsurf.triangle import search_double_point


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20240601)
    parser.add_argument("--attempts", type=int, default=100_000)
    parser.add_argument("--height-bound", type=int, default=10)
    parser.add_argument("--triples", type=int, default=5)
    args = parser.parse_args()

    heart = build_heart()
    table = singular_points(heart.arrangement)

    est = float(acceptance_estimate(34, table.num_points, heart.p, heart.r))
    succ, att = empirical_acceptance(table, heart.p, heart.r, args.seed, args.attempts)
    rate = succ / att
    sigma = math.sqrt(est * (1 - est) / att)
    print(f"label search acceptance: {succ}/{att} = {rate:.6f}")
    print(f"birthday estimate:       {est:.6f}  (deviation {abs(rate-est)/sigma:.2f} sigma)")

    result = random_label_search(table, heart.p, heart.r, seed=args.seed)
    print(f"first valid label map after {result.attempts} attempts")

    print(f"\ndouble-point triples below height {args.height_bound}:")
    for P, Q, R in search_double_point(args.height_bound, args.triples, args.seed):
        print(f"  {P}  {Q}  {R}")


if __name__ == "__main__":
    main()
