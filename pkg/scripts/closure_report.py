#!/usr/bin/env python3
"""Print the closure stages from the four base points, with size and
height statistics per stage."""

import argparse

from rigidsurf.arrangement import BASE_POINTS, closure
from rigidsurf.projective import height, min_entry_height


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=3)
    args = parser.parse_args()

    stages = closure(BASE_POINTS, args.iters)
    for k, stage in enumerate(stages, start=1):
        lh = max((height(l) for l in stage.lines), default=0)
        ph = max((height(p) for p in stage.points), default=0)
        pm = max((min_entry_height(p) for p in stage.points), default=0)
        print(
            f"stage {k}: {len(stage.lines):4d} lines (max height {lh:3d})   "
            f"{len(stage.points):4d} points (max height {ph:3d}, "
            f"max min-entry {pm:3d})"
        )


if __name__ == "__main__":
    main()
