#!/usr/bin/env python3
"""Emit a random instance in PACE format on stdout.

    python scripts/gen_instance.py 50 0.05 --seed 7 > instance.gr
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from dfvs.pace import serialize_pace
from dfvs.random_instances import random_digraph, random_strongly_connected


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("n", type=int)
    parser.add_argument("p", type=float)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--self-loops", type=float, default=0.0)
    parser.add_argument("--strongly-connected", action="store_true",
                        help="add a spanning cycle so the instance is one SCC")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    if args.strongly_connected:
        g = random_strongly_connected(args.n, args.p, rng)
    else:
        g = random_digraph(args.n, args.p, rng, self_loop_rate=args.self_loops)
    sys.stdout.write(serialize_pace(g))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
