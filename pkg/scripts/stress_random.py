#!/usr/bin/env python3
"""Random stress run: solve seeded instances, compare against the subset
enumeration oracle, and print a timing table.

    python scripts/stress_random.py --count 500 --max-n 12 --seed 3
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from dfvs.digraph import is_acyclic
from dfvs.oracle import minimum_dfvs_size
from dfvs.random_instances import random_digraph
from dfvs.solver import SolverConfig, run_pipeline


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--max-n", type=int, default=12)
    parser.add_argument("--densities", type=float, nargs="+",
                        default=[0.1, 0.2, 0.3, 0.5])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--enum-budget", type=int, default=10_000_000)
    parser.add_argument("--self-loops", type=float, default=0.05)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    cfg = SolverConfig(enum_budget=args.enum_budget)
    mismatches = 0
    lazy_total = 0
    solve_time = oracle_time = 0.0

    for index in range(args.count):
        n = rng.randint(1, args.max_n)
        density = args.densities[index % len(args.densities)]
        g = random_digraph(n, density, rng, self_loop_rate=args.self_loops)

        t0 = time.perf_counter()
        result = run_pipeline(g, cfg)
        solve_time += time.perf_counter() - t0

        t0 = time.perf_counter()
        want = minimum_dfvs_size(g)
        oracle_time += time.perf_counter() - t0

        lazy_total += result.report.lazy_iterations
        valid = is_acyclic(g.without(result.solution.vertices))
        if result.solution.size != want or not valid:
            mismatches += 1
            print(f"MISMATCH #{index}: n={n} p={density} "
                  f"got={result.solution.size} want={want} valid={valid}")

    print(f"instances:      {args.count}")
    print(f"mismatches:     {mismatches}")
    print(f"lazy iterations:{lazy_total}")
    print(f"solver time:    {solve_time:.2f}s")
    print(f"oracle time:    {oracle_time:.2f}s")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
