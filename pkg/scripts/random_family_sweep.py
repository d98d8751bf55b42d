"""Worst-case errors of the closed forms over seeded random instance families.

    python scripts/random_family_sweep.py --seeds 5 --count 500

Instances have 2 <= m <= 12, 1 <= n <= min(m, 8) and entries uniform in
[-1, 1].  For every seed the script reports the worst value of each
acceptance quantity next to its tolerance.
"""
import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import random_full_rank_instance  # noqa: E402

from flatpair.flats import difference_setup  # noqa: E402
from flatpair.linalg import determinant, gram_matrix, solve_linear  # noqa: E402
from flatpair.oracle import alternating_projections  # noqa: E402
from flatpair.solver import coefficients_cramer, distance_squared_gram, optimal_pair  # noqa: E402


def sweep(seed: int, count: int, refine: int, ap_count: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(["ratio", "cramer", "orth", "sym", "ap"], 0.0)
    ap_iters = 0
    for i in range(count):
        Vb, Vc = random_full_rank_instance(rng)
        sol = optimal_pair(Vb, Vc, refine=refine)
        d2 = float(np.sum((sol.b_star - sol.c_star) ** 2))
        worst["ratio"] = max(worst["ratio"], abs(distance_squared_gram(Vb, Vc) - d2) / max(1, d2))

        prob = difference_setup(Vb, Vc)
        G = gram_matrix(prob.A)
        r = prob.A.T @ prob.d
        x = coefficients_cramer(G, r, determinant(G))
        xe = solve_linear(G, r)
        worst["cramer"] = max(worst["cramer"],
                              np.linalg.norm(x - xe) / max(1, np.linalg.norm(xe)))

        res = sol.b_star - sol.c_star
        for a in prob.A.T:
            worst["orth"] = max(worst["orth"], abs(res @ a) / max(1, np.linalg.norm(res)
                                                                 * np.linalg.norm(a)))
        back = optimal_pair(Vc, Vb, refine=refine).distance
        worst["sym"] = max(worst["sym"], abs(back - sol.distance) / max(1, sol.distance))
        if i < ap_count:
            rep = alternating_projections(Vb, Vc)
            ap_iters = max(ap_iters, rep.iterations)
            worst["ap"] = max(worst["ap"], abs(rep.ap_distance - sol.distance)
                              / max(1, sol.distance))
    worst["max_ap_iterations"] = ap_iters
    return worst


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--first-seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--ap-count", type=int, default=100)
    parser.add_argument("--refine", type=int, default=1)
    args = parser.parse_args()

    tolerances = {"ratio": 1e-7, "cramer": 1e-7, "orth": 1e-8, "sym": 1e-10, "ap": 1e-6}
    print("seed    " + "  ".join(f"{k:>10}" for k in tolerances) + "  ap_iters   secs")
    print("tol     " + "  ".join(f"{v:10.0e}" for v in tolerances.values()))
    for seed in range(args.first_seed, args.first_seed + args.seeds):
        t0 = time.perf_counter()
        w = sweep(seed, args.count, args.refine, args.ap_count)
        flags = "  ".join(
            f"{w[k]:10.2e}" + ("!" if w[k] > tol else " ") for k, tol in tolerances.items()
        )
        print(f"{seed:<8}{flags} {w['max_ap_iterations']:>8} {time.perf_counter() - t0:6.1f}")


if __name__ == "__main__":
    main()
