"""Accuracy of the Gram-determinant route as the direction columns degrade.

    python scripts/conditioning_sweep.py

Builds square-ish problems whose direction matrix has a prescribed
condition number, then compares the solver's distance (plain closed form
and with one residual-correction step) against a QR least-squares
reference.  Forming the Gram matrix squares the condition number, so the
plain error grows like eps * cond(A)**2.
"""
import argparse

import numpy as np

from flatpair.flats import Flat
from flatpair.solver import optimal_pair


def instance(rng, m, n, cond):
    U, _ = np.linalg.qr(rng.standard_normal((m, m)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = U[:, :n] @ np.diag(np.logspace(0, -np.log10(cond), n)) @ V.T
    split = n // 2
    b, c = rng.standard_normal(m), rng.standard_normal(m)
    return Flat(b, A[:, :split], "plus"), Flat(c, -A[:, split:], "minus"), A, c - b


def reference_distance(A, d):
    Q, _ = np.linalg.qr(A)
    return float(np.linalg.norm(d - Q @ (Q.T @ d)))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=10)
    parser.add_argument("--n", type=int, default=6)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'cond(A)':>9}  {'plain':>10}  {'refined':>10}  path")
    for cond in np.logspace(0, 9, 10):
        worst = {0: 0.0, 1: 0.0}
        paths = set()
        for _ in range(args.trials):
            Vb, Vc, A, d = instance(rng, args.m, args.n, cond)
            ref = reference_distance(A, d)
            for refine in (0, 1):
                sol = optimal_pair(Vb, Vc, refine=refine)
                paths.add(sol.diagnostics.path)
                worst[refine] = max(worst[refine], abs(sol.distance - ref) / max(1.0, ref))
        print(f"{cond:9.0e}  {worst[0]:10.2e}  {worst[1]:10.2e}  {','.join(sorted(paths))}")


if __name__ == "__main__":
    main()
