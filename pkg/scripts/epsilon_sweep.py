"""Sweep epsilon for the three-point example and print a CSV table.

    python3 scripts/epsilon_sweep.py --base 2 --steps 49
"""
import argparse
from fractions import Fraction

from lattice_entropy.counterexample import run
from lattice_entropy.entropy import EntropyConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base", choices=["2", "e"], default="2")
    ap.add_argument("--steps", type=int, default=49, help="epsilon = k / (2 * (steps + 1))")
    args = ap.parse_args()
    config = EntropyConfig(log_base=args.base)
    print("epsilon,palm_W,palm_V,localized_alpha,localized_V,anomaly,repaired")
    for k in range(1, args.steps + 1):
        eps = Fraction(k, 2 * (args.steps + 1))
        r = run(eps, config)
        print(f"{float(eps)!r},{r.palm_W!r},{r.palm_V!r},{r.localized_alpha!r},"
              f"{r.localized_V!r},{r.anomaly},{r.repaired}")


if __name__ == "__main__":
    main()
