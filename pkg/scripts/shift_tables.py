"""Convergence tables for the standard shift examples next to their
classical entropies.

    python3 scripts/shift_tables.py --max-n 12
"""
import argparse
from fractions import Fraction

from lattice_entropy.entropy import EntropyConfig
from lattice_entropy.shifts import ShiftSystem, classical_entropy, shift_entropy_table

SYSTEMS = {
    "bernoulli(1/2)": ShiftSystem.bernoulli([Fraction(1, 2)] * 2),
    "bernoulli(1/3,2/3)": ShiftSystem.bernoulli([Fraction(1, 3), Fraction(2, 3)]),
    "markov(.9,.1;.5,.5)": ShiftSystem.markov([[Fraction(9, 10), Fraction(1, 10)],
                                                [Fraction(1, 2), Fraction(1, 2)]]),
    "full-2-shift": ShiftSystem.bernoulli([Fraction(1, 2)] * 2, mode="topological"),
    "golden-mean": ShiftSystem.sft(["11"]),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--base", choices=["2", "e"], default="e")
    args = ap.parse_args()
    config = EntropyConfig(folner_max_n=args.max_n, log_base=args.base)
    print("system,n,ratio,classical,gap")
    for name, system in SYSTEMS.items():
        table = shift_entropy_table(system, config).scaled(config)
        h = config.scale(classical_entropy(system))
        for r in table.rows:
            print(f"{name},{r.n},{r.ratio!r},{h!r},{r.ratio - h:.3e}")


if __name__ == "__main__":
    main()
