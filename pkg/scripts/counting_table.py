"""Coherent vs standard bosonic counts, and the entropy gain ln(w*/w).

    python scripts/counting_table.py --g-max 5 --n-max 6
"""

import argparse
import math

from coherent_access.counting import coherent_degeneracy, enumerate_coherent_sequences, microstate_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g-max", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=6)
    args = ap.parse_args()

    print(f"{'g':>3} {'G':>5} {'n':>3} {'w_std':>10} {'w_coh':>12} {'enum':>8} {'dS/k':>8}")
    for g in range(1, args.g_max + 1):
        G = coherent_degeneracy(g)
        for n in range(args.n_max + 1):
            w_std = microstate_count(g, n)
            w_coh = microstate_count(G, n)
            try:
                enum = str(len(enumerate_coherent_sequences(g, n)))
            except ValueError:
                enum = "-"
            print(f"{g:>3} {G:>5} {n:>3} {w_std:>10} {w_coh:>12} {enum:>8} "
                  f"{math.log(w_coh / w_std):>8.4f}")


if __name__ == "__main__":
    main()
