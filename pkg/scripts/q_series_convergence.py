"""Truncation residual of the exponent series against the q-exponential.

Prints, for each order, the worst residual over beta*E in [0, r_max/|1-q|].
"""

import argparse

import numpy as np

from coherent_access.tsallis import QParams, series_vs_q_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, nargs="+", default=[0.5, 0.9, 1.1, 1.5])
    ap.add_argument("--r-max", type=float, default=0.5, help="max |(1-q) beta E|, < 1")
    ap.add_argument("--orders", type=int, nargs="+", default=[1, 2, 5, 10, 20, 40])
    args = ap.parse_args()

    print("order " + " ".join(f"q={q:<8g}" for q in args.q))
    for order in args.orders:
        cells = []
        for q in args.q:
            p = QParams(q)
            xs = np.linspace(0, args.r_max / abs(1 - q), 201) if q != 1 else np.linspace(0, 5, 201)
            cells.append(max(series_vs_q_residual(float(x), p, order) for x in xs))
        print(f"{order:>5} " + " ".join(f"{c:<10.2e}" for c in cells))


if __name__ == "__main__":
    main()
