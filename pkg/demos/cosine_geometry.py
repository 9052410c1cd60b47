#!/usr/bin/env python3
"""Cosine geometry of RDA: how close is the learned direction to optimal?

In the covariance metric, the angle between the learned and Bayes
discriminant directions converges; its cosine factors the error as
error = Phi(-cosine * oracle_margin). For AR-1(0.9) the cosine curves over
lambda converge quickly as the signal grows, and the maximizing lambda
(the best shrinkage) moves right with signal strength -- unlike ridge
regression, where the optimal tuning always decays like gamma/alpha2.

Run:  python demos/cosine_geometry.py [--plot]
"""

import argparse

import numpy as np

from spectrisk import rda_theory, spectra

LAMBDAS = np.geomspace(1e-3, 10.0, 40)
ALPHAS = np.round(np.linspace(0.1, 2.0, 39), 2)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--plot", action="store_true", help="save a PNG")
    args = parser.parse_args()

    dist = spectra.ar1_limit(0.9)
    gamma = 1.0
    curves = {alpha: np.array([rda_theory.cosine(dist, gamma, alpha ** 2, lam)
                               for lam in LAMBDAS]) for alpha in ALPHAS}
    strong = np.array([rda_theory.cosine_strong_limit(dist, gamma, lam)
                       for lam in LAMBDAS])

    print("best shrinkage and best cosine by signal strength (AR-1(0.9), gamma = 1)")
    print(f"{'alpha':>6} {'argmax lambda':>14} {'max cosine':>11}")
    for alpha in (0.1, 0.5, 1.0, 1.5, 2.0):
        values = curves[alpha]
        print(f"{alpha:6.2f} {LAMBDAS[values.argmax()]:14.4f} {values.max():11.4f}")
    print(f"{'inf':>6} {LAMBDAS[strong.argmax()]:14.4f} {strong.max():11.4f}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 5))
        for alpha, values in curves.items():
            ax.semilogx(LAMBDAS, values, color=plt.cm.viridis((alpha - 0.1) / 1.9), lw=0.8)
        ax.semilogx(LAMBDAS, strong, "k--", lw=1.5, label="strong-signal limit")
        ax.set_xlabel("lambda")
        ax.set_ylabel("cosine to the Bayes direction")
        ax.set_title("AR-1(0.9), alpha from 0.1 (bottom) to 2.0")
        ax.legend()
        fig.tight_layout()
        fig.savefig("demos/cosine_geometry.png", dpi=120)
        print("\nwrote demos/cosine_geometry.png")


if __name__ == "__main__":
    main()
