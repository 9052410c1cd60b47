#!/usr/bin/env python3
"""Ridge regression: asymptotic risk curves against desk-scale simulation.

Two covariance families with similar condition numbers -- a depth-4 balanced
binary tree (p = 16) and i.i.d. Exponential-quantile variances -- are swept
over three aspect ratios. The limiting risk formula tracks the empirical
mean risk of 500 seeded replicates to a few percent even at p = 16.

Run:  python demos/ridge_risk_curves.py [--plot]
"""

import argparse

import numpy as np

from spectrisk import montecarlo as mc

MODELS = [
    ("binary tree, depth 4", mc.CovarianceModel.binary_tree(4)),
    ("exponential quantiles", mc.CovarianceModel.exponential()),
]
GAMMAS = (0.5, 1.0, 2.0)
LAMBDAS = tuple(np.geomspace(0.0631, 10.0, 10))


def sweep(seed=60602, replicates=500):
    results = {}
    for label, model in MODELS:
        for gamma in GAMMAS:
            cfg = mc.RidgeSimConfig(covariance=model, p=16, gamma=gamma,
                                    lambdas=LAMBDAS, replicates=replicates, seed=seed)
            results[label, gamma] = mc.simulate_ridge(cfg)
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--plot", action="store_true", help="save a PNG grid")
    args = parser.parse_args()

    results = sweep()
    for (label, gamma), res in results.items():
        rel = np.abs(res.empirical_mean - res.theory) / res.theory
        print(f"\n{label}, gamma = {gamma}  (n = {round(16 / gamma)}, p = 16)")
        print(f"{'lambda':>10} {'simulated':>11} {'theory':>11} {'rel gap':>9}")
        for lam, emp, thr, r in zip(res.lambdas, res.empirical_mean, res.theory, rel):
            print(f"{lam:10.4f} {emp:11.4f} {thr:11.4f} {r:9.2%}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(len(GAMMAS), len(MODELS), figsize=(9, 10), sharex=True)
        for col, (label, _) in enumerate(MODELS):
            for row, gamma in enumerate(GAMMAS):
                res = results[label, gamma]
                ax = axes[row, col]
                ax.errorbar(res.lambdas, res.empirical_mean, 3 * res.standard_error,
                            fmt="o-", label="simulation", markersize=3)
                ax.plot(res.lambdas, res.theory, "r--", label="theory")
                ax.set_xscale("log")
                if row == 0:
                    ax.set_title(label)
                if col == 0:
                    ax.set_ylabel(f"risk, gamma = {gamma}")
                if row == len(GAMMAS) - 1:
                    ax.set_xlabel("lambda")
        axes[0, 0].legend()
        fig.tight_layout()
        fig.savefig("demos/ridge_risk_curves.png", dpi=120)
        print("\nwrote demos/ridge_risk_curves.png")


if __name__ == "__main__":
    main()
