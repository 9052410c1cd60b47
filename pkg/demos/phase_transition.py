#!/usr/bin/env python3
"""The strong-signal phase transition of optimally tuned ridge regression.

As the signal strength alpha2 grows, the optimal risk stabilizes at the OLS
constant 1/(1 - gamma) when gamma < 1, grows like alpha when gamma = 1, and
grows like alpha2 when gamma > 1 -- log-log slopes 0, 1/2 and 1. The slopes
hold for any spectrum; only the coefficients depend on it, and they are the
regime-report outputs.

Run:  python demos/phase_transition.py [--plot]
"""

import argparse

import numpy as np

from spectrisk import ridge_theory, spectra

GAMMAS = (0.25, 0.5, 0.8, 0.9, 1.0, 1.1, 1.3, 2.0, 4.0, 8.0)
ALPHA2 = np.geomspace(1e-2, 1e8, 41)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--plot", action="store_true", help="save a PNG")
    args = parser.parse_args()

    dist = spectra.make_point_masses([(1.0, 1.0)])
    curves = {gamma: np.array([ridge_theory.optimal_risk(dist, gamma, a2)[1]
                               for a2 in ALPHA2]) for gamma in GAMMAS}

    print(f"{'gamma':>6} {'fitted slope':>13} {'regime report':>32}")
    tail = ALPHA2 >= 1e4
    for gamma, risks in curves.items():
        slope = np.polyfit(np.log(ALPHA2[tail]), np.log(risks[tail]), 1)[0]
        rep = ridge_theory.regimes(dist, gamma)
        print(f"{gamma:6.2f} {slope:13.4f} {rep.strong_kind:>22} x {rep.strong_coefficient:.4f}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 5))
        for gamma, risks in curves.items():
            ax.loglog(ALPHA2, risks, label=f"gamma = {gamma:g}")
        ax.set_xlabel("signal strength alpha2")
        ax.set_ylabel("optimal predictive risk")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig("demos/phase_transition.png", dpi=120)
        print("\nwrote demos/phase_transition.png")


if __name__ == "__main__":
    main()
