#!/usr/bin/env python3
"""Worst-case margins of LDA vs the independence rule over bounded spectra.

Over unit-mean spectra supported on [k1, k2], LDA's worst case is the
identity spectrum regardless of the bounds, while the independence rule is
hurt most by the maximally spread two-point mixture. A brute-force scan of
two-point spectra confirms both closed forms, and the comparison inequality
says who wins the worst case at each signal strength.

Run:  python demos/worst_case_margins.py
"""

import math

import numpy as np

from spectrisk import rda_theory

K1, K2, GAMMA = 0.5, 2.0, 0.5


def brute_force(alpha2, grid=200):
    t1 = np.linspace(K1, 1.0, grid)[:, None]
    t2 = np.linspace(1.0, K2, grid)[None, :]
    spread = t2 - t1
    valid = spread > 1e-9
    w1 = np.where(valid, (t2 - 1.0) / np.where(valid, spread, 1.0), 1.0)
    w2 = 1.0 - w1
    second = w1 * t1 ** 2 + w2 * t2 ** 2
    inverse = w1 / t1 + w2 / t2
    theta_ir = alpha2 / np.sqrt(alpha2 + GAMMA * second)
    theta_lda = alpha2 * math.sqrt(1.0 - GAMMA) * inverse / np.sqrt(alpha2 * inverse + GAMMA)
    return float(theta_ir.min()), float(theta_lda.min())


def main():
    print(f"spectrum class: unit mean, support in [{K1}, {K2}], gamma = {GAMMA}")
    print(f"{'alpha2':>7} {'worst LDA':>10} {'worst IR':>9} {'scan LDA':>9} {'scan IR':>8}  winner")
    for alpha2 in (0.05, 0.2, 0.5, 1.0, 4.0):
        rep = rda_theory.worst_case(K1, K2, GAMMA, alpha2)
        scan_ir, scan_lda = brute_force(alpha2)
        winner = "IR" if rep.ir_beats_lda else "LDA"
        print(f"{alpha2:7.2f} {rep.lda_margin:10.4f} {rep.ir_margin:9.4f}"
              f" {scan_lda:9.4f} {scan_ir:8.4f}  {winner}")

    rep = rda_theory.worst_case(K1, K2, GAMMA, 1.0)
    mixture = rep.ir_least_favorable
    pairs = ", ".join(f"({t:g}, {w:.4f})" for t, w in zip(mixture.atoms, mixture.weights))
    print(f"\nleast favorable for IR: two-point mixture {pairs}")
    print("least favorable for LDA: point mass at 1 (identity covariance)")
    print("comparison rule: IR wins iff alpha2 + 1 > (1 - gamma)(k1 + k2 - k1 k2)"
          f" = {(1 - GAMMA) * (K1 + K2 - K1 * K2):.3f}")


if __name__ == "__main__":
    main()
