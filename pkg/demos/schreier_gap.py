"""Spectral gap of random Schreier graphs on k-tuples of distinct points.

Each seed draws r random permutations of [n] acting on ordered k-tuples; the
second largest absolute eigenvalue is compared with 2*sqrt(2r-1).
"""
from math import sqrt

from wordchar.schreier import random_schreier_graph, spectral_gap

n, k, r = 120, 2, 2
print(f"n={n} k={k} r={r}, Ramanujan value {2 * sqrt(2 * r - 1):.4f}")
for seed in range(5):
    op = random_schreier_graph(n, k, r, seed)
    rep = spectral_gap(op, seed=seed)
    if not rep.connected:
        print(f"seed {seed}: disconnected")
        continue
    print(f"seed {seed}: lambda = {rep.lambda_nontrivial:.4f} after {rep.iterations} matvecs")
