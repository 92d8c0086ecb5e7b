"""Weingarten function of set partitions and the integral it computes.

Integrating products of matrix entries of a uniform permutation matrix
reduces to Wg(sigma, tau); here the m = 2 table is printed and one entry is
compared with a direct count over S_5.
"""
from fractions import Fraction
from itertools import permutations
from math import factorial

from wordchar.partitions import enumerate_partitions
from wordchar.weingarten import delta, weingarten

parts = list(enumerate_partitions(2))
for s in parts:
    for t in parts:
        print(f"Wg({s}, {t}) = {weingarten(s, t).to_str('n')}")

# E[P_{00} P_{11}] counts permutations fixing 0 and 1.
n = 5
direct = Fraction(sum(1 for g in permutations(range(n)) if g[0] == 0 and g[1] == 1), factorial(n))
via_wg = sum(delta(s, (0, 1)) * delta(t, (0, 1)) * weingarten(s, t)(n) for s in parts for t in parts)
print(f"\nE[P_00 P_11] at n={n}: direct {direct}, via Weingarten {via_wg}")
