"""Expected stable characters of the commutator word, exact and sampled.

For w = a b a^-1 b^-1 the expected value of chi^{lambda+(n)} is 1/dim.
This script prints the exact rational function, checks it against a full
average over S_n x S_n at small n, and against Monte Carlo at n = 40.
"""
from wordchar import ExactRationalFunction, dim_stable, expected_characters
from wordchar.sampling import exhaustive_expected_character, mc_expected_character

WORD = "abAB"

for k in (1, 2):
    result = expected_characters(WORD, k)
    for shape, E in result.values.items():
        inverse_dim = ExactRationalFunction(1, dim_stable(shape))
        print(f"lambda = {shape}:  E = {E.to_str('n')}  equals 1/dim: {E == inverse_dim}")
        for n in (4, 5):
            exact = exhaustive_expected_character(WORD, shape, n)
            print(f"    n={n}: formula {E(n)}, average over S_n^2 {exact}")

shape = next(iter(expected_characters(WORD, 1).values))
rep = mc_expected_character(WORD, shape, 40, 50_000, seed=1)
print(f"\nMonte Carlo at n=40: {rep.mean:.5f} +- {rep.stderr:.5f}, exact {1 / 39:.5f}")
