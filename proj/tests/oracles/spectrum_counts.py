#!/usr/bin/env python3
"""Degeneracies of the non-interacting excitation lines on the unit torus.

Modes are p = 2 pi n, n in Z^3 \ {0}; at a = 0 each excitation costs
p^2 = (2 pi)^2 |n|^2, so the total-energy lines below zeta = 9 (2 pi)^2 are
indexed by k = 0..9 with degeneracy = #{occupation maps with
sum n_p |n|^2 = k}.  Computed exactly by polynomial multiplication over
the generating function prod_modes 1/(1 - x^w).

Usage: python3 tests/oracles/spectrum_counts.py

The counts are frozen into tests/test_bogoliubov.cpp and the acceptance
suite uses an equivalent integer DP as its independent route.
"""
KMAX = 9

r3 = {}
for nx in range(-3, 4):
    for ny in range(-3, 4):
        for nz in range(-3, 4):
            m = nx * nx + ny * ny + nz * nz
            if 1 <= m <= KMAX:
                r3[m] = r3.get(m, 0) + 1

print("r3 counts:", dict(sorted(r3.items())))

poly = [1] + [0] * KMAX
for w, count in sorted(r3.items()):
    for _ in range(count):
        # multiply by 1/(1-x^w) truncated at KMAX
        for k in range(w, KMAX + 1):
            poly[k] += poly[k - w]

print("line degeneracies k=0..9:", poly)
print("total occupation maps with energy <= 9(2pi)^2:", sum(poly))
