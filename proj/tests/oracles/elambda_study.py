#!/usr/bin/env python3
"""Convergence study for e_Lambda = 2 - lim_M sum_{0<|p_i|<=M} cos(|p|)/p^2.

The sum runs over integer vectors p != 0 inside the cube |p_i| <= M.  The
raw cube partial sums converge slowly and non-monotonically; the iterated
Aitken table over M, M/2, M/4, ... is what the library reports.

Usage: python3 tests/oracles/elambda_study.py [Mmax]

The S(1) closed form and the stabilized limit are frozen into
tests/test_bogoliubov.cpp.
"""
import math
import sys

import numpy as np


def cube_sum(M):
    ns = np.arange(-M, M + 1)
    yy, zz = np.meshgrid(ns, ns, indexing="ij")
    yz2 = (yy * yy + zz * zz).astype(np.float64)
    slabs = []
    for nx in range(-M, M + 1):
        r2 = nx * nx + yz2
        if nx == 0:
            r2[M, M] = 1.0  # placeholder, zeroed below
        slab = np.cos(np.sqrt(r2)) / r2
        if nx == 0:
            slab[M, M] = 0.0
        slabs.append(math.fsum(slab.ravel().tolist()))
    return math.fsum(slabs)


def aitken(seq):
    out = []
    for i in range(len(seq) - 2):
        s0, s1, s2 = seq[i : i + 3]
        d = (s2 - s1) - (s1 - s0)
        out.append(s2 - (s2 - s1) ** 2 / d if d != 0 else s2)
    return out


s1_closed = 6 * math.cos(1.0) + 6 * math.cos(math.sqrt(2.0)) + (8.0 / 3.0) * math.cos(math.sqrt(3.0))
print(f"S(1) closed form      = {s1_closed:.17g}")
print(f"S(1) enumerated       = {cube_sum(1):.17g}")

mmax = int(sys.argv[1]) if len(sys.argv) > 1 else 128
ms, vals = [], []
m = mmax
while m >= 2:
    ms.append(m)
    m //= 2
ms.reverse()
for m in ms:
    vals.append(2.0 - cube_sum(m))
    print(f"M={m:4d}  2-S(M) = {vals[-1]:.12f}")

table = [vals]
while len(table[-1]) >= 3:
    table.append(aitken(table[-1]))
for lvl, row in enumerate(table[1:], start=1):
    print(f"aitken level {lvl}: " + "  ".join(f"{v:.9f}" for v in row))
