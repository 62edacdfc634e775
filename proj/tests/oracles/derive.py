"""Independent reference values for the frozen expectations in the C++ tests.

Run with python3; requires scipy and numpy. Each block prints the values that
are copied into the matching test.
"""
import math
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy import stats


def kendall_pairs(x, y):
    c = d = 0
    for i, j in combinations(range(len(x)), 2):
        s = (x[i] - x[j]) * (y[i] - y[j])
        c += s > 0
        d += s < 0
    return c, d


print("# pearson")
x, y = [1, 2, 3, 4, 5], [2, 1, 4, 3, 5]
r = stats.pearsonr(x, y)
print(f"r={r[0]!r} p={r[1]!r}")

print("# kendall tau-b")
x, y = [1, 2, 3, 4], [1, 3, 2, 4]
c, d = kendall_pairs(x, y)
print("C, D =", c, d, "tau =", Fraction(c - d, c + d))
for xs, ys in [([1, 2, 3, 4], [1, 3, 2, 4]),
               ([1, 2, 3, 4, 5, 6, 7, 8], [2, 1, 4, 3, 6, 5, 8, 7]),
               ([1, 1, 2, 2, 3, 3, 4, 4], [1, 2, 1, 3, 2, 4, 4, 3]),
               ([0, 0, 1, 1, 1, 2, 2, 3, 3, 3], [1, 0, 2, 1, 1, 2, 3, 2, 3, 3])]:
    t = stats.kendalltau(xs, ys, method="asymptotic")
    print(f"x={xs} y={ys} tau={t[0]!r} p={t[1]!r}")

print("# beta")
print("beta(0.8,1.0) =", repr(0.8 / math.log(2)))
print("beta(0.5,0.5) =", repr(0.5 / math.log(1.5)))

print("# length groups")
def groups(lengths, ratio=0.2):
    out = []
    for v in sorted(lengths):
        if out and v <= (1 + ratio) * out[-1][0]:
            out[-1].append(v)
        else:
            out.append([v])
    return out
print(groups([8, 9, 10, 12, 15, 18]), groups([10, 11, 12]), groups([10, 13]))

print("# prior fraction")
print(Fraction(1, 8))

print("# pearson, near-linear descending")
r = stats.pearsonr([1, 2, 3, 4, 5, 6], [6, 5, 4, 3, 2, 2])
print(f"r={r[0]!r} p={r[1]!r}")
