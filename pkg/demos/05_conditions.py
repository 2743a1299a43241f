"""
Checking separation conditions
==============================

The open set condition asks for an open V with f_i(V) inside V and the
images pairwise disjoint. For a rectangle V the images are parallelograms,
so both parts reduce to finite geometry. The cone test looks at how each
linear part maps the first quadrant.
"""

import math

import numpy as np

import selfaffine as sa

tri = sa.sierpinski_triangle()
for rect in [(0, 0, 1, math.sqrt(3) / 2), (0, 0, 1, 1)]:
    report = sa.check_osc_rectangle(tri, rect)
    w = report.witness
    print(f"Sierpinski, V = {tuple(round(v, 4) for v in rect)}: {report.verdict}  (tightest {w.check} {w.subject} {w.margin:+.4f})")

carpet = sa.carpet_to_ifs(sa.make_carpet(2, 3, [(0, 0), (0, 1), (1, 0)]))
print("\n" + sa.check_osc_rectangle(carpet, (0, 0, 1, 1)).to_text())

diag = sa.IFS.from_arrays([np.diag([0.4, 0.3])] * 2, [(0, 0), (0.5, 0.5)])
print("\n" + sa.check_hueter_lalley(diag).to_text())

tilted = sa.IFS.from_arrays(
    [[[0.20, 0.12], [0.03, 0.10]], [[0.10, 0.03], [0.12, 0.20]]],
    [(0, 0), (0.5, 0.5)],
)
print("\n" + sa.check_hueter_lalley(tilted).to_text())
