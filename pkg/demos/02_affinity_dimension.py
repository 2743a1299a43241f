"""
Singular value function and the affinity dimension
==================================================

For genuinely affine maps the ratio is no longer enough: a map squeezes the
unit disc into an ellipse with semi-axes alpha_1 >= alpha_2, and the
singular value function phi^s interpolates between them. The zero s_n of the
level-n pressure P_n(s) = (1/n) log sum_{|w|=n} phi^s(A_w) decreases in n
(along doublings) towards the affinity dimension.
"""

import numpy as np

import selfaffine as sa

A = np.array([[0.45, 0.2], [-0.1, 0.3]])
print("singular values", sa.singular_values(A).round(6), " |det| =", round(abs(np.linalg.det(A)), 6))
for s in (0.5, 1.0, 1.5, 2.0, 2.5):
    print(f"  phi^{s}(A) = {sa.svf(A, s):.6f}")

# Two shears pointing in different directions.
ifs = sa.IFS.from_arrays(
    [[[0.5, 0.3], [0.0, 0.35]], [[0.35, 0.0], [0.3, 0.5]]],
    [(0.0, 0.0), (0.6, 0.4)],
)
print("\nnorms", ifs.ratios().round(4), " similarity dimension of norms", round(sa.similarity_dimension(ifs.ratios()), 6))
for n, s_n in sa.affinity_dimension_sequence(ifs, [1, 2, 4, 8, 12]).items():
    print(f"  s_{n:<2} = {s_n:.8f}")

# The pressure curve at one depth, sampled on [0, 2d].
curve = sa.affinity_dimension(ifs, 6, grid=9)
print("\n  s      P_6(s)")
for s, p in curve.samples:
    print(f"  {s:4.1f}  {p:+.5f}")
