"""
Estimating box dimension from a chaos-game sample
=================================================

Random iteration produces points on the attractor. Counting occupied cells
of dyadic grids and fitting log N(delta) against log(1/delta) gives an
estimate of the box-counting dimension. The estimate is a statistic: too few
points saturate the finest scales and pull the slope down.
"""

import math

import numpy as np

import selfaffine as sa

ifs = sa.sierpinski_triangle()
scales = sa.dyadic_scales(3, 8)
for n in (1_000, 10_000, 100_000):
    fit, series = sa.estimate_box_dimension(ifs, n, seed=0, scales=scales)
    print(f"{n:>7} points: slope {fit.slope:.4f}  counts {series.counts.tolist()}")
print(f"target log 3 / log 2 = {math.log(3) / math.log(2):.4f}")

# Seeds pin the sample exactly.
a = sa.chaos_game(ifs, 1000, seed=42).points
b = sa.chaos_game(ifs, 1000, seed=42).points
print("\nsame seed, same bytes:", a.tobytes() == b.tobytes())

# Deterministic level-n points and the randomised construction.
exact = sa.deterministic_points(ifs, 8).points
noisy = sa.randomized_attractor(ifs, 8, sigma=0.01, seed=3).points
shift = np.linalg.norm(noisy - exact, axis=1)
envelope = 0.01 * math.sqrt(2) * sum(0.5**j for j in range(8))
print(f"{len(exact)} level-8 points; perturbation max {shift.max():.4f} <= envelope {envelope:.4f}")
