"""
Similarity dimension and stopping-set covers
============================================

A system of similarities with ratios lambda_i has a natural dimension s
solving sum(lambda_i ** s) == 1. Cutting every infinite word as soon as its
ratio product drops below delta gives a finite prefix code Z(delta), and the
cylinders f_w(B(0, R)) for w in Z(delta) cover the attractor with sets of
diameter at most 2 R delta.
"""

import math

import numpy as np

import selfaffine as sa

# The Sierpinski triangle: three maps of ratio 1/2.
ifs = sa.sierpinski_triangle()
s = sa.similarity_dimension(ifs.ratios())
print(f"similarity dimension {s:.10f}  (log 3 / log 2 = {math.log(3) / math.log(2):.10f})")

# Unequal ratios: the stopping set mixes word lengths.
rng = np.random.default_rng(0)
maps = [sa.similarity(r, rng.uniform(0, 2 * math.pi), rng.uniform(-1, 1, 2)) for r in (0.5, 0.3, 0.2)]
mixed = sa.IFS(tuple(maps))
lam = mixed.ratios()
s = sa.similarity_dimension(lam)
print(f"\nratios {lam.round(3).tolist()}  ->  s = {s:.6f}")

for delta in (0.5, 0.1, 0.02):
    Z = sa.stopping_set(mixed, delta)
    mass = sum(math.prod(lam[list(w)]) ** s for w in Z)
    bound = lam.min() ** -s * delta**-s
    lengths = sorted({len(w) for w in Z})
    print(f"delta={delta:<5} #Z={len(Z):<5} bound={bound:8.1f}  sum lambda_w^s={mass:.12f}  word lengths {lengths}")

# The cover: one ellipse (here a disc) per stopping word.
R = sa.bounding_radius(mixed)
ellipses = sa.cylinder_cover(mixed, sa.stopping_set(mixed, 0.1), R)
cloud = sa.chaos_game(mixed, 20_000, seed=1)
inside = sa.union_contains(ellipses, cloud.points)
print(f"\nR = {R:.4f}; {len(ellipses)} discs of radius <= {R * 0.1:.4f} hold {inside.mean():.0%} of 20000 orbit points")
