"""
Bedford-McMullen carpets and the dimension gap
==============================================

Split the unit square into p columns and q rows and keep some cells. The
resulting carpet has closed-form Hausdorff and box dimensions that depend on
how the kept cells are spread over the columns, while the affinity dimension
only sees the linear parts. Moving cells between columns without changing
the maps' linear parts exposes the gap.
"""

import selfaffine as sa

for name, cells in [
    ("L-shape", [(0, 0), (0, 1), (1, 0)]),
    ("one column", [(0, 0), (0, 1)]),
    ("two columns", [(0, 0), (1, 1)]),
]:
    spec = sa.make_carpet(2, 3, cells)
    ifs = sa.carpet_to_ifs(spec)
    haus = sa.carpet_hausdorff_dimension(spec)
    box = sa.carpet_box_dimension(spec)
    s = sa.affinity_dimension(ifs, 4, grid=0).zero
    fit, _ = sa.estimate_box_dimension(ifs, 200_000, seed=1)
    print(f"{name}\n" + "\n".join("   " + row for row in spec.ascii().splitlines()))
    print(f"   dim_H {haus:.4f}  dim_B {box:.4f}  box estimate {fit.slope:.4f}  affinity s_4 {s:.4f}\n")

# A tall grid (q < p) is transposed internally; the dimensions are unchanged.
wide = sa.make_carpet(3, 2, [(0, 0), (1, 0), (0, 1)])
print("transposed input:", wide.transposed, f"dim_B {sa.carpet_box_dimension(wide):.4f}")
