"""Bedford-McMullen carpets and generalised grid carpets.

A carpet splits the unit square into ``p`` equal columns and ``q`` equal
rows and keeps a set of cells ``(j, i)`` (column ``j``, row ``i``). Each
kept cell is the image of the square under ``diag(1/p, 1/q)`` plus the
cell's lower-left corner.

The closed-form dimensions follow McMullen (1984), see Falconer, *Fractal
Geometry*, Example 9.11. They assume ``q >= p``, so the cells are at least
as wide as they are tall; :func:`make_carpet` transposes specs that come
the other way round.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ParseError
from .ifs import IFS, _decode


@dataclass(frozen=True)
class CarpetSpec:
    """Canonical carpet description with ``q >= p``.

    ``transposed`` records that the user's spec had ``q < p`` and was
    mirrored in the diagonal; :func:`carpet_to_ifs` undoes it so the
    attractor appears in the orientation the user asked for.
    """

    p: int
    q: int
    cells: frozenset
    transposed: bool = False

    def __post_init__(self):
        if self.p < 2 or self.q < 2:
            raise InvalidInputError(f"need p, q >= 2, got p={self.p}, q={self.q}")
        if self.q < self.p:
            raise InvalidInputError("CarpetSpec requires q >= p; build it with make_carpet")
        if not self.cells:
            raise InvalidInputError("a carpet needs at least one cell")
        bad = [c for c in self.cells if not (0 <= c[0] < self.p and 0 <= c[1] < self.q)]
        if bad:
            raise InvalidInputError(f"cells {sorted(bad)} outside the {self.p}x{self.q} grid")

    @property
    def column_counts(self):
        """Cells per non-empty column, by column index."""
        return dict(sorted(Counter(j for j, _ in self.cells).items()))

    def ascii(self, mark="#", blank="."):
        """Top row first, as drawn in the unit square (user orientation)."""
        cols, rows, cells = self.p, self.q, self.cells
        if self.transposed:
            cols, rows = rows, cols
            cells = {(i, j) for j, i in cells}
        return "\n".join(
            "".join(mark if (j, i) in cells else blank for j in range(cols)) for i in reversed(range(rows))
        )


def make_carpet(p, q, cells):
    """Validate and canonicalise a carpet, transposing when ``q < p``."""
    cells = frozenset((int(j), int(i)) for j, i in cells)
    if q < p:
        return CarpetSpec(q, p, frozenset((i, j) for j, i in cells), True)
    return CarpetSpec(int(p), int(q), cells)


def carpet_to_ifs(spec):
    """One map ``diag(1/p, 1/q) x + (j/p, i/q)`` per cell, cells sorted."""
    p, q, cells = spec.p, spec.q, sorted(spec.cells)
    if spec.transposed:
        p, q = q, p
        cells = sorted((i, j) for j, i in cells)
    A = np.diag([1.0 / p, 1.0 / q])
    return IFS.from_arrays([A] * len(cells), [(j / p, i / q) for j, i in cells])


def carpet_box_dimension(spec):
    """``log c / log p + log(N / c) / log q`` with ``c`` non-empty columns."""
    n = len(spec.cells)
    c = len(spec.column_counts)
    return math.log(c) / math.log(spec.p) + math.log(n / c) / math.log(spec.q)


def carpet_hausdorff_dimension(spec):
    """``log_p sum_j t_j^(log p / log q)`` over column counts ``t_j``."""
    theta = math.log(spec.p) / math.log(spec.q)
    total = sum(t**theta for t in spec.column_counts.values())
    return math.log(total) / math.log(spec.p)


def transpose(spec):
    """The same carpet mirrored in the diagonal, as a user-level spec."""
    p, q, cells = spec.p, spec.q, spec.cells
    if spec.transposed:
        p, q, cells = q, p, frozenset((i, j) for j, i in cells)
    return make_carpet(q, p, [(i, j) for j, i in cells])


@dataclass(frozen=True)
class GridSpec:
    """Unequal grid: column widths and row heights, each summing to 1."""

    widths: tuple
    heights: tuple
    cells: frozenset

    def __post_init__(self):
        w = np.asarray(self.widths, dtype=float)
        h = np.asarray(self.heights, dtype=float)
        for name, v in (("widths", w), ("heights", h)):
            if v.size == 0 or np.any(v <= 0) or abs(v.sum() - 1.0) > 1e-12:
                raise InvalidInputError(f"{name} must be positive and sum to 1, got {v.tolist()}")
        if not self.cells:
            raise InvalidInputError("a grid carpet needs at least one cell")
        bad = [c for c in self.cells if not (0 <= c[0] < w.size and 0 <= c[1] < h.size)]
        if bad:
            raise InvalidInputError(f"cells {sorted(bad)} outside the grid")
        object.__setattr__(self, "widths", tuple(w.tolist()))
        object.__setattr__(self, "heights", tuple(h.tolist()))
        object.__setattr__(self, "cells", frozenset((int(j), int(i)) for j, i in self.cells))


def grid_to_ifs(spec):
    """``diag(width_j, height_i)`` plus the cell's lower-left corner, cells sorted."""
    x0 = np.concatenate([[0.0], np.cumsum(spec.widths)[:-1]])
    y0 = np.concatenate([[0.0], np.cumsum(spec.heights)[:-1]])
    cells = sorted(spec.cells)
    return IFS.from_arrays(
        [np.diag([spec.widths[j], spec.heights[i]]) for j, i in cells],
        [(x0[j], y0[i]) for j, i in cells],
    )


def carpet_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    for key in ("p", "q"):
        v = doc.get(key)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError("must be an integer", key)
    cells = doc.get("cells")
    if not isinstance(cells, list):
        raise ParseError("must be a list of [column, row] pairs", "cells")
    pairs = []
    for n, c in enumerate(cells):
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in c)):
            raise ParseError("expected [column, row] integers", f"cells[{n}]")
        pairs.append(tuple(c))
    try:
        return make_carpet(doc["p"], doc["q"], pairs)
    except InvalidInputError as exc:
        raise ParseError(str(exc), "$") from None


def loads_carpet(text):
    return carpet_from_dict(_decode(text))


def load_carpet(path):
    with open(path, encoding="utf-8") as fh:
        return loads_carpet(fh.read())


def dumps_carpet(spec):
    p, q, cells = spec.p, spec.q, spec.cells
    if spec.transposed:
        p, q, cells = q, p, {(i, j) for j, i in cells}
    return json.dumps({"p": p, "q": q, "cells": [list(c) for c in sorted(cells)]})
