"""Checkers for sufficient conditions on planar affine systems.

Both checkers return a :class:`ConditionReport` with one finding per map
or pair and the numeric margin behind it, so a verdict can always be traced
back to a concrete witness.
"""

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidInputError, UnsupportedDimensionError
from .linalg_small import singular_values

TOL = 1e-12

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class Finding:
    check: str
    subject: tuple
    margin: float
    status: str
    detail: str = ""


@dataclass
class ConditionReport:
    condition: str
    verdict: str
    findings: list = field(default_factory=list)
    note: str = ""

    @property
    def witness(self):
        """The finding that decides the verdict (worst failure or tightest pass)."""
        if not self.findings:
            return None
        if self.verdict == PASS:
            return min(self.findings, key=lambda f: f.margin)
        deciding = [f for f in self.findings if f.status == self.verdict]
        return min(deciding or self.findings, key=lambda f: f.margin)

    def failing(self, check=None):
        return [f for f in self.findings if f.status == FAIL and (check is None or f.check == check)]

    def to_dict(self):
        w = self.witness
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "witness": asdict(w) if w else None,
            "findings": [asdict(f) for f in self.findings],
            "note": self.note,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        lines = [f"{self.condition}: {self.verdict.upper()}"]
        w = self.witness
        if w is not None:
            lines.append(f"  witness: {w.check} {w.subject} margin={w.margin:.6g} {w.detail}".rstrip())
        for f in self.findings:
            lines.append(f"  [{f.status:>12}] {f.check:<14} {str(f.subject):<10} margin={f.margin:+.6g} {f.detail}".rstrip())
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)


def _require_plane(ifs):
    if ifs.d != 2:
        raise UnsupportedDimensionError(f"this check is only defined in the plane, got d={ifs.d}")


def _verdict(findings):
    statuses = {f.status for f in findings}
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def rectangle_vertices(rect):
    x0, y0, x1, y1 = (float(v) for v in rect)
    if not (x0 < x1 and y0 < y1):
        raise InvalidInputError(f"degenerate rectangle {rect}; expected x0 < x1 and y0 < y1")
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])


def _edge_normals(poly):
    edges = np.roll(poly, -1, axis=0) - poly
    normals = np.stack([-edges[:, 1], edges[:, 0]], axis=1)
    lengths = np.linalg.norm(normals, axis=1)
    keep = lengths > 0
    return normals[keep] / lengths[keep, None]


def sat_separation(P, Q):
    """Signed separating distance of two convex polygons.

    The maximum over the edge normals of both polygons of the gap between
    the projected intervals. Positive means a strict gap, zero means the
    boundaries touch, negative means the interiors overlap (by at least
    that depth along every candidate axis).
    """
    P, Q = np.asarray(P, dtype=float), np.asarray(Q, dtype=float)
    axes = np.concatenate([_edge_normals(P), _edge_normals(Q)])
    if len(axes) == 0:
        return 0.0 if np.allclose(P, Q) else float("inf")
    p, q = P @ axes.T, Q @ axes.T
    gaps = np.maximum(q.min(axis=0) - p.max(axis=0), p.min(axis=0) - q.max(axis=0))
    return float(gaps.max())


def check_osc_rectangle(ifs, rect, tol=TOL):
    """Open set condition for the candidate ``V = (x0, x1) x (y0, y1)``.

    Each image ``f_i(V)`` is an open parallelogram. ``f_i(V)`` lies in
    ``V`` exactly when the four image vertices lie in the closed rectangle
    (containment margin: smallest distance of a vertex to the rectangle's
    sides, inside positive). Images of distinct maps must have disjoint
    interiors; the separating-axis distance is the pair's margin, so images
    that only share boundary pass with margin 0. A fail concerns this V
    only and says nothing about other open sets.
    """
    _require_plane(ifs)
    verts = rectangle_vertices(rect)
    x0, y0 = verts[0]
    x1, y1 = verts[2]
    images = [m(verts) for m in ifs.maps]
    findings = []
    for i, img in enumerate(images):
        dist = np.minimum.reduce([img[:, 0] - x0, x1 - img[:, 0], img[:, 1] - y0, y1 - img[:, 1]])
        v = int(np.argmin(dist))
        margin = float(dist[v])
        findings.append(
            Finding("containment", (i,), margin, PASS if margin >= -tol else FAIL, f"vertex {img[v].tolist()}")
        )
    for i, j in itertools.combinations(range(len(images)), 2):
        margin = sat_separation(images[i], images[j])
        status = PASS if margin >= -tol else FAIL
        findings.append(Finding("disjointness", (i, j), margin, status, "overlap" if status == FAIL else ""))
    return ConditionReport(
        "open set condition",
        _verdict(findings),
        findings,
        f"checked for the candidate V = {tuple(float(v) for v in rect)} only; "
        "a fail does not show that no open set works",
    )


def _status(margin, tol):
    if margin > tol:
        return PASS
    if margin < -tol:
        return FAIL
    return INCONCLUSIVE


def cone_interval(A):
    """Angular interval ``[lo, hi]`` of the cone spanned by ``A e1`` and ``A e2``."""
    A = np.asarray(A, dtype=float)
    t1 = math.atan2(A[1, 0], A[0, 0])
    t2 = math.atan2(A[1, 1], A[0, 1])
    lo, hi = min(t1, t2), max(t1, t2)
    if hi - lo > math.pi:
        lo, hi = hi, lo + 2.0 * math.pi
    return lo, hi


def interval_gap(a, b):
    """Gap between two intervals; negative is the overlap length."""
    return max(b[0] - a[1], a[0] - b[1])


def check_hueter_lalley(ifs, tol=TOL):
    """Shape bound and first-quadrant cone separation, as formalised here.

    (a) ``alpha_1(A_i)^2 < alpha_2(A_i)`` for every map (margin
    ``alpha_2 - alpha_1^2``); (b) ``A_i`` sends the closed first quadrant
    into the open one, i.e. every entry of ``A_i`` is positive (margin: the
    smallest entry); (c) the open angular intervals of the image cones are
    pairwise disjoint (margin: the angular gap). Margins within ``tol`` of
    zero are reported as inconclusive. The separation of the covering
    ellipses is not checked, so a pass is not a dimension statement.
    """
    _require_plane(ifs)
    findings = []
    for i, m in enumerate(ifs.maps):
        a1, a2 = singular_values(m.linear)
        margin = float(a2 - a1 * a1)
        findings.append(Finding("shape", (i,), margin, _status(margin, tol), f"alpha=({a1:.6g}, {a2:.6g})"))
    for i, m in enumerate(ifs.maps):
        r, c = np.unravel_index(int(np.argmin(m.linear)), (2, 2))
        margin = float(m.linear[r, c])
        findings.append(Finding("quadrant", (i,), margin, _status(margin, tol), f"entry A[{r},{c}]"))
    cones = [cone_interval(m.linear) for m in ifs.maps]
    for i, j in itertools.combinations(range(len(cones)), 2):
        margin = interval_gap(cones[i], cones[j])
        findings.append(
            Finding(
                "cone_disjoint",
                (i, j),
                margin,
                _status(margin, tol),
                f"angles {tuple(round(v, 6) for v in cones[i])} vs {tuple(round(v, 6) for v in cones[j])}",
            )
        )
    return ConditionReport(
        "Hueter-Lalley hypotheses (as formalised)",
        _verdict(findings),
        findings,
        "checks the shape bound and cone separation only; ellipse separation is not "
        "quantified and no dimension conclusion is drawn",
    )
