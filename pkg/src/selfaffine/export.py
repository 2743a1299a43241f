"""File formats: CSV tables and binary portable pixmaps (P6).

CSV numbers use ``%.17g`` so values round-trip exactly. Comment lines
start with ``#``.
"""

import io
import math

import numpy as np

from .errors import InvalidInputError

MAX_RASTER_SIDE = 8192
BACKGROUND = (0, 0, 0)
POINT_COLOR = (255, 255, 255)
OUTLINE_COLOR = (255, 64, 64)


def _fmt(v):
    return "%.17g" % v


def _open_text(path_or_file):
    if hasattr(path_or_file, "write"):
        return path_or_file, False
    return open(path_or_file, "w", encoding="utf-8", newline="\n"), True


def write_points(target, cloud):
    """``x,y[,z,...]`` CSV rows, or an ``.npy`` array when the path says so."""
    points = np.asarray(getattr(cloud, "points", cloud))
    if isinstance(target, str) and target.endswith(".npy"):
        np.save(target, points)
        return
    fh, close = _open_text(target)
    try:
        names = ["x", "y", "z", "w"][: points.shape[1]]
        fh.write(",".join(names) + "\n")
        for row in points:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()


def write_box_counts(target, series, fit=None):
    """``delta,count`` rows; the fitted line goes in a trailing comment."""
    fh, close = _open_text(target)
    try:
        fh.write("delta,count\n")
        for delta, count in zip(series.scales, series.counts):
            fh.write(f"{_fmt(delta)},{int(count)}\n")
        if fit is not None:
            fh.write(f"# slope={_fmt(fit.slope)} intercept={_fmt(fit.intercept)} max_residual={_fmt(fit.max_residual)}\n")
    finally:
        if close:
            fh.close()


def write_pressure(target, curve):
    """Header comment with ``n`` and ``s_n``, then ``s,P`` rows."""
    fh, close = _open_text(target)
    try:
        fh.write(f"# n={curve.depth} s_n={_fmt(curve.zero)} clamped={int(curve.clamped)}\n")
        fh.write("s,P\n")
        for s, p in curve.samples:
            fh.write(f"{_fmt(s)},{_fmt(p)}\n")
    finally:
        if close:
            fh.close()


def write_cover(target, ellipses=(), ball_centers=None, ball_radius=None):
    """One row per ellipse, then one per ball.

    Columns are ``kind, c0..c{d-1}, semi0..semi{d-1}, angle``; ``angle`` is
    the major-axis direction in radians for d = 2 and empty otherwise. Balls
    repeat their radius in every semi-length column.
    """
    ellipses = list(ellipses)
    if ellipses:
        d = ellipses[0].d
    elif ball_centers is not None and len(ball_centers):
        d = np.asarray(ball_centers).shape[1]
    else:
        d = 2
    fh, close = _open_text(target)
    try:
        cols = ["kind"] + [f"c{j}" for j in range(d)] + [f"semi{j}" for j in range(d)] + ["angle"]
        fh.write(",".join(cols) + "\n")
        for e in ellipses:
            angle = _fmt(e.angle) if d == 2 else ""
            fh.write(",".join(["ellipse", *map(_fmt, e.center), *map(_fmt, e.semi_lengths), angle]) + "\n")
        if ball_centers is not None:
            for c in np.asarray(ball_centers):
                fh.write(",".join(["ball", *map(_fmt, c), *[_fmt(ball_radius)] * d, "0" if d == 2 else ""]) + "\n")
    finally:
        if close:
            fh.close()


class Viewport:
    """Affine map from world rectangle to pixel grid, y pointing up."""

    def __init__(self, bounds, width, height):
        self.xmin, self.ymin, self.xmax, self.ymax = (float(v) for v in bounds)
        self.width, self.height = int(width), int(height)
        self.sx = self.width / (self.xmax - self.xmin)
        self.sy = self.height / (self.ymax - self.ymin)

    @classmethod
    def fit(cls, points, ellipses, width, height, pad=0.02):
        lo = np.min(points, axis=0) if len(points) else np.array([0.0, 0.0])
        hi = np.max(points, axis=0) if len(points) else np.array([1.0, 1.0])
        for e in ellipses:
            half = np.sqrt(np.sum((e.axes * e.semi_lengths) ** 2, axis=1))
            lo = np.minimum(lo, e.center - half)
            hi = np.maximum(hi, e.center + half)
        span = np.maximum(hi - lo, 1e-12)
        lo, hi = lo - pad * span, hi + pad * span
        return cls((lo[0], lo[1], hi[0], hi[1]), width, height)

    @property
    def pixel_size(self):
        return max(1.0 / self.sx, 1.0 / self.sy)

    def to_pixels(self, points):
        points = np.atleast_2d(points)
        col = np.floor((points[:, 0] - self.xmin) * self.sx).astype(np.int64)
        row = np.floor((self.ymax - points[:, 1]) * self.sy).astype(np.int64)
        return row, col

    def pixel_centers(self, rows, cols):
        x = self.xmin + (np.asarray(cols) + 0.5) / self.sx
        y = self.ymax - (np.asarray(rows) + 0.5) / self.sy
        return np.stack([x, y], axis=1)


def rasterize(points, width, height, ellipses=(), viewport=None):
    """RGB image (height, width, 3) of a planar cloud with optional outlines.

    Outlines are drawn first and points on top.
    """
    if not (1 <= width <= MAX_RASTER_SIDE and 1 <= height <= MAX_RASTER_SIDE):
        raise InvalidInputError(f"raster size must be within 1..{MAX_RASTER_SIDE}, got {width}x{height}")
    points = np.asarray(getattr(points, "points", points), dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidInputError("rendering needs planar points")
    ellipses = list(ellipses)
    vp = viewport or Viewport.fit(points, ellipses, width, height)
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = BACKGROUND

    def plot(pts, color):
        rows, cols = vp.to_pixels(pts)
        keep = (rows >= 0) & (rows < height) & (cols >= 0) & (cols < width)
        img[rows[keep], cols[keep]] = color

    for e in ellipses:
        perimeter_px = 2.0 * math.pi * float(e.semi_lengths[0]) / vp.pixel_size
        plot(e.boundary(int(4 * perimeter_px) + 16), OUTLINE_COLOR)
    plot(points, POINT_COLOR)
    return img, vp


def ppm_bytes(img):
    """Binary PPM: ``P6\\n<w> <h>\\n255\\n`` followed by RGB rows top to bottom."""
    h, w, _ = img.shape
    buf = io.BytesIO()
    buf.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
    buf.write(np.ascontiguousarray(img, dtype=np.uint8).tobytes())
    return buf.getvalue()


def read_ppm(data):
    """Parse the P6 layout written by :func:`ppm_bytes`."""
    header, _, rest = data.partition(b"\n")
    if header != b"P6":
        raise InvalidInputError("not a binary PPM")
    dims, _, rest = rest.partition(b"\n")
    maxval, _, raster = rest.partition(b"\n")
    w, h = (int(v) for v in dims.split())
    if int(maxval) != 255 or len(raster) != w * h * 3:
        raise InvalidInputError("unexpected PPM payload")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w, 3)
