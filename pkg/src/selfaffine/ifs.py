"""Affine iterated function systems: representation, validation, words.

A map is ``f(x) = A x + a``. Words are tuples of 0-based map indices and
``compose(ifs, (i, j))`` is ``f_i o f_j``.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ParseError
from .linalg_small import as_matrix, determinant, operator_norm

DET_FLOOR = 1e-12
RADIUS_FLOOR = 1e-9
# longest word any enumeration will build; alpha_d underflows past this
# for typical contraction ratios
MAX_WORD_LENGTH = 30


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.linear)
        a = np.asarray(self.translation, dtype=float).reshape(-1)
        if a.shape[0] != A.shape[0]:
            raise InvalidInputError(
                f"translation has length {a.shape[0]}, linear part is {A.shape[0]}x{A.shape[0]}"
            )
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("translation has non-finite entries")
        A.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "linear", A)
        object.__setattr__(self, "translation", a)

    @property
    def d(self):
        return self.linear.shape[0]

    def __call__(self, x):
        """Apply to a point of shape (d,) or a stack of points (N, d)."""
        x = np.asarray(x, dtype=float)
        return x @ self.linear.T + self.translation

    def __matmul__(self, other):
        # (f @ g)(x) == f(g(x))
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d), np.zeros(d))

    def __repr__(self):
        return f"AffineMap(linear={self.linear.tolist()}, translation={self.translation.tolist()})"


@dataclass(frozen=True, eq=False)
class IFS:
    """An ordered, non-empty tuple of affine maps sharing one dimension."""

    maps: tuple

    def __post_init__(self):
        maps = tuple(m if isinstance(m, AffineMap) else AffineMap(*m) for m in self.maps)
        if not maps:
            raise InvalidInputError("an IFS needs at least one map")
        d = maps[0].d
        bad = [i for i, m in enumerate(maps) if m.d != d]
        if bad:
            raise InvalidInputError(f"maps {bad} do not have ambient dimension {d}")
        object.__setattr__(self, "maps", maps)

    @classmethod
    def from_arrays(cls, linears, translations):
        return cls(tuple(AffineMap(A, a) for A, a in zip(linears, translations, strict=True)))

    @property
    def d(self):
        return self.maps[0].d

    @property
    def k(self):
        return len(self.maps)

    def __len__(self):
        return len(self.maps)

    @property
    def linears(self):
        """Linear parts stacked into shape (k, d, d)."""
        return np.stack([m.linear for m in self.maps])

    @property
    def translations(self):
        return np.stack([m.translation for m in self.maps])

    def ratios(self):
        """Contraction ratios ``lambda_i = ||A_i||``."""
        return np.array([operator_norm(m.linear) for m in self.maps])

    def require_valid(self):
        report = validate_ifs(self)
        if not report.ok:
            raise InvalidInputError(report.summary())
        return report

    def to_dict(self):
        return {
            "d": self.d,
            "maps": [{"A": m.linear.tolist(), "a": m.translation.tolist()} for m in self.maps],
        }


@dataclass(frozen=True)
class MapDiagnostics:
    index: int
    norm: float
    det: float
    contractive: bool
    invertible: bool


@dataclass(frozen=True)
class ValidationReport:
    maps: tuple = field(default_factory=tuple)

    @property
    def ok(self):
        return all(m.contractive and m.invertible for m in self.maps)

    def summary(self):
        lines = []
        for m in self.maps:
            flags = []
            if not m.contractive:
                flags.append(f"not contractive (norm {m.norm:.6g} >= 1)")
            if not m.invertible:
                flags.append(f"not invertible (|det| {abs(m.det):.3g} < {DET_FLOOR:g})")
            if flags:
                lines.append(f"map {m.index}: " + ", ".join(flags))
        return "; ".join(lines) if lines else "all maps contractive and invertible"


def validate_ifs(ifs):
    """Per-map operator norm and determinant with pass/fail flags.

    The contraction ratio of each map is always its operator norm, never a
    user-declared value. A map is invertible when ``|det| >= 1e-12``.
    """
    out = []
    for i, m in enumerate(ifs.maps):
        lam = operator_norm(m.linear)
        det = determinant(m.linear)
        out.append(MapDiagnostics(i, lam, det, lam < 1.0, abs(det) >= DET_FLOOR))
    return ValidationReport(tuple(out))


def check_word(ifs, word, max_length=None):
    word = tuple(int(i) for i in word)
    bad = [i for i in word if not 0 <= i < ifs.k]
    if bad:
        raise InvalidInputError(f"word {word} has indices {bad} outside 0..{ifs.k - 1}")
    if max_length is not None and len(word) > max_length:
        raise InvalidInputError(f"word length {len(word)} exceeds cap {max_length}")
    return word


def compose(ifs, word):
    """The map ``f_{w_0} o f_{w_1} o ... o f_{w_{n-1}}``; identity for ``()``."""
    word = check_word(ifs, word)
    A = np.eye(ifs.d)
    a = np.zeros(ifs.d)
    for i in word:
        m = ifs.maps[i]
        a = A @ m.translation + a
        A = A @ m.linear
    return AffineMap(A, a)


def bounding_radius(ifs):
    """``R = max_i |a_i| / (1 - max_i ||A_i||)``, floored at 1e-9.

    Every map sends the closed ball ``B(0, R)`` into itself, so the
    attractor lies inside it.
    """
    ifs.require_valid()
    lam = float(np.max(ifs.ratios()))
    reach = max(float(np.linalg.norm(m.translation)) for m in ifs.maps)
    return max(reach / (1.0 - lam), RADIUS_FLOOR)


def sierpinski_triangle():
    """The equilateral Sierpinski system with unit base."""
    half = 0.5 * np.eye(2)
    return IFS.from_arrays([half] * 3, [(0.0, 0.0), (0.5, 0.0), (0.25, 0.25 * math.sqrt(3.0))])


def similarity(ratio, angle=0.0, translation=(0.0, 0.0), reflect=False):
    """Planar similarity ``ratio * R(angle) [* diag(1, -1)] + translation``."""
    c, s = math.cos(angle), math.sin(angle)
    A = ratio * np.array([[c, -s], [s, c]])
    if reflect:
        A = A @ np.diag([1.0, -1.0])
    return AffineMap(A, translation)


# --- JSON ingestion -------------------------------------------------------


def _decode(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        byte = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno} (byte {byte})") from None


def _number_array(value, where, shape):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected numbers", where) from None
    if arr.shape != shape:
        raise ParseError(f"expected shape {shape}, got {arr.shape}", where)
    if not np.all(np.isfinite(arr)):
        raise ParseError("non-finite number", where)
    return arr


def ifs_from_dict(doc):
    """Build an IFS from ``{"d": int, "maps": [{"A": [[..]..], "a": [..]}, ..]}``."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    d = doc.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or not 1 <= d <= 4:
        raise ParseError("must be an integer in 1..4", "d")
    maps = doc.get("maps")
    if not isinstance(maps, list) or not maps:
        raise ParseError("must be a non-empty list", "maps")
    out = []
    for i, m in enumerate(maps):
        if not isinstance(m, dict):
            raise ParseError("must be an object", f"maps[{i}]")
        for key in ("A", "a"):
            if key not in m:
                raise ParseError("missing field", f"maps[{i}].{key}")
        A = _number_array(m["A"], f"maps[{i}].A", (d, d))
        a = _number_array(m["a"], f"maps[{i}].a", (d,))
        out.append(AffineMap(A, a))
    return IFS(tuple(out))


def loads_ifs(text):
    return ifs_from_dict(_decode(text))


def load_ifs(path):
    with open(path, encoding="utf-8") as fh:
        return loads_ifs(fh.read())


def dumps_ifs(ifs):
    return json.dumps(ifs.to_dict(), indent=2)
