"""Persistence diagrams: data model, text I/O and diagonal projection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DiagramFormatError

__all__ = [
    "PersistenceDiagram",
    "project_to_diagonal",
    "read_diagram",
    "write_diagram",
    "load_diagram_file",
    "diagonal_distance",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of bars in one homology dimension.

    Attributes
    ----------
    finite : ndarray, shape (k, 2)
        ``(birth, death)`` rows. Zero-length bars are allowed only when the
        diagram is built with ``allow_diagonal=True``.
    infinite : ndarray, shape (m,)
        Births of bars that never die.
    dim : int
        Homology dimension.
    """

    finite: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    infinite: np.ndarray = field(default_factory=lambda: np.empty(0))
    dim: int = 0
    allow_diagonal: bool = False

    def __post_init__(self):
        fin = np.asarray(self.finite, dtype=np.float64).reshape(-1, 2)
        inf = np.asarray(self.infinite, dtype=np.float64).reshape(-1)
        bad = fin[:, 1] < fin[:, 0] if self.allow_diagonal else fin[:, 1] <= fin[:, 0]
        if np.any(bad):
            raise ValueError("finite bars must satisfy birth < death")
        if not np.all(np.isfinite(fin)) or not np.all(np.isfinite(inf)):
            raise ValueError("finite bars and infinite births must be finite numbers")
        object.__setattr__(self, "finite", fin)
        object.__setattr__(self, "infinite", inf)

    def __len__(self) -> int:
        return self.finite.shape[0] + self.infinite.shape[0]

    def sorted(self) -> "PersistenceDiagram":
        """Copy with bars in lexicographic order, for canonical comparison."""
        order = np.lexsort((self.finite[:, 1], self.finite[:, 0]))
        return PersistenceDiagram(self.finite[order], np.sort(self.infinite),
                                  self.dim, self.allow_diagonal)

    def same_multiset(self, other: "PersistenceDiagram") -> bool:
        a, b = self.sorted(), other.sorted()
        return (a.finite.shape == b.finite.shape and bool(np.all(a.finite == b.finite))
                and a.infinite.shape == b.infinite.shape
                and bool(np.all(a.infinite == b.infinite)))

    def __repr__(self) -> str:
        return (f"PersistenceDiagram(dim={self.dim}, finite={self.finite.shape[0]}, "
                f"infinite={self.infinite.shape[0]})")


def diagonal_distance(points) -> np.ndarray:
    """Euclidean distance of each ``(birth, death)`` row to the diagonal."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return np.abs(pts[:, 1] - pts[:, 0]) / _SQRT2


def project_to_diagonal(p) -> tuple[tuple[float, float], float]:
    """Nearest diagonal point to ``p = (birth, death)`` and the distance to it."""
    b, d = float(p[0]), float(p[1])
    m = 0.5 * (b + d)
    return (m, m), abs(d - b) / _SQRT2


def _fmt(x: float, precision: int | None) -> str:
    if precision is None:
        return repr(float(x))
    return f"{x:.{precision}g}"


def write_diagram(diagram: PersistenceDiagram, precision: int | None = None) -> str:
    """Text form, one bar per line; ``precision=None`` round-trips exactly."""
    lines = [f"{_fmt(b, precision)} {_fmt(d, precision)}" for b, d in diagram.finite]
    lines += [f"{_fmt(b, precision)} inf" for b in diagram.infinite]
    return "\n".join(lines) + ("\n" if lines else "")


def read_diagram(text: str | bytes, dim: int = 0) -> PersistenceDiagram:
    """Parse ``birth death`` lines; ``inf`` marks an infinite bar.

    Raises
    ------
    DiagramFormatError
        On malformed lines or a finite bar with ``death <= birth``.
    """
    if isinstance(text, bytes):
        text = text.decode()
    fin: list[tuple[float, float]] = []
    inf: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.replace(",", " ").split()
        if len(toks) != 2:
            raise DiagramFormatError(f"expected 'birth death', found {len(toks)} tokens", lineno)
        try:
            b, d = float(toks[0]), float(toks[1])
        except ValueError:
            raise DiagramFormatError("non-numeric bar endpoint", lineno) from None
        if not math.isfinite(b):
            raise DiagramFormatError("birth must be finite", lineno)
        if d == math.inf:
            inf.append(b)
            continue
        if not d > b:
            raise DiagramFormatError(f"death {d!r} is not after birth {b!r}", lineno)
        fin.append((b, d))
    return PersistenceDiagram(np.array(fin, dtype=np.float64).reshape(-1, 2),
                              np.array(inf, dtype=np.float64), dim)


def load_diagram_file(path, dim: int = 0) -> PersistenceDiagram:
    with open(path, "rb") as fh:
        return read_diagram(fh.read(), dim)
