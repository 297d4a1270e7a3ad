"""Explicit Z2 boundary-matrix reduction.

Columns are sorted lists of row indices. Column addition is a symmetric
difference computed by a linear merge. These routines favor clarity; they are
the reference the implicit engine is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputParseError

__all__ = [
    "BoundaryMatrix",
    "PivotTable",
    "ScanMetadata",
    "Reduction",
    "low_of",
    "add_columns",
    "reduce_matrix",
    "standard_reduce",
    "twist_order",
    "twist_reduce",
    "oblivious_reduce",
    "scan_metadata",
    "compressible_rows",
    "compress",
    "anti_transpose",
    "anti_transpose_reduce",
    "read_boundary_matrix",
    "write_boundary_matrix",
]


@dataclass(frozen=True)
class BoundaryMatrix:
    """Square Z2 matrix stored by columns, with a dimension per column.

    Every row index in column ``j`` is below ``j`` and rows are strictly
    increasing.
    """

    columns: tuple[tuple[int, ...], ...]
    dims: tuple[int, ...]

    def __init__(self, columns: Iterable[Iterable[int]], dims: Iterable[int] | None = None):
        cols = tuple(tuple(int(r) for r in c) for c in columns)
        dims_t = tuple(int(d) for d in dims) if dims is not None else (0,) * len(cols)
        if len(dims_t) != len(cols):
            raise ValueError("one dimension per column is required")
        for j, col in enumerate(cols):
            for a, r in enumerate(col):
                if r < 0 or r >= j:
                    raise ValueError(f"column {j}: row {r} is not above the diagonal")
                if a and r <= col[a - 1]:
                    raise ValueError(f"column {j}: rows must be strictly increasing")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "dims", dims_t)

    @property
    def n(self) -> int:
        return len(self.columns)

    def __len__(self) -> int:
        return len(self.columns)


class PivotTable(dict):
    """Row -> column map of pivots. Each row holds at most one pivot."""

    def __setitem__(self, row: int, col: int) -> None:
        if row in self and self[row] != col:
            raise ValueError(f"row {row} already pivots in column {self[row]}")
        super().__setitem__(row, col)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """``(row, col)`` pairs ordered by column."""
        return sorted(self.items(), key=lambda rc: rc[1])

    def as_set(self) -> set[tuple[int, int]]:
        return set(self.items())


@dataclass
class Reduction:
    """Outcome of a reduction: the reduced columns plus pivot and work bookkeeping."""

    columns: list[list[int]]
    pivots: PivotTable
    additions: int = 0
    cleared: set[int] = field(default_factory=set)


def low_of(column: Sequence[int]) -> int | None:
    """Largest row index of a column, ``None`` for the zero column."""
    return column[-1] if len(column) else None


def add_columns(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Z2 sum of two sorted columns."""
    out: list[int] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif b[j] < a[i]:
            out.append(b[j])
            j += 1
        else:
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def reduce_matrix(M: BoundaryMatrix, order: Sequence[int] | None = None,
                  clearing: bool = False) -> Reduction:
    """Column reduction visiting columns in ``order``.

    With ``clearing``, each pivot ``(i, j)`` zeroes column ``i`` at once, and
    cleared columns are skipped when their turn comes. The order must visit
    every column after all columns it can be reduced by, which holds for
    left-to-right order and for the dimension-grouped twist order.
    """
    cols = [list(c) for c in M.columns]
    pivots = PivotTable()
    cleared: set[int] = set()
    owners: set[int] = set()
    additions = 0
    for j in (range(M.n) if order is None else order):
        if j in cleared:
            continue
        col = cols[j]
        while col:
            owner = pivots.get(col[-1])
            if owner is None:
                break
            col = add_columns(col, cols[owner])
            additions += 1
        cols[j] = col
        if col:
            i = col[-1]
            pivots[i] = j
            owners.add(j)
            if clearing:
                if i in owners:
                    raise ValueError(f"column {i} owns a pivot and cannot be cleared; "
                                     "clearing needs a boundary matrix with matching dims")
                cols[i] = []
                cleared.add(i)
    return Reduction(cols, pivots, additions, cleared)


def standard_reduce(M: BoundaryMatrix) -> tuple[list[list[int]], PivotTable]:
    """Left-to-right reduction: add the owning column while the low is taken."""
    red = reduce_matrix(M)
    return red.columns, red.pivots


def twist_order(dims: Sequence[int]) -> list[int]:
    """Columns grouped by dimension, highest first, left to right within a group."""
    return sorted(range(len(dims)), key=lambda j: (-dims[j], j))


def twist_reduce(M: BoundaryMatrix) -> PivotTable:
    """Reduction from the highest dimension down with clearing."""
    return reduce_matrix(M, twist_order(M.dims), clearing=True).pivots


def oblivious_reduce(M: BoundaryMatrix) -> PivotTable:
    """Left-to-right reduction adding the unreduced column of each pivot owner.

    Only the pivot table is kept, never the reduced columns. A column stops
    at a low that no combination of earlier columns shares, which is the
    minimal low of its coset, so the pivots equal those of
    :func:`standard_reduce` whenever the loop ends.

    Raises
    ------
    ValueError
        If a column needs more than ``n**2`` additions.
    """
    pivots = PivotTable()
    limit = M.n * M.n
    for j, start in enumerate(M.columns):
        col = list(start)
        steps = 0
        while col:
            owner = pivots.get(col[-1])
            if owner is None:
                break
            col = add_columns(col, M.columns[owner])
            steps += 1
            if steps > limit:
                raise ValueError(f"column {j} does not settle within {limit} additions")
        if col:
            pivots[col[-1]] = j
    return pivots


@dataclass
class ScanMetadata:
    """Result of the left-to-right scan.

    Attributes
    ----------
    left : dict
        Row -> earliest column with a nonzero in that row.
    stable : set
        Columns whose low is the leftmost nonzero of its row, plus zero
        columns. They need no additions.
    pivots : PivotTable
        Pivots of the stable nonzero columns.
    cleared : set
        Columns indexed by a scan pivot row; they reduce to zero.
    """

    left: dict[int, int]
    stable: set[int]
    pivots: PivotTable
    cleared: set[int]

    def unstable(self, n: int) -> list[int]:
        return [j for j in range(n) if j not in self.stable and j not in self.cleared]


def scan_metadata(M: BoundaryMatrix) -> ScanMetadata:
    left: dict[int, int] = {}
    for j, col in enumerate(M.columns):
        for r in col:
            if r not in left:
                left[r] = j
    stable: set[int] = set()
    pivots = PivotTable()
    cleared: set[int] = set()
    for j, col in enumerate(M.columns):
        low = low_of(col)
        if low is None:
            stable.add(j)
        elif left[low] == j:
            stable.add(j)
            pivots[low] = j
            cleared.add(low)
    return ScanMetadata(left, stable, pivots, cleared)


def compressible_rows(M: BoundaryMatrix, meta: ScanMetadata) -> dict[int, bool]:
    """Memoized compressibility of every row met in an unstable column.

    A row is compressible when it indexes a column holding the leftmost
    nonzero of some row (that column must die, so its row never pivots), or
    when it is a scan pivot row whose pivot column has only compressible rows
    above the pivot. Search stops at the first incompressible row, so rows
    absent from the result are treated as incompressible.
    """
    left_cols = set(meta.left.values())
    memo: dict[int, bool] = {}

    def search(rid: int) -> bool:
        if rid in memo:
            return memo[rid]
        if rid in left_cols:
            memo[rid] = True
            return True
        owner = meta.pivots.get(rid)
        result = False
        if owner is not None:
            result = all(search(r) for r in M.columns[owner][:-1])
        memo[rid] = result
        return result

    for j in meta.unstable(M.n):
        for r in M.columns[j]:
            search(r)
    return memo


def compress(M: BoundaryMatrix, meta: ScanMetadata | None = None) -> BoundaryMatrix:
    """Zero cleared columns and compressible entries of unstable columns.

    Each unstable column is walked from its largest row down. A row without a
    pivot is zeroed if compressible. A row whose pivot column lies to the left
    is zeroed if compressible and otherwise eliminated by adding that pivot
    column. Stable columns, and hence every pivot entry, are left untouched.
    """
    if meta is None:
        meta = scan_metadata(M)
    comp = compressible_rows(M, meta)
    cols = [list(c) for c in M.columns]
    for j in meta.cleared:
        cols[j] = []
    for cid in meta.unstable(M.n):
        col = set(cols[cid])
        bound = cid
        while True:
            below = [r for r in col if r < bound]
            if not below:
                break
            rid = max(below)
            bound = rid
            owner = meta.pivots.get(rid)
            if owner is None:
                if comp.get(rid, False):
                    col.discard(rid)
            elif owner < cid:
                if comp.get(rid, False):
                    col.discard(rid)
                else:
                    col ^= set(M.columns[owner])
        cols[cid] = sorted(col)
    return BoundaryMatrix(cols, M.dims)


def anti_transpose(M: BoundaryMatrix) -> BoundaryMatrix:
    """Matrix with entry ``(n-1-j, n-1-i)`` for every entry ``(i, j)`` of ``M``.

    Column ``a`` stands for simplex ``n-1-a``. Its dimension is stored negated
    so that :func:`twist_reduce` visits low simplex dimensions first.
    """
    n = M.n
    cols: list[list[int]] = [[] for _ in range(n)]
    for j, col in enumerate(M.columns):
        for i in col:
            cols[n - 1 - i].append(n - 1 - j)
    for c in cols:
        c.sort()
    return BoundaryMatrix(cols, [-M.dims[n - 1 - a] for a in range(n)])


def anti_transpose_reduce(M: BoundaryMatrix) -> PivotTable:
    """Pivots of ``M`` obtained by reducing its anti-transpose (cohomology)."""
    n = M.n
    out = PivotTable()
    for r, c in twist_reduce(anti_transpose(M)).items():
        out[n - 1 - c] = n - 1 - r
    return out


# text format ------------------------------------------------------------


def read_boundary_matrix(text: str | bytes) -> BoundaryMatrix:
    """Parse ``count`` then one ``dim r1 r2 ...`` line per column."""
    if isinstance(text, bytes):
        text = text.decode()
    lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1)]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputParseError("missing column count")
    k0, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise InputParseError(f"column count {head!r} is not an integer", k0) from None
    if n < 0:
        raise InputParseError("column count must be non-negative", k0)
    body = lines[1:]
    if len(body) != n:
        where = body[-1][0] if body else k0
        raise InputParseError(f"expected {n} column lines, found {len(body)}", where)
    cols, dims = [], []
    for j, (k, ln) in enumerate(body):
        try:
            vals = [int(tok) for tok in ln.replace(",", " ").split()]
        except ValueError:
            raise InputParseError("non-integer token", k) from None
        dim, rows = vals[0], vals[1:]
        if dim < 0:
            raise InputParseError("dimension must be non-negative", k)
        for a, r in enumerate(rows):
            if r < 0 or r >= j:
                raise InputParseError(f"row {r} must lie in [0, {j})", k)
            if a and r <= rows[a - 1]:
                raise InputParseError("rows must be strictly increasing", k)
        cols.append(rows)
        dims.append(dim)
    return BoundaryMatrix(cols, dims)


def write_boundary_matrix(M: BoundaryMatrix) -> str:
    lines = [str(M.n)]
    lines += [" ".join(str(x) for x in (d, *col)) for d, col in zip(M.dims, M.columns)]
    return "\n".join(lines) + "\n"
