"""GF(2) linear algebra on int bitsets, with an optional compiled core.

Rows and vectors are Python ints used as bitsets (bit ``i`` = column
``i``).  Elimination is fully deterministic: pivots are searched in
increasing column order and the first available row wins, so both the
pure and the compiled path produce identical reduced forms.

The compiled kernel (``legsurg._gf2core``) is selected at import time
when present; ``HAVE_COMPILED`` records the outcome.  All public
functions give bit-identical results on either path.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

try:  # pragma: no cover - exercised only when the extension is built
    from . import _gf2core

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover
    _gf2core = None
    HAVE_COMPILED = False


def _row_reduce_pure(rows: List[int], n_pivot_cols: int) -> List[int]:
    """In-place full row reduction; returns the pivot column list.

    Only columns ``< n_pivot_cols`` are eligible as pivots; rows may
    carry extra tag bits above that limit which are XORed along.
    """
    pivots: List[int] = []
    r = 0
    m = len(rows)
    for col in range(n_pivot_cols):
        bit = 1 << col
        pivot = -1
        for k in range(r, m):
            if rows[k] & bit:
                pivot = k
                break
        if pivot < 0:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        piv_row = rows[r]
        for k in range(m):
            if k != r and rows[k] & bit:
                rows[k] ^= piv_row
        pivots.append(col)
        r += 1
        if r == m:
            break
    return pivots


def _pack(rows: Sequence[int], width: int):
    import numpy as np

    words = (width + 63) // 64
    mat = np.zeros((len(rows), words), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, row in enumerate(rows):
        w = 0
        while row:
            mat[i, w] = row & mask
            row >>= 64
            w += 1
    return mat


def _unpack(mat) -> List[int]:
    out = []
    for i in range(mat.shape[0]):
        row = 0
        for w in range(mat.shape[1] - 1, -1, -1):
            row = (row << 64) | int(mat[i, w])
        out.append(row)
    return out


def row_reduce(
    rows: Sequence[int], width: int, n_pivot_cols: Optional[int] = None
) -> Tuple[List[int], List[int]]:
    """Return ``(reduced_rows, pivot_cols)`` for the given bitset rows.

    ``width`` is the total bit width of the rows (including any tag
    bits); pivots are restricted to the first ``n_pivot_cols`` columns
    (default: all of ``width``).
    """
    if n_pivot_cols is None:
        n_pivot_cols = width
    work = list(rows)
    if HAVE_COMPILED and work and width > 0:
        mat = _pack(work, width)
        pivots = _gf2core.row_reduce_packed(mat, n_pivot_cols)
        return _unpack(mat), list(pivots)
    pivots = _row_reduce_pure(work, n_pivot_cols)
    return work, pivots


def rank(rows: Sequence[int], width: int) -> int:
    """GF(2) rank of the row set."""
    _, pivots = row_reduce(rows, width)
    return len(pivots)


def solve_columns(
    columns: Sequence[int], targets: Sequence[int], nrows: int
) -> List[Optional[int]]:
    """Express each target in the span of ``columns``.

    ``columns[j]`` and each target are ``nrows``-bit column vectors.
    Returns, per target, a bitmask over column indices whose XOR equals
    the target, or None when the target is outside the span.  The
    witness is the one produced by deterministic elimination in the
    given column order.
    """
    ncols = len(columns)
    aug = [col | (1 << (nrows + j)) for j, col in enumerate(columns)]
    reduced, pivots = row_reduce(aug, nrows + ncols, n_pivot_cols=nrows)
    tag_mask = ((1 << ncols) - 1) << nrows
    out: List[Optional[int]] = []
    for t in targets:
        acc = t
        combo = 0
        for r, col in enumerate(pivots):
            if acc & (1 << col):
                acc ^= reduced[r] & ~tag_mask
                combo ^= reduced[r] >> nrows
        out.append(combo if acc == 0 else None)
    return out


class SpanBasis:
    """Incremental reduced basis with combination tracking.

    ``insert`` returns None when the vector enlarges the span, else the
    dependency mask over previously inserted vector indices (the new
    vector equals the XOR of those).  Uses lowest-set-bit pivots, which
    keeps insertion order deterministic.
    """

    def __init__(self) -> None:
        self._pivot: dict[int, Tuple[int, int]] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self._pivot)

    def reduce(self, vec: int) -> Tuple[int, int]:
        """Reduce ``vec`` against the basis; returns (residual, combo)."""
        combo = 0
        while vec:
            low = vec & -vec
            entry = self._pivot.get(low)
            if entry is None:
                return vec, combo
            vec ^= entry[0]
            combo ^= entry[1]
        return 0, combo

    def insert(self, vec: int) -> Optional[int]:
        idx = self._count
        self._count += 1
        residual, combo = self.reduce(vec)
        if residual == 0:
            return combo
        self._pivot[residual & -residual] = (residual, combo | (1 << idx))
        return None

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0

    def vectors(self) -> List[int]:
        """Reduced basis vectors in increasing pivot order."""
        return [self._pivot[p][0] for p in sorted(self._pivot)]

    def coords(self, vec: int) -> Optional[int]:
        """Combination mask expressing ``vec``, or None if outside."""
        residual, combo = self.reduce(vec)
        return combo if residual == 0 else None
