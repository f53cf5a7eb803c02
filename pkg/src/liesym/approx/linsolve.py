"""Exact rational linear algebra: Gauss-Jordan reduction, nullspace,
particular solutions, and forced-zero detection.

Pivoting picks the largest-magnitude entry of the working submatrix,
breaking ties by lowest column then lowest row index, so reductions are
deterministic run to run.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LinearSolution:
    """Affine solution set {particular + span(basis)} of A x = b.

    `particular` is None when the system is inconsistent.  `forced_zero[j]`
    is True when x_j = 0 across the whole solution set.
    """

    ncols: int
    pivots: tuple[int, ...]
    particular: tuple[Fraction, ...] | None
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def nullity(self) -> int:
        return len(self.basis)

    def forced_zero(self) -> tuple[bool, ...]:
        if self.particular is None:
            return (False,) * self.ncols
        out = []
        for j in range(self.ncols):
            zero = self.particular[j] == 0 and all(v[j] == 0 for v in self.basis)
            out.append(zero)
        return tuple(out)


def _dedupe(rows, rhs):
    seen = set()
    out_rows, out_rhs = [], []
    for row, b in zip(rows, rhs):
        if not any(row) and b == 0:
            continue
        key = (tuple(row), b)
        if key in seen:
            continue
        seen.add(key)
        out_rows.append(list(row))
        out_rhs.append(b)
    return out_rows, out_rhs


def reduced_row_echelon(rows, rhs):
    """In-place Gauss-Jordan on [rows | rhs]; returns pivot column list."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    used_cols = set()
    while r < nrows:
        best = None
        for j in range(ncols):
            if j in used_cols:
                continue
            for i in range(r, nrows):
                v = rows[i][j]
                if v == 0:
                    continue
                mag = abs(v)
                if best is None or mag > best[0]:
                    best = (mag, j, i)
        if best is None:
            break
        _, pc, pr = best
        rows[r], rows[pr] = rows[pr], rows[r]
        rhs[r], rhs[pr] = rhs[pr], rhs[r]
        pv = rows[r][pc]
        if pv != 1:
            rows[r] = [v / pv for v in rows[r]]
            rhs[r] = rhs[r] / pv
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][pc]
            if f == 0:
                continue
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            rhs[i] = rhs[i] - f * rhs[r]
        used_cols.add(pc)
        pivots.append(pc)
        r += 1
    return pivots


def solve(rows, rhs=None) -> LinearSolution:
    """Solve A x = b exactly over the rationals.

    `rows` is a sequence of coefficient sequences; `rhs` defaults to the
    zero vector.  Duplicate and zero rows are discarded up front.
    """
    rows = [list(map(Fraction, row)) for row in rows]
    ncols = len(rows[0]) if rows else 0
    if rhs is None:
        rhs = [Fraction(0)] * len(rows)
    else:
        rhs = [Fraction(v) for v in rhs]
    if len(rhs) != len(rows):
        raise ValueError("rhs length mismatch")
    rows, rhs = _dedupe(rows, rhs)
    if not rows:
        basis = tuple(
            tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)
        )
        return LinearSolution(ncols, (), tuple([Fraction(0)] * ncols), basis)
    if ncols == 0:
        consistent = all(b == 0 for b in rhs)
        return LinearSolution(0, (), () if consistent else None, ())
    pivots = reduced_row_echelon(rows, rhs)
    rank = len(pivots)
    for i in range(rank, len(rows)):
        if rhs[i] != 0:
            return LinearSolution(ncols, tuple(pivots), None, ())
    free_cols = [j for j in range(ncols) if j not in pivots]
    particular = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        particular[pc] = rhs[r]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(tuple(vec))
    return LinearSolution(ncols, tuple(pivots), tuple(particular), tuple(basis))
