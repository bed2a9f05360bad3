"""Dense exact linear algebra over a FieldSpec, for small matrices.

Only what the rank computations at rational points need: Gaussian
elimination with first-nonzero pivoting, reporting which original rows and
columns carry pivots.
"""

from __future__ import annotations


def rank_and_pivots(matrix, field):
    """(rank, pivot_rows, pivot_cols) of a list-of-rows matrix.

    Columns are scanned left to right; the pivot for a column is the first
    remaining row with a nonzero entry, so the output is deterministic.
    pivot_rows holds original row indices in the order the pivots were
    found; pivot_cols is ascending by construction.
    """
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    tags = list(range(nrows))
    pivot_rows = []
    pivot_cols = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        tags[r], tags[pivot] = tags[pivot], tags[r]
        pivot_rows.append(tags[r])
        pivot_cols.append(col)
        inv = field.inv(rows[r][col])
        for i in range(r + 1, nrows):
            factor = rows[i][col]
            if not factor:
                continue
            scale = field.mul(factor, inv)
            for j in range(col, ncols):
                rows[i][j] = field.sub(rows[i][j], field.mul(scale, rows[r][j]))
        r += 1
        if r == nrows:
            break
    return r, pivot_rows, pivot_cols
