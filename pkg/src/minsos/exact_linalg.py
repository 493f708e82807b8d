"""Exact linear algebra over the rationals.

Small dense systems only: the Gram-space constraint systems have at most a
few hundred unknowns, so plain fraction Gauss-Jordan elimination with a
deterministic pivot order is entirely adequate.
"""

from fractions import Fraction


def rref(matrix):
    """Reduced row echelon form in place semantics (returns a copy).

    Returns (rows, pivot_cols).  Pivoting picks the first row with a nonzero
    entry in the current column, so the output is deterministic.
    """
    rows = [list(map(Fraction, row)) for row in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for rr in range(r, nrows):
            if rows[rr][c] != 0:
                pivot_row = rr
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for rr in range(nrows):
            if rr != r and rows[rr][c] != 0:
                factor = rows[rr][c]
                rows[rr] = [v - factor * p for v, p in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def solve_affine(matrix, rhs):
    """Solve A u = b exactly over the rationals.

    Returns (particular, basis) where particular sets all free variables to
    zero and basis has one nullspace vector per free variable (that variable
    set to 1).  Raises ValueError when the system is inconsistent.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    pivot_set = set(pivots)
    if ncols in pivot_set:
        raise ValueError("inconsistent linear system")
    particular = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        particular[c] = rows[r][ncols]
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][fc]
        basis.append(vec)
    return particular, basis
