"""Pure-Python integer linear algebra kernels.

Every geometric predicate in the package reduces to exact computations on
integer matrices (rational inputs are scaled by a common denominator
first).  These routines are the hot loop; a Cython twin with the same
signatures lives in ``_intcore_cy.pyx`` and is preferred at import time
when available.  Entries are Python ints and may grow without bound, so
all arithmetic stays in objects; the compiled twin only removes
interpreter overhead.
"""


def det_int(rows):
    """Exact determinant of a square integer matrix (list of rows)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    # Bareiss fraction-free elimination; exact divisions only.
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def sign_det_int(rows):
    """Sign (-1/0/+1) of ``det_int(rows)``."""
    d = det_int(rows)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def echelon_int(rows, ncols):
    """Fraction-free row echelon pass.

    Returns ``(rank, pivot_rows, pivot_cols)`` where the pivot row/column
    index lists identify an independent row subset and the column subset
    on which those rows stay independent (used for coordinate charts).
    """
    a = [list(r) for r in rows]
    order = list(range(len(rows)))
    rank = 0
    pivot_rows = []
    pivot_cols = []
    prev = 1
    for col in range(ncols):
        pivot = -1
        for i in range(rank, len(a)):
            if a[i][col] != 0:
                pivot = i
                break
        if pivot < 0:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        order[rank], order[pivot] = order[pivot], order[rank]
        pivot_rows.append(order[rank])
        pivot_cols.append(col)
        pv = a[rank][col]
        row_r = a[rank]
        for i in range(rank + 1, len(a)):
            # The Bareiss update must hit every row (even with a zero
            # leading entry) or the exact-division invariant breaks.
            aic = a[i][col]
            row_i = a[i]
            for j in range(col, ncols):
                row_i[j] = (row_i[j] * pv - aic * row_r[j]) // prev
        prev = pv
        rank += 1
        if rank == len(a):
            break
    return rank, pivot_rows, pivot_cols


def rank_int(rows, ncols):
    """Rank of an integer matrix."""
    return echelon_int(rows, ncols)[0]


def minor_vector_int(rows):
    """Signed maximal minors of a d x (d+1) integer matrix.

    Returns the vector ``v`` with ``v[j] = (-1)**j * det(columns != j)``;
    ``v`` spans the orthogonal complement of the row space when the rows
    are independent (the generalized cross product).
    """
    d = len(rows)
    n = d + 1
    out = []
    sign = 1
    for j in range(n):
        sub = [[row[c] for c in range(n) if c != j] for row in rows]
        out.append(sign * det_int(sub))
        sign = -sign
    return out


def solve_int(a_rows, b):
    """Solve ``A x = b`` exactly for square integer ``A``.

    Returns ``(nums, den)`` with ``x_i = nums[i] / den`` (den = det A,
    possibly negative), or ``None`` when ``A`` is singular.  Cramer's
    rule on Bareiss determinants; system sizes here never exceed the
    ambient dimension plus one.
    """
    n = len(a_rows)
    d = det_int(a_rows)
    if d == 0:
        return None
    nums = []
    for j in range(n):
        cols = [[a_rows[i][c] if c != j else b[i] for c in range(n)] for i in range(n)]
        nums.append(det_int(cols))
    return nums, d
