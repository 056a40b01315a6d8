# cython: language_level=3
"""Compiled twin of ``_intcore_py``.

Same algorithms, same signatures.  Matrix entries stay Python ints
(coordinate bit-length is unbounded under repeated refinement), so the
win over the pure module is loop and indexing overhead, not arithmetic.
The benchmark in ``benchmarks/bench_kernel.py`` compares the two.
"""


def det_int(rows):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, k
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        r0 = rows[0]
        r1 = rows[1]
        return r0[0] * r1[1] - r0[1] * r1[0]
    if n == 3:
        r0 = rows[0]
        r1 = rows[1]
        r2 = rows[2]
        return (r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
                - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
                + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]))
    cdef list a = [list(r) for r in rows]
    cdef int sign = 1
    prev = 1
    cdef list row_i, row_k
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
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def sign_det_int(rows):
    d = det_int(rows)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def echelon_int(rows, ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t ncol = ncols
    cdef list a = [list(r) for r in rows]
    cdef list order = list(range(nrows))
    cdef Py_ssize_t rank = 0
    cdef list pivot_rows = []
    cdef list pivot_cols = []
    cdef Py_ssize_t col, i, j, pivot
    cdef list row_i, row_r
    prev = 1
    for col in range(ncol):
        pivot = -1
        for i in range(rank, nrows):
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
        for i in range(rank + 1, nrows):
            # The Bareiss update must hit every row (even with a zero
            # leading entry) or the exact-division invariant breaks.
            row_i = a[i]
            aic = row_i[col]
            for j in range(col, ncol):
                row_i[j] = (row_i[j] * pv - aic * row_r[j]) // prev
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank, pivot_rows, pivot_cols


def rank_int(rows, ncols):
    return echelon_int(rows, ncols)[0]


def minor_vector_int(rows):
    cdef Py_ssize_t d = len(rows)
    cdef Py_ssize_t n = d + 1
    cdef Py_ssize_t j, c
    cdef list out = []
    cdef int sign = 1
    cdef list sub
    for j in range(n):
        sub = [[row[c] for c in range(n) if c != j] for row in rows]
        out.append(sign * det_int(sub))
        sign = -sign
    return out


def solve_int(a_rows, b):
    cdef Py_ssize_t n = len(a_rows)
    cdef Py_ssize_t i, c, j
    d = det_int(a_rows)
    if d == 0:
        return None
    cdef list nums = []
    cdef list cols
    for j in range(n):
        cols = [[a_rows[i][c] if c != j else b[i] for c in range(n)] for i in range(n)]
        nums.append(det_int(cols))
    return nums, d
