"""Exact linear algebra over the integers.

Small, self-contained routines on nested lists of Python ints (arbitrary
precision).  Matrix sizes in this package are tiny (d <= ~25), so the
classical Euclidean algorithms below are more than fast enough and carry
no overflow risk.
"""

from fractions import Fraction
from math import gcd


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError("matmul: inner dimensions differ")
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def vector_gcd(values):
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g


def row_hermite_form(m):
    """Canonical row-style Hermite normal form, zero rows dropped.

    Pivots are positive, entries above each pivot are reduced into
    ``[0, pivot)``.  Two integer matrices have the same row lattice
    iff their forms are identical, which is how lattice equality is
    decided throughout the package.
    """
    a = [list(row) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    piv = 0
    for col in range(ncols):
        if piv >= nrows:
            break
        while True:
            nz = [i for i in range(piv, nrows) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][col]), i))
            a[piv], a[i0] = a[i0], a[piv]
            clean = True
            for i in range(piv + 1, nrows):
                if a[i][col] != 0:
                    q = a[i][col] // a[piv][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[piv])]
                    if a[i][col] != 0:
                        clean = False
            if clean:
                break
        if piv < nrows and a[piv][col] != 0:
            if a[piv][col] < 0:
                a[piv] = [-x for x in a[piv]]
            for i in range(piv):
                q = a[i][col] // a[piv][col]
                if q != 0:
                    a[i] = [x - q * y for x, y in zip(a[i], a[piv])]
            piv += 1
    return [row for row in a[:piv]]


def column_lattice_form(m):
    """Canonical form of the lattice spanned by the columns of ``m``."""
    transpose = [list(col) for col in zip(*m)] if m and m[0] else []
    h = row_hermite_form(transpose)
    return h


def smith_decomposition(m):
    """Smith decomposition ``(u, s, v)`` with ``s = u @ m @ v``.

    ``u`` and ``v`` are unimodular; ``s`` is diagonal with nonnegative
    entries satisfying the divisibility chain d1 | d2 | ...  Pivoting is
    by smallest absolute value, ties broken row-major, so the result is
    deterministic for a given input.
    """
    a = [list(row) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = identity(nrows)
    v = identity(ncols)

    def row_op(i, j, q):
        # R_i -= q * R_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):
        # C_i -= q * C_j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def diagonalize_from(start):
        for t in range(start, min(nrows, ncols)):
            while True:
                entries = [(abs(a[i][j]), i, j)
                           for i in range(t, nrows)
                           for j in range(t, ncols) if a[i][j] != 0]
                if not entries:
                    return
                _, pi, pj = min(entries)
                if pi != t:
                    swap_rows(t, pi)
                if pj != t:
                    swap_cols(t, pj)
                dirty = False
                for i in range(t + 1, nrows):
                    if a[i][t] != 0:
                        row_op(i, t, a[i][t] // a[t][t])
                        dirty = dirty or a[i][t] != 0
                for j in range(t + 1, ncols):
                    if a[t][j] != 0:
                        col_op(j, t, a[t][j] // a[t][t])
                        dirty = dirty or a[t][j] != 0
                if not dirty:
                    break

    diagonalize_from(0)
    # Enforce the divisibility chain: a violating pair is coupled back
    # into one column and the tail is rediagonalized.
    t = 0
    while t < min(nrows, ncols) - 1:
        d0, d1 = a[t][t], a[t + 1][t + 1]
        if d0 != 0 and d1 % d0 != 0:
            col_op(t, t + 1, -1)
            diagonalize_from(t)
            t = 0
            continue
        t += 1
    for t in range(min(nrows, ncols)):
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def smith_diagonal(m):
    _, s, _ = smith_decomposition(m)
    return [s[t][t] for t in range(min(len(s), len(s[0]) if s else 0))]


def fraction_inverse(m):
    """Exact inverse and determinant of a square integer matrix.

    Returns ``(inv, det)`` where ``inv`` is a matrix of Fractions, or
    ``(None, 0)`` when the matrix is singular.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None, 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv_piv = 1 / a[col][col]
        a[col] = [x * inv_piv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a], det
