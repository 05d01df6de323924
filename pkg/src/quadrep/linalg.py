"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists (or tuples) of rows of Python ints / Fractions.
Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def det_bareiss(m) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
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
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(m) -> list[int]:
    """[M_0, M_1, ..., M_k] with M_0 = 1 and M_i the i-th leading principal minor."""
    n = len(m)
    return [1] + [det_bareiss([row[:i] for row in m[:i]]) for i in range(1, n + 1)]


def inverse_fraction(m) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def adjugate(m) -> list[list[int]]:
    """adj(m) = det(m) * m^{-1}, computed exactly."""
    d = det_bareiss(m)
    inv = inverse_fraction(m)
    out = []
    for row in inv:
        r = []
        for x in row:
            y = x * d
            assert y.denominator == 1
            r.append(int(y))
        out.append(r)
    return out


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def rank_fraction(rows) -> int:
    """Rank of a list of integer/rational row vectors."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    rank = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, len(a)):
            if a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def integer_kernel_of_row(v) -> list[list[int]]:
    """Basis (as rows) of {x in Z^d : <v, x> = 0} via unimodular column operations."""
    d = len(v)
    r = list(v)
    u = [[int(i == j) for j in range(d)] for i in range(d)]  # columns of u track the transform

    def colop(dst, src, f):
        # column dst -= f * column src, applied to r and u
        r[dst] -= f * r[src]
        for row in u:
            row[dst] -= f * row[src]

    while sum(1 for x in r if x != 0) > 1:
        piv = min((i for i in range(d) if r[i] != 0), key=lambda i: (abs(r[i]), i))
        for j in range(d):
            if j != piv and r[j] != 0:
                colop(j, piv, r[j] // r[piv])
    j0 = next(i for i in range(d) if r[i] != 0)
    return [[u[i][j] for i in range(d)] for j in range(d) if j != j0]


def hermite_normal_form(rows) -> list[list[int]]:
    """Row-style HNF of a full-row-rank integer matrix.

    Upper echelon form with positive pivots and the entries above each pivot
    reduced into [0, pivot).  Unique for the row lattice.
    """
    a = [list(r) for r in rows]
    m = len(a)
    ncols = len(a[0]) if a else 0
    prow = 0
    pivots = []
    for c in range(ncols):
        if prow == m:
            break
        # euclid down the column until one row carries the gcd
        while True:
            nz = [i for i in range(prow, m) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[prow], a[i0] = a[i0], a[prow]
            done = True
            for i in range(prow + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[prow][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[prow])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[prow][c] == 0:
            continue
        if a[prow][c] < 0:
            a[prow] = [-x for x in a[prow]]
        pivots.append((prow, c))
        prow += 1
    for r, c in pivots:
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
    return a


def solve_in_basis(basis_rows, x):
    """Rational coordinates y with sum y_i basis_i = x, or None if x is outside the span."""
    b = [[Fraction(v) for v in row] for row in basis_rows]
    k = len(b)
    d = len(x)
    # solve B^T y = x by elimination on the augmented d x (k+1) system
    aug = [[b[j][i] for j in range(k)] + [Fraction(x[i])] for i in range(d)]
    row = 0
    where = [-1] * k
    for c in range(k):
        piv = next((r for r in range(row, d) if aug[r][c] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(d):
            if r != row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[row])]
        where[c] = row
        row += 1
    for r in range(row, d):
        if aug[r][k] != 0:
            return None
    return [aug[where[c]][k] if where[c] >= 0 else Fraction(0) for c in range(k)]
