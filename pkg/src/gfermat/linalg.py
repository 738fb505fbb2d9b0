"""Small exact linear algebra over FieldElement matrices (lists of rows)."""

from __future__ import annotations

from .errors import ValidationError


def identity(F, n):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def matmul(A, B):
    F = A[0][0].field
    cols = len(B[0])
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = F.zero
            for a, brow in zip(row, B):
                if a:
                    b = brow[j]
                    if b:
                        acc = acc + a * b
            new.append(acc)
        out.append(new)
    return out


def matvec(A, v):
    F = A[0][0].field
    out = []
    for row in A:
        acc = F.zero
        for a, x in zip(row, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def row_echelon(rows):
    """Reduced row echelon form by increasing column; returns (rref, pivot_columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(rows) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows, ncols, F):
    """Basis of {v : rows . v = 0}."""
    if not rows:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [F.zero] * ncols
        v[fcol] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fcol]
        basis.append(v)
    return basis


def inverse(A):
    n = len(A)
    F = A[0][0].field
    aug = [list(row) + e for row, e in zip(A, identity(F, n))]
    R, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ValidationError("matrix is singular")
    return [row[n:] for row in R]


def is_invertible(A) -> bool:
    return rank(A) == len(A)


def solve_2x2(a, b, c, d, e, f):
    """Solve [[a, b], [c, d]] (x, y) = (e, f)."""
    det = a * d - b * c
    if det.is_zero():
        raise ValidationError("singular 2x2 system")
    return (e * d - b * f) / det, (a * f - e * c) / det


def matrix_to_json(A):
    return [[x.to_json() for x in row] for row in A]


def matrix_from_json(F, data):
    return [[F(x) for x in row] for row in data]
