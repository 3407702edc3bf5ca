"""Small dense linear algebra over a FieldSpec (rows of int encodings)."""

from __future__ import annotations


def rref(rows, F):
    """Reduced row-echelon form with left-most pivots; returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(v, inv) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, F) -> int:
    return len(rref(rows, F)[1])


def nullspace(rows, ncols, F):
    """Basis of {v : rows . v = 0}, one vector per free column, in column order."""
    red, pivots = rref(rows, F) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def inverse(mat, F):
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def matmul(a, b, F):
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = 0
            for i, x in enumerate(row):
                if x and b[i][j]:
                    acc = F.add(acc, F.mul(x, b[i][j]))
            new.append(acc)
        out.append(new)
    return out


def matvec(a, v, F):
    return [row[0] for row in matmul(a, [[x] for x in v], F)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def solve(rows, rhs, F):
    """One solution of rows . x = rhs, or None."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, F)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    return x


def complete_basis(vectors, n, F):
    """Extend independent ``vectors`` to a basis of F^n with standard vectors, greedily in order."""
    basis = [list(v) for v in vectors]
    for i in range(n):
        if len(basis) == n:
            break
        e = [0] * n
        e[i] = 1
        if rank(basis + [e], F) > len(basis):
            basis.append(e)
    return basis
