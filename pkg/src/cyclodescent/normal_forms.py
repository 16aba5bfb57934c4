"""Integer Smith normal form with transforms, and lattice helpers built on it.

Matrices are lists of rows of Python ints.  Everything is exact; the sizes in
this package are small (a few dozen rows at most), so no attention is paid to
coefficient growth beyond picking the smallest available pivot.
"""

from __future__ import annotations

from dataclasses import dataclass


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, rows=None):
    if not A:
        return [[] for _ in range(rows or 0)]
    return [list(col) for col in zip(*A)]


def column(A, j):
    return [row[j] for row in A]


def from_columns(cols, rows):
    return [[c[i] for c in cols] for i in range(rows)]


@dataclass
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal, ``d_1 | d_2 | ...`` and all ``d_i >= 0``."""

    D: list
    U: list
    Uinv: list
    V: list
    Vinv: list
    diag: list  # nonzero invariant factors, in order

    @property
    def rank(self):
        return len(self.diag)


def smith_normal_form(A) -> SmithForm:
    m = len(A)
    n = len(A[0]) if m else 0
    A = [list(map(int, row)) for row in A]
    U, Uinv, V, Vinv = identity(m), identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
            for row in Uinv:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        if abs(A[i][t]) < abs(A[t][t]):
                            swap_rows(t, i)
                        moved = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        if abs(A[t][j]) < abs(A[t][t]):
                            swap_cols(t, j)
                        moved = True
            if moved:
                continue
            piv = A[t][t]
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for row in Uinv:
                row[t] = -row[t]
        diag.append(A[t][t])
    return SmithForm(A, U, Uinv, V, Vinv, diag)


def integer_kernel(A, n_cols: int) -> list[list[int]]:
    """Basis (as column vectors) of ``{x in Z^n : A x = 0}``."""
    if not A:
        return [[int(i == j) for i in range(n_cols)] for j in range(n_cols)]
    snf = smith_normal_form(A)
    return [column(snf.V, j) for j in range(snf.rank, n_cols)]


def lattice_basis(gens: list[list[int]], dim: int) -> list[list[int]]:
    """A basis (columns) of the lattice spanned by ``gens``; must have full rank."""
    G = from_columns(gens, dim)
    snf = smith_normal_form(G)
    if snf.rank != dim:
        raise ValueError("generators do not span a full-rank lattice")
    return [[snf.Uinv[i][k] * snf.diag[k] for i in range(dim)] for k in range(dim)]


def solve_integer(W, x):
    """Solve ``W y = x`` over Z for square nonsingular ``W``; None if no integer solution."""
    snf = smith_normal_form(W)
    if snf.rank != len(W):
        raise ValueError("matrix is singular")
    ux = matvec(snf.U, x)
    z = []
    for a, d in zip(ux, snf.diag):
        if a % d:
            return None
        z.append(a // d)
    return matvec(snf.V, z)
