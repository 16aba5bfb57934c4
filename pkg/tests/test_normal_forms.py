import random

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cyclodescent.normal_forms import from_columns, integer_kernel, lattice_basis, matmul, smith_normal_form, solve_integer


def _random_matrix(rng, rows, cols, bound=30):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def test_smith_form_matches_sympy_and_transforms():
    rng = random.Random(7)
    for _ in range(150):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        A = _random_matrix(rng, rows, cols)
        S = smith_normal_form(A)
        assert matmul(matmul(S.U, A), S.V) == S.D
        assert matmul(S.U, S.Uinv) == [[int(i == j) for j in range(rows)] for i in range(rows)]
        assert matmul(S.V, S.Vinv) == [[int(i == j) for j in range(cols)] for i in range(cols)]
        ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
        ours = [abs(S.D[i][i]) for i in range(min(rows, cols))]
        theirs = [abs(int(ref[i, i])) for i in range(min(rows, cols))]
        assert ours == theirs
        for a, b in zip(ours, ours[1:]):
            assert b == 0 or (a and b % a == 0)


def test_integer_kernel():
    rng = random.Random(8)
    for _ in range(100):
        rows, cols = rng.randint(1, 4), rng.randint(1, 5)
        A = _random_matrix(rng, rows, cols, 9)
        K = integer_kernel(A, cols)
        for v in K:
            assert all(sum(A[i][j] * v[j] for j in range(cols)) == 0 for i in range(rows))
        rank = sympy.Matrix(A).rank()
        assert len(K) == cols - rank


def test_lattice_basis_and_solve():
    gens = [[2, 0], [0, 3], [4, 6]]
    W = from_columns(lattice_basis(gens, 2), 2)
    for g in gens:
        assert solve_integer(W, g) is not None
    assert solve_integer(W, [1, 0]) is None
