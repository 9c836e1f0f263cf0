import random

import pytest
from hypothesis import given, strategies as st

from finspaces.intlinalg import (AbelianGroup, IntMatrix, Subquotient, cokernel, determinant, image_basis,
                                 hermite, invariant_factors, kernel_basis, member_of_subgroup, rank, smith, solve)


@st.composite
def matrices(draw, max_dim=6, lo=-9, hi=9):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    data = [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]
    return IntMatrix(data, r, c)


def test_known_smith_form():
    sd = smith(IntMatrix([[2, 4], [6, 8]]))
    assert sd.diagonal == [2, 4]
    assert (sd.U @ sd.S @ sd.V).tolist() == [[2, 4], [6, 8]]


def test_empty_shapes():
    M = IntMatrix.zeros(0, 3)
    assert kernel_basis(M).shape == (3, 3)
    assert image_basis(M).shape == (0, 0)
    assert cokernel(IntMatrix.zeros(2, 0)) == AbelianGroup(2)


@given(matrices())
def test_smith_identities(M):
    sd = smith(M)
    assert sd.U @ sd.S @ sd.V == M
    assert sd.U @ sd.U_inv == IntMatrix.identity(M.rows)
    assert sd.V @ sd.V_inv == IntMatrix.identity(M.cols)
    d = sd.invariant_factors
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    off = [(i, j) for i in range(M.rows) for j in range(M.cols) if i != j and sd.S[i, j]]
    assert not off


@given(matrices())
def test_sparse_route_matches_dense(M):
    assert invariant_factors(M) == smith(M).invariant_factors


@given(matrices())
def test_kernel_and_image(M):
    K = kernel_basis(M)
    assert (M @ K).is_zero() if K.cols and M.rows else True
    assert K.cols == M.cols - rank(M)
    img = image_basis(M)
    for col in M.columns():
        assert member_of_subgroup(col, img) is not None


@given(matrices(), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_solve_round_trip(M, x):
    x = x[:M.cols]
    b = M.apply(x)
    y = solve(M, b)
    assert y is not None and M.apply(y) == b


def test_solve_reports_no_solution():
    assert solve(IntMatrix([[2]]), [1]) is None


def test_determinant_bareiss():
    assert determinant(IntMatrix([[1, 2], [3, 4]])) == -2
    assert determinant(IntMatrix([[2, 0, 1], [1, 3, 2], [1, 1, 1]])) == 0


@pytest.mark.parametrize("orders,expected", [
    ([2, 3], AbelianGroup(0, (6,))),
    ([2, 4, 0], AbelianGroup(1, (2, 4))),
    ([1, 1], AbelianGroup()),
    ([12, 18], AbelianGroup(0, (6, 36))),
])
def test_canonical_group(orders, expected):
    assert AbelianGroup.from_orders(0, orders) == expected


def test_group_validation_and_text():
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    assert str(AbelianGroup(2, (2,))) == "Z^2 + Z/2"
    assert str(AbelianGroup()) == "0"


def test_subquotient_torsion_coordinates():
    # Z^2 / <(2, 0)> = Z + Z/2
    sq = Subquotient(IntMatrix.identity(2), IntMatrix([[2], [0]]))
    assert sq.group == AbelianGroup(1, (2,))
    assert sq.orders == [0, 2]
    assert sq.coordinates([2, 0]) == [0, 0]
    assert sq.coordinates([1, 0]) is not None
    lattice = Subquotient(IntMatrix([[2], [0]]), IntMatrix.zeros(2, 0))
    assert lattice.coordinates([1, 0]) is None


def test_fuzz_500_small_matrices():
    rng = random.Random(0)
    for _ in range(500):
        r, c = rng.randint(0, 12), rng.randint(0, 12)
        M = IntMatrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)], r, c)
        sd = smith(M)
        assert sd.U @ sd.S @ sd.V == M


def _random_unimodular(rng, n):
    W = IntMatrix.identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = IntMatrix.identity(n)
        E.data[i][j] = rng.randint(-3, 3)
        W = E @ W
    return W


def test_hermite_form():
    rng = random.Random(12)
    for _ in range(150):
        r, c = rng.randint(0, 7), rng.randint(0, 7)
        M = IntMatrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)], r, c)
        hd = hermite(M)
        assert hd.U @ M == hd.H
        assert abs(determinant(hd.U)) == 1
        H = hd.H.tolist()
        assert len(hd.pivots) == rank(M)
        for k, col in enumerate(hd.pivots):
            assert H[k][col] > 0
            assert all(H[k][j] == 0 for j in range(col))
            assert all(0 <= H[i][col] < H[k][col] for i in range(k))
        assert all(not any(row) for row in H[len(hd.pivots):])
        # the form is unique on the row lattice
        assert hermite(_random_unimodular(rng, r) @ M).H == hd.H if r else True


def test_hermite_example():
    hd = hermite(IntMatrix([[2, 4], [6, 8]]))
    assert hd.H.tolist() == [[2, 0], [0, 4]]
