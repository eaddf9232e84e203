from hypothesis import given
from hypothesis import strategies as st

from equihom.linalg import homology, homology_ranks, invariant_factors, matmul, rank, smith

small = st.integers(-4, 4)


def matrices(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_transforms(m, n, data):
    A = data.draw(matrices(m, n))
    S = smith(A, m, n)
    D = matmul(matmul(S.U, A), S.V)
    for i in range(m):
        for j in range(n):
            want = S.diag[i] if (i == j and i < S.rank) else 0
            assert D[i][j] == want
    for a, b in zip(S.diag, S.diag[1:]):
        assert b % a == 0
    I = matmul(S.U, S.Uinv)
    assert I == [[int(i == j) for j in range(m)] for i in range(m)]


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_over_f2_matches_smith(m, n, data):
    A = data.draw(matrices(m, n))
    assert rank(A, m, n, 2) == smith(A, m, n, 2).rank
    assert rank(A, m, n) == smith(A, m, n).rank


def test_circle_and_rp2():
    # RP^2 cellular chains: Z <-0- Z <-2- Z
    d1, d2 = [[0]], [[2]]
    H1 = homology(d1, d2, 1, 1, 1)
    assert H1.rank == 0 and H1.torsion == (2,)
    assert homology_ranks(d1, d2, 1, 1, 1) == (0, (2,))
    assert homology_ranks(d1, d2, 1, 1, 1, 2) == (1, ())
    assert invariant_factors([[2, 0], [0, 3]], 2, 2) == [1, 6]


def test_homology_coordinates():
    # C_1 = Z^2 -> C_0 = Z by (1, -1); nothing above: H_1 = Z generated by (1, 1)
    H = homology([[1, -1]], [], 1, 2, 0)
    assert H.rank == 1
    assert H.coords([2, 2]) in ((2,), (-2,))
