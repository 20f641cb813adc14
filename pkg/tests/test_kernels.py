"""Kernel-level tests: SNF diagonal and column echelon, all three paths."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import capkit.kernels as K
from capkit.kernels import (column_echelon, echelon_exact, smith_exact,
                            snf_diagonal)


def det_exact(rows):
    """Fraction-free determinant (Bareiss) for small matrices."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for t in range(n):
        if a[t][t] == 0:
            for i in range(t + 1, n):
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def mat_strategy(max_dim=6, max_entry=30):
    dim = st.integers(1, max_dim)
    return dim.flatmap(lambda r: dim.flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-max_entry, max_entry),
                     min_size=c, max_size=c),
            min_size=r, max_size=r)))


class TestSmithExact:
    def test_known_diagonal(self):
        diag, _, _ = smith_exact([[2, 4], [6, 8]])
        assert diag == [2, 4]

    def test_zero_matrix(self):
        diag, _, _ = smith_exact([[0, 0], [0, 0]])
        assert diag == [0, 0]

    def test_transforms_reconstruct(self):
        a = [[6, 4, 2], [4, 8, 0]]
        diag, u, v = smith_exact(a, transforms=True)
        ua = np.array(u, dtype=object) @ np.array(a, dtype=object)
        uav = ua @ np.array(v, dtype=object)
        d = np.zeros((2, 3), dtype=object)
        for i, x in enumerate(diag):
            d[i, i] = x
        assert (uav == d).all()
        assert abs(det_exact(u)) == 1
        assert abs(det_exact(v)) == 1

    @settings(max_examples=150, deadline=None)
    @given(mat_strategy())
    def test_random_divisibility_and_reconstruction(self, rows):
        diag, u, v = smith_exact(rows, transforms=True)
        nz = [d for d in diag if d]
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0
        assert all(d >= 0 for d in diag)
        assert diag == sorted(diag, key=lambda d: (d == 0, d))
        prod = (np.array(u, dtype=object)
                @ np.array(rows, dtype=object)
                @ np.array(v, dtype=object))
        for i in range(len(rows)):
            for j in range(len(rows[0])):
                assert prod[i][j] == (diag[i] if i == j and i < len(diag)
                                      else 0)


class TestBackendAgreement:
    @pytest.fixture(params=["numba", "numpy"])
    def backend(self, request, monkeypatch):
        monkeypatch.setattr(K, "_backend", request.param)
        return request.param

    @settings(max_examples=60, deadline=None)
    @given(mat_strategy(max_dim=8, max_entry=40))
    def test_snf_matches_exact(self, rows):
        exact = smith_exact(rows)[0]
        for backend in ("numba", "numpy"):
            old = K._backend
            try:
                K._backend = backend
                big = [[x for x in row] * 4 for row in rows] * 4  # > 64 cells
                assert snf_diagonal(big) == smith_exact(big)[0]
            finally:
                K._backend = old
        assert snf_diagonal(rows) == exact

    def test_dispatch_uses_fast_path(self, backend):
        rng = np.random.default_rng(7)
        a = rng.integers(-9, 10, size=(12, 12)).tolist()
        assert snf_diagonal(a) == smith_exact(a)[0]
        e_fast = column_echelon(a, transforms=True)
        h, piv, v, vinv = echelon_exact(a, transforms=True)
        assert e_fast.h == h
        assert e_fast.pivot_rows == piv
        assert e_fast.v == v
        assert e_fast.vinv == vinv


class TestEchelon:
    def test_pivot_structure(self):
        e = column_echelon([[2, 4], [6, 8]], transforms=True)
        assert e.rank == 2
        assert e.pivot_rows == [0, 1]
        # pivots positive; pivot rows zero to the right of their pivot
        for k, r in enumerate(e.pivot_rows):
            assert e.h[r][k] > 0
            assert all(e.h[r][j] == 0 for j in range(k + 1, len(e.h[0])))

    @settings(max_examples=100, deadline=None)
    @given(mat_strategy())
    def test_transforms_consistent(self, rows):
        r, c = len(rows), len(rows[0])
        e = column_echelon(rows, transforms=True)
        a = np.array(rows, dtype=object)
        v = np.array(e.v, dtype=object)
        vinv = np.array(e.vinv, dtype=object)
        assert (a @ v == np.array(e.h, dtype=object)).all()
        assert (v @ vinv == np.eye(c, dtype=object)).all()
        assert abs(det_exact(e.v)) == 1
        # non-pivot columns of H vanish
        h = np.array(e.h, dtype=object)
        assert not h[:, e.rank:].any()

    def test_empty_matrix_transforms(self):
        e = column_echelon([[] for _ in range(3)], transforms=True)
        assert e.rank == 0 and e.v == [] and e.vinv == []
        e2 = column_echelon([], transforms=True)
        assert e2.rank == 0

    def test_rank_deficient(self):
        e = column_echelon([[1, 2, 3], [2, 4, 6]], transforms=True)
        assert e.rank == 1


def test_backend_name_is_known():
    assert K.backend_name() in ("numba", "numpy")
