"""Schur multiplier M(G) = H_2(G; Z) via the (normalized) bar resolution.

The complex in low degrees has basis the non-degenerate tuples of
non-identity elements; the differential is

    d_n(g1,...,gn) = (g2,...,gn)
                     + sum_i (-1)^i (g1,...,g_i g_{i+1},...,gn)
                     + (-1)^n (g1,...,g_{n-1})

with tuples containing the identity taken to be zero (normalization).  H_2
is presented in kernel coordinates: a basis of ker d_2 is read off a column
echelon of d_2, and the d_3 columns are re-expressed in that basis exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import EngineUnavailableError, NotCentralError
from .groups import FiniteGroup, Subgroup, GroupHom, quotient
from .kernels import column_echelon
from .zlinalg import (AbHom, FPAbelianGroup, IntMatrix, hom_is_injective)

#: Default cap for the bar engine; d_3 has (|G|-1)^3 columns.
DEFAULT_HOMOLOGY_CAP = 24

_SAFE = 1 << 59


class MultiplierPresentation:
    """H_2(G) presented on a basis of ker d_2.

    ``kernel_basis`` maps kernel coordinates to 2-chains; ``coord_rows``
    (rows of the inverse transform) maps cycles back to kernel coordinates.
    """

    __slots__ = ("group", "h2", "kernel_basis", "coord_rows", "pair_index",
                 "normalized", "elements")

    def __init__(self, group, h2, kernel_basis, coord_rows, pair_index,
                 normalized, elements):
        self.group = group
        self.h2 = h2
        self.kernel_basis = kernel_basis
        self.coord_rows = coord_rows
        self.pair_index = pair_index
        self.normalized = normalized
        self.elements = elements

    def invariant_factors(self):
        return self.h2.invariant_factors()


def _basis_elements(g: FiniteGroup, normalized: bool, element_order=None):
    if element_order is None:
        elems = [i for i in range(g.order) if normalized is False or i != 0]
        if normalized:
            elems = list(range(1, g.order))
        else:
            elems = list(range(g.order))
    else:
        elems = [int(x) for x in element_order]
        expected = set(range(1, g.order)) if normalized else set(range(g.order))
        if set(elems) != expected or len(elems) != len(expected):
            raise ValueError("element_order must enumerate the basis elements")
    return elems


def _pair_index(g: FiniteGroup, elems, normalized):
    """pair_index[a, b] = column of the 2-tuple (a, b), or -1 if degenerate."""
    n = g.order
    idx = -np.ones((n, n), dtype=np.int64)
    col = 0
    for a in elems:
        for b in elems:
            idx[a, b] = col
            col += 1
    return idx, col


def _check_cap(g, cap, force):
    cap = DEFAULT_HOMOLOGY_CAP if cap is None else cap
    if not force and g.order > cap:
        raise EngineUnavailableError(
            f"group order {g.order} exceeds the homology cap {cap}; use the "
            "abelian engine or raise the cap")


def boundary_matrix(g: FiniteGroup, n: int, normalized: bool = True,
                    cap=None, force: bool = False,
                    element_order=None) -> IntMatrix:
    """Matrix of d_n (n = 1, 2 or 3) on the bar basis."""
    _check_cap(g, cap, force)
    d1, d2, d3 = _differentials(g, normalized, element_order)
    if n == 1:
        return IntMatrix(d1.tolist(), d1.shape[1])
    if n == 2:
        return IntMatrix(d2.tolist(), d2.shape[1])
    if n == 3:
        rows, cols, idx, signs = d3
        dense = np.zeros((rows, cols), dtype=np.int64)
        for t in range(idx.shape[0]):
            valid = idx[t] >= 0
            np.add.at(dense, (idx[t][valid], np.nonzero(valid)[0]), signs[t])
        return IntMatrix(dense.tolist(), cols)
    raise ValueError("only degrees 1..3 are materialized")


def _differentials(g: FiniteGroup, normalized, element_order=None):
    """(d1, d2, sparse-d3) on the chosen basis enumeration."""
    elems = _basis_elements(g, normalized, element_order)
    n1 = len(elems)
    pidx, n2 = _pair_index(g, elems, normalized)
    eidx = -np.ones(g.order, dtype=np.int64)
    for c, e in enumerate(elems):
        eidx[e] = c
    if normalized:
        eidx[0] = -1
    t = g.table.astype(np.int64)

    ea = np.repeat(np.array(elems, dtype=np.int64), n1)
    eb = np.tile(np.array(elems, dtype=np.int64), n1)

    # d1[ ] -> C0 = Z (augmentation is zero on the reduced complex); we keep
    # a 0 x n1 matrix so rank bookkeeping stays uniform
    d1 = np.zeros((0, n1), dtype=np.int64)

    # d2(a,b) = [b] - [ab] + [a]
    d2 = np.zeros((n1, n2), dtype=np.int64)
    cols = np.arange(n2)
    for arr, sign in (((eidx[eb]), 1), (eidx[t[ea, eb]], -1), (eidx[ea], 1)):
        valid = arr >= 0
        np.add.at(d2, (arr[valid], cols[valid]), sign)

    # d3(a,b,c) = (b,c) - (ab,c) + (a,bc) - (a,b), as 4 sparse index rows
    base = np.array(elems, dtype=np.int64)
    a3 = np.repeat(base, n1 * n1)
    b3 = np.tile(np.repeat(base, n1), n1)
    c3 = np.tile(base, n1 * n1)
    idx = np.stack([
        pidx[b3, c3],
        pidx[t[a3, b3], c3],
        pidx[a3, t[b3, c3]],
        pidx[a3, b3],
    ])
    signs = np.array([1, -1, 1, -1], dtype=np.int64)
    return d1, d2, (n2, n1 ** 3, idx, signs)


def _gather_matmul(mat, idx, signs):
    """sum_t signs[t] * mat[:, idx[t]] with idx entries of -1 contributing 0."""
    big = int(np.abs(mat).max()) if mat.size else 0
    dtype = np.int64 if 4 * big < _SAFE else object
    out = np.zeros((mat.shape[0], idx.shape[1]), dtype=dtype)
    m = mat if dtype is np.int64 else mat.astype(object)
    for t in range(idx.shape[0]):
        valid = idx[t] >= 0
        out[:, valid] += int(signs[t]) * m[:, idx[t][valid]]
    return out


def schur_multiplier(g: FiniteGroup, cap=None, force: bool = False,
                     normalized: bool = True,
                     element_order=None) -> MultiplierPresentation:
    """H_2(G) = ker d_2 / im d_3 with canonical invariant factors."""
    key = ("schur", normalized, None if element_order is None else tuple(element_order))
    if key in g._cache:
        return g._cache[key]
    _check_cap(g, cap, force)
    _, d2, (n2, c3, idx, signs) = _differentials(g, normalized, element_order)
    ech = column_echelon(d2.tolist(), transforms=True)
    npiv = ech.rank
    v = np.array(ech.v, dtype=object)
    vinv = np.array(ech.vinv, dtype=object)
    if (not v.size or int(np.abs(v).max()) < _SAFE) and \
            (not vinv.size or int(np.abs(vinv).max()) < _SAFE):
        v = v.astype(np.int64) if v.size else np.zeros((n2, n2), np.int64)
        vinv = vinv.astype(np.int64) if vinv.size else np.zeros((n2, n2), np.int64)
    kernel_basis = v[:, npiv:]
    coord_rows = vinv[npiv:, :]
    kd = kernel_basis.shape[1]

    # sanity: d2 . d3 = 0 on the nose
    z = _gather_matmul(d2, idx, signs)
    if z.size and np.count_nonzero(z):
        raise AssertionError("d2 . d3 != 0")

    x = _gather_matmul(coord_rows, idx, signs) if kd else np.zeros((0, c3))
    if x.size:
        x = np.unique(x, axis=1)
        x = x[:, np.any(x != 0, axis=0)] if x.shape[0] else x
    # reduce the relation lattice once so the presentation stays small
    rel_ech = column_echelon(x.tolist(), transforms=False) if x.size else None
    if rel_ech is not None:
        rank = rel_ech.rank
        rel_cols = [[rel_ech.h[i][j] for i in range(kd)] for j in range(rank)]
        relations = IntMatrix.from_columns(rel_cols, kd) if rel_cols \
            else IntMatrix([[] for _ in range(kd)], 0)
    else:
        relations = IntMatrix([[] for _ in range(kd)], 0)
    h2 = FPAbelianGroup(kd, relations)
    if h2.free_rank:
        raise AssertionError("H2 of a finite group must be finite")
    pidx, _ = _pair_index(g, _basis_elements(g, normalized, element_order),
                          normalized)
    pres = MultiplierPresentation(g, h2, kernel_basis, coord_rows, pidx,
                                  normalized, _basis_elements(g, normalized,
                                                              element_order))
    g._cache[key] = pres
    return pres


def induced_multiplier_map(f: GroupHom, src: MultiplierPresentation,
                           dst: MultiplierPresentation) -> AbHom:
    """The map M(src) -> M(dst) induced by f, in kernel coordinates."""
    if src.group is not f.source or dst.group is not f.target:
        raise ValueError("presentations do not match the homomorphism")
    if src.normalized != dst.normalized:
        raise ValueError("mixed normalized/full presentations")
    imgs = f.images.astype(np.int64)
    n1s = len(src.elements)
    ea = np.repeat(np.array(src.elements, dtype=np.int64), n1s)
    eb = np.tile(np.array(src.elements, dtype=np.int64), n1s)
    mapped = dst.pair_index[imgs[ea], imgs[eb]]

    kb = src.kernel_basis
    kd_src = kb.shape[1]
    n2d = len(dst.elements) ** 2
    dtype = kb.dtype if kb.dtype == np.int64 else object
    tk = np.zeros((n2d, kd_src), dtype=dtype)
    valid = mapped >= 0
    np.add.at(tk, mapped[valid], kb[valid])

    # chain-map sanity: images of cycles are cycles
    _, d2d, _ = _differentials(dst.group, dst.normalized, None)
    if dst.elements != list(range(1, dst.group.order)) \
            and dst.elements != list(range(dst.group.order)):
        _, d2d, _ = _differentials(dst.group, dst.normalized, dst.elements)
    prod = _safe_matmul(d2d, tk)
    if prod.size and np.count_nonzero(prod):
        raise AssertionError("induced chain map does not preserve cycles")

    fmat = _safe_matmul(dst.coord_rows, tk)
    return AbHom(src.h2, dst.h2, IntMatrix(fmat.tolist(), kd_src))


def _safe_matmul(a, b):
    ma = int(np.abs(a).max()) if a.size else 0
    mb = int(np.abs(b).max()) if b.size else 0
    inner = a.shape[1]
    if a.dtype == np.int64 and b.dtype == np.int64 \
            and ma * mb * max(inner, 1) < (1 << 62):
        return a @ b
    return a.astype(object) @ b.astype(object)


def is_multiplier_mono(g: FiniteGroup, n: Subgroup, cap=None,
                       force: bool = False) -> bool:
    """Is the induced map M(G) -> M(G/N) injective?  Requires N central."""
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    if not n.is_central():
        raise NotCentralError("subgroup is not central")
    q, proj = quotient(g, n)
    src = schur_multiplier(g, cap=cap, force=force)
    dst = schur_multiplier(q, cap=cap, force=force)
    f = induced_multiplier_map(proj, src, dst)
    return hom_is_injective(f)
