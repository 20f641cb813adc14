"""Exact integer linear algebra.

Smith/Hermite-style normal forms, integer lattices (column spans), finitely
presented abelian groups and homomorphisms between them.  Everything here is
exact: matrices carry Python ints, and the elimination kernels fall back to
arbitrary precision whenever int64 guards trip.

Conventions:

* a relation matrix presents the group ``Z^k / columnspan(relations)``;
* invariant factors are reported in descending-divisibility order
  (n_{i+1} | n_i), factors equal to 1 dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

from . import kernels
from .kernels import Echelon, column_echelon, smith_exact, snf_diagonal

_SAFE = 1 << 62


class IntMatrix:
    """Immutable dense matrix of exact integers."""

    __slots__ = ("rows", "num_rows", "num_cols")

    def __init__(self, rows, num_cols=None):
        self.rows = tuple(tuple(int(x) for x in row) for row in rows)
        self.num_rows = len(self.rows)
        if self.num_rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.num_cols = widths.pop()
            if num_cols is not None and num_cols != self.num_cols:
                raise ValueError("inconsistent column count")
        else:
            self.num_cols = 0 if num_cols is None else num_cols

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r, c):
        return cls([[0] * c for _ in range(r)], c)

    @classmethod
    def diagonal(cls, entries, rows=None, cols=None):
        entries = list(entries)
        r = len(entries) if rows is None else rows
        c = len(entries) if cols is None else cols
        m = [[0] * c for _ in range(r)]
        for i, d in enumerate(entries):
            if i < r and i < c:
                m[i][i] = int(d)
        return cls(m, c)

    @classmethod
    def from_columns(cls, columns, num_rows):
        cols = [list(c) for c in columns]
        return cls([[c[i] for c in cols] for i in range(num_rows)], len(cols))

    @property
    def shape(self):
        return (self.num_rows, self.num_cols)

    def column(self, j):
        return [row[j] for row in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.num_cols)]

    def transpose(self):
        return IntMatrix(
            [[self.rows[i][j] for i in range(self.num_rows)]
             for j in range(self.num_cols)],
            self.num_rows)

    def hstack(self, other):
        if other.num_rows != self.num_rows:
            raise ValueError("row mismatch")
        return IntMatrix([list(a) + list(b) for a, b in zip(self.rows, other.rows)],
                         self.num_cols + other.num_cols)

    def __matmul__(self, other):
        if self.num_cols != other.num_rows:
            raise ValueError("shape mismatch")
        prod = matmul_exact(self.rows, other.rows,
                            self.num_rows, self.num_cols, other.num_cols)
        return IntMatrix(prod, other.num_cols)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows \
            and self.num_cols == other.num_cols

    def __hash__(self):
        return hash((self.rows, self.num_cols))

    def __repr__(self):
        return f"IntMatrix({self.num_rows}x{self.num_cols})"

    def is_zero(self):
        return all(not any(row) for row in self.rows)

    def max_abs(self):
        return max((abs(x) for row in self.rows for x in row), default=0)


def matmul_exact(a_rows, b_rows, r, k, c):
    """Exact product of row-major integer matrices; int64 fast path."""
    if r == 0 or c == 0 or k == 0:
        return [[0] * c for _ in range(r)]
    ma = max((abs(x) for row in a_rows for x in row), default=0)
    mb = max((abs(x) for row in b_rows for x in row), default=0)
    if ma and mb and ma * mb * k < _SAFE:
        a = np.array(a_rows, dtype=np.int64)
        b = np.array(b_rows, dtype=np.int64)
        return (a @ b).tolist()
    out = []
    bt = [[b_rows[i][j] for i in range(k)] for j in range(c)]
    for row in a_rows:
        out.append([sum(x * y for x, y in zip(row, col)) for col in bt])
    return out


def determinant(m: IntMatrix) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    if m.num_rows != m.num_cols:
        raise ValueError("determinant of non-square matrix")
    n = m.num_rows
    if n == 0:
        return 1
    a = [list(row) for row in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
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


# ---------------------------------------------------------------------------
# Smith normal form with transforms


@dataclass
class SNFResult:
    """U * A * V = D with U, V unimodular and D diagonal (divisor chain)."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    diag: tuple
    rank: int


def smith_normal_form(a: IntMatrix) -> SNFResult:
    """Smith normal form of ``a`` with unimodular transforms."""
    diag, urows, vrows = smith_exact(a.rows, transforms=True)
    # smith_exact normalizes pivots via row negations already mirrored in U,
    # but the returned diag is abs(); re-read the actual diagonal from U*A*V.
    u = IntMatrix(urows if urows is not None else [], a.num_rows)
    v = IntMatrix(vrows if vrows is not None else [], a.num_cols)
    d = (u @ a) @ v
    diag = [abs(d.rows[i][i]) for i in range(min(a.num_rows, a.num_cols))]
    # force nonnegative diagonal (negate the U row if needed)
    if any(d.rows[i][i] < 0 for i in range(len(diag))):
        urows = [list(r) for r in u.rows]
        for i in range(len(diag)):
            if d.rows[i][i] < 0:
                urows[i] = [-x for x in urows[i]]
        u = IntMatrix(urows, a.num_rows)
        d = (u @ a) @ v
    rank = sum(1 for x in diag if x)
    dm = IntMatrix.diagonal(diag, a.num_rows, a.num_cols)
    if d != dm:
        raise AssertionError("smith normal form reconstruction failed")
    return SNFResult(dm, u, v, tuple(diag), rank)


# ---------------------------------------------------------------------------
# lattices (column spans inside Z^k)


def lattice_echelon(mat) -> Echelon:
    """Echelon form of the lattice spanned by the columns of ``mat``."""
    rows = mat.rows if isinstance(mat, IntMatrix) else mat
    return column_echelon(rows, transforms=False)


def echelon_solve(ech: Echelon, vec):
    """Coefficients of ``vec`` over the echelon's pivot columns, or None."""
    v = [int(x) for x in vec]
    coeffs = []
    for k, r in enumerate(ech.pivot_rows):
        p = ech.h[r][k]
        q, rem = divmod(v[r], p)
        if rem:
            return None
        coeffs.append(q)
        if q:
            for i in range(len(v)):
                v[i] -= q * ech.h[i][k]
    if any(v):
        return None
    return coeffs


def echelon_contains(ech: Echelon, vec) -> bool:
    return echelon_solve(ech, vec) is not None


def echelon_contains_columns(ech: Echelon, mat) -> bool:
    """True iff every column of ``mat`` lies in the echelon's lattice."""
    rows = mat.rows if isinstance(mat, IntMatrix) else mat
    r = len(rows)
    c = len(rows[0]) if r else 0
    if c == 0:
        return True
    ma = max((abs(x) for row in rows for x in row), default=0)
    mh = max((abs(x) for row in ech.h for x in row), default=0)
    if ma < _SAFE // 4 and mh and mh < 1 << 31:
        w = np.array(rows, dtype=np.int64)
        h = np.array(ech.h, dtype=np.int64)
        ok = True
        for k, pr in enumerate(ech.pivot_rows):
            p = int(h[pr, k])
            row = w[pr, :]
            if (row % p).any():
                ok = False
                break
            q = row // p
            qm = int(np.abs(q).max())
            cm = int(np.abs(h[:, k]).max())
            wm = int(np.abs(w).max())
            if qm and (qm * cm > _SAFE // 2 or wm > _SAFE // 2):
                ok = None  # might overflow; redo exactly
                break
            w -= np.outer(h[:, k], q)
        if ok is True:
            return not w.any()
        if ok is False:
            return False
    return all(echelon_contains(ech, [row[j] for row in rows])
               for j in range(c))


def kernel_columns(mat):
    """Basis (list of columns) of the integer kernel of ``mat``."""
    rows = mat.rows if isinstance(mat, IntMatrix) else mat
    r = len(rows)
    c = len(rows[0]) if r else 0
    if c == 0:
        return []
    ech = column_echelon(rows, transforms=True)
    npiv = ech.rank
    return [[ech.v[i][j] for i in range(c)] for j in range(npiv, c)]


# ---------------------------------------------------------------------------
# finitely presented abelian groups


def _descending(torsion_asc):
    return list(reversed([d for d in torsion_asc if d > 1]))


class FPAbelianGroup:
    """Z^k modulo the column span of an integer relation matrix.

    Canonical data (invariant factors, relation-lattice echelon) is computed
    eagerly so instances are safely shareable across threads.
    """

    __slots__ = ("ambient_rank", "relations", "torsion", "free_rank", "_echelon")

    def __init__(self, ambient_rank: int, relations: IntMatrix):
        if relations.num_rows != ambient_rank:
            raise ValueError("relation matrix must have one row per generator")
        self.ambient_rank = ambient_rank
        self.relations = relations
        diag = snf_diagonal(relations.rows) if ambient_rank else []
        rank = sum(1 for d in diag if d)
        self.torsion = tuple(_descending(diag))
        self.free_rank = ambient_rank - rank
        self._echelon = lattice_echelon(relations)

    @classmethod
    def from_invariant_factors(cls, factors, free_rank=0):
        factors = [int(n) for n in factors if int(n) != 1]
        k = len(factors) + free_rank
        rel = IntMatrix.diagonal(factors, k, len(factors))
        return cls(k, rel)

    @classmethod
    def trivial(cls):
        return cls(0, IntMatrix([], 0))

    @classmethod
    def free(cls, rank):
        return cls(rank, IntMatrix([[] for _ in range(rank)], 0))

    def invariant_factors(self):
        """Torsion coefficients in descending divisibility order.

        The free rank is carried separately in ``free_rank``.
        """
        return list(self.torsion)

    @property
    def is_finite(self):
        return self.free_rank == 0

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def order(self):
        if not self.is_finite:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def contains(self, vec) -> bool:
        """Does ``vec`` (ambient coordinates) represent the zero element?"""
        return echelon_contains(self._echelon, vec)

    def direct_sum(self, other: "FPAbelianGroup") -> "FPAbelianGroup":
        k1, k2 = self.ambient_rank, other.ambient_rank
        m1, m2 = self.relations.num_cols, other.relations.num_cols
        rows = [list(r) + [0] * m2 for r in self.relations.rows]
        rows += [[0] * m1 + list(r) for r in other.relations.rows]
        return FPAbelianGroup(k1 + k2, IntMatrix(rows, m1 + m2))

    def __repr__(self):
        return (f"FPAbelianGroup(torsion={list(self.torsion)}, "
                f"free={self.free_rank})")


def invariant_factors(group: FPAbelianGroup):
    """Canonical invariant factors of ``group`` (descending divisibility)."""
    return group.invariant_factors()


class AbHom:
    """Homomorphism between FPAbelianGroups given on ambient free groups."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix: IntMatrix, check=True):
        if matrix.shape != (target.ambient_rank, source.ambient_rank):
            raise ValueError("matrix shape does not match source/target")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and source.relations.num_cols:
            mapped = matrix @ source.relations
            if not echelon_contains_columns(target._echelon, mapped):
                raise ValueError("map does not send source relations into "
                                 "target relations (not well defined)")

    @classmethod
    def identity(cls, group):
        return cls(group, group, IntMatrix.identity(group.ambient_rank),
                   check=False)

    def compose(self, inner: "AbHom") -> "AbHom":
        """self after inner (source = inner.source)."""
        if inner.target is not self.source \
                and inner.target.ambient_rank != self.source.ambient_rank:
            raise ValueError("composition mismatch")
        return AbHom(inner.source, self.target, self.matrix @ inner.matrix,
                     check=False)

    def is_zero(self) -> bool:
        return echelon_contains_columns(self.target._echelon, self.matrix)

    def preimage_of_target_lattice(self):
        """Generators (columns) of {x : f(x) in target relation lattice}."""
        s = self.source.ambient_rank
        stacked = self.matrix.hstack(self.target.relations)
        gens = [col[:s] for col in kernel_columns(stacked)]
        # the source relation lattice is always contained in the preimage
        gens += self.source.relations.columns()
        return gens


def hom_is_injective(f: AbHom) -> bool:
    """Exact injectivity test via lattice preimage (order shortcut if finite)."""
    if f.source.is_trivial:
        return True
    if f.source.is_finite and f.target.is_finite:
        stacked = f.matrix.hstack(f.target.relations)
        diag = snf_diagonal(stacked.rows)
        coker = 1
        for d in diag:
            if d == 0:
                return False  # cannot happen for finite target
            coker *= d
        image = f.target.order() // coker
        return image == f.source.order()
    gens = f.preimage_of_target_lattice()
    src = f.source._echelon
    k = f.source.ambient_rank
    cols = IntMatrix.from_columns(gens, k) if gens else IntMatrix([[] for _ in range(k)], 0)
    return echelon_contains_columns(src, cols)


def hom_is_surjective(f: AbHom) -> bool:
    stacked = f.matrix.hstack(f.target.relations)
    diag = snf_diagonal(stacked.rows)
    rank = sum(1 for d in diag if d)
    if rank < f.target.ambient_rank:
        return False
    return all(d == 1 for d in diag if d)


def image_group(f: AbHom) -> FPAbelianGroup:
    """The image of ``f`` presented on the source generators."""
    gens = f.preimage_of_target_lattice()
    k = f.source.ambient_rank
    rel = IntMatrix.from_columns(gens, k) if gens else IntMatrix([[] for _ in range(k)], 0)
    return FPAbelianGroup(k, rel)


# ---------------------------------------------------------------------------
# tensor and exterior functors


def tensor_product(a: FPAbelianGroup, b: FPAbelianGroup) -> FPAbelianGroup:
    """A (x) B presented on the basis e_i (x) f_j (index i*kb + j)."""
    ka, kb = a.ambient_rank, b.ambient_rank
    cols = []
    for r in a.relations.columns():
        for j in range(kb):
            col = [0] * (ka * kb)
            for i in range(ka):
                col[i * kb + j] = r[i]
            cols.append(col)
    for s in b.relations.columns():
        for i in range(ka):
            col = [0] * (ka * kb)
            for j in range(kb):
                col[i * kb + j] = s[j]
            cols.append(col)
    rel = IntMatrix.from_columns(cols, ka * kb) if cols \
        else IntMatrix([[] for _ in range(ka * kb)], 0)
    return FPAbelianGroup(ka * kb, rel)


def tensor_map(f: AbHom, g: AbHom,
               source=None, target=None) -> AbHom:
    """f (x) g on tensor products (Kronecker product of the matrices)."""
    if source is None:
        source = tensor_product(f.source, g.source)
    if target is None:
        target = tensor_product(f.target, g.target)
    fa, ga = f.matrix.rows, g.matrix.rows
    ra, ca = f.matrix.shape
    rb, cb = g.matrix.shape
    rows = []
    for i in range(ra):
        for p in range(rb):
            rows.append([fa[i][j] * ga[p][q] for j in range(ca) for q in range(cb)])
    m = IntMatrix(rows, ca * cb)
    return AbHom(source, target, m)


def wedge_pairs(k):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _wedge_with_basis(col, j, k, index):
    """Coordinates of (sum_i col[i] e_i) ^ e_j on the e_a ^ e_b basis."""
    out = [0] * (k * (k - 1) // 2)
    for i in range(k):
        if i == j or not col[i]:
            continue
        if i < j:
            out[index[(i, j)]] += col[i]
        else:
            out[index[(j, i)]] -= col[i]
    return out


def exterior_square(a: FPAbelianGroup) -> FPAbelianGroup:
    """Lambda^2 A presented on e_i ^ e_j (i < j)."""
    k = a.ambient_rank
    pairs = wedge_pairs(k)
    index = {p: n for n, p in enumerate(pairs)}
    cols = []
    for r in a.relations.columns():
        for j in range(k):
            w = _wedge_with_basis(r, j, k, index)
            if any(w):
                cols.append(w)
    rel = IntMatrix.from_columns(cols, len(pairs)) if cols \
        else IntMatrix([[] for _ in range(len(pairs))], 0)
    return FPAbelianGroup(len(pairs), rel)


def exterior_square_map(f: AbHom, source=None, target=None) -> AbHom:
    """Lambda^2 f; functorial (identities and compositions respected)."""
    if source is None:
        source = exterior_square(f.source)
    if target is None:
        target = exterior_square(f.target)
    m = f.matrix.rows
    sp = wedge_pairs(f.source.ambient_rank)
    tp = wedge_pairs(f.target.ambient_rank)
    rows = []
    for (a, b) in tp:
        rows.append([m[a][i] * m[b][j] - m[a][j] * m[b][i] for (i, j) in sp])
    mat = IntMatrix(rows, len(sp))
    return AbHom(source, target, mat)


def gcd_many(values):
    return reduce(gcd, values, 0)
