"""Integer elimination kernels: Smith diagonalization and column echelon.

Three interchangeable implementations of the same two algorithms:

* ``exact``  -- pure Python, arbitrary-precision integers; always correct.
* ``numpy``  -- vectorized int64 row/column operations with overflow guards.
* ``numba``  -- @njit-compiled int64 loops with the same guards.

The int64 paths bail out (overflow guard) whenever an intermediate product
could leave the safe range, and the dispatcher silently falls back to the
exact path, so results are always exact.  Set ``CAPKIT_NUMBA=0`` to force
the numpy fallback; the module also degrades to numpy if numba is absent.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

# int64 entries are allowed to grow up to ~2^61; every q*entry product is
# guarded before the update so nothing ever wraps.
_LIMIT = 1 << 61
_INPUT_LIMIT = 1 << 40
_I64MAX = np.iinfo(np.int64).max

_backend = None


def backend_name() -> str:
    """Name of the fast path in use: "numba" or "numpy"."""
    global _backend
    if _backend is None:
        if os.environ.get("CAPKIT_NUMBA", "1").lower() in ("0", "false", "no"):
            _backend = "numpy"
        else:
            try:
                from . import _kernels_numba  # noqa: F401
                _backend = "numba"
            except ImportError:
                _backend = "numpy"
    return _backend


@dataclass
class Echelon:
    """Column echelon form H = A * V.

    Pivot of column k sits at row ``pivot_rows[k]``; pivot columns are the
    leading columns 0..len(pivot_rows)-1, pivots are positive, and every
    entry of a pivot row to the right of its pivot column is zero.
    """

    h: list
    pivot_rows: list
    v: list | None = None
    vinv: list | None = None

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)


# ---------------------------------------------------------------------------
# exact (arbitrary precision) implementations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_exact(mat, transforms=False):
    """Diagonalize ``mat`` over Z.  Returns (diag, U, V) with U*A*V = D.

    ``diag`` has length min(rows, cols); nonzero entries are positive and
    satisfy the divisibility chain d1 | d2 | ...  U, V are None unless
    ``transforms`` is set.
    """
    m = [[int(x) for x in row] for row in mat]
    R = len(m)
    C = len(m[0]) if R else 0
    U = _identity(R) if transforms else None
    V = _identity(C) if transforms else None
    n = min(R, C)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        rd, rs = m[dst], m[src]
        for j in range(C):
            rd[j] += q * rs[j]
        if U is not None:
            rd, rs = U[dst], U[src]
            for j in range(R):
                rd[j] += q * rs[j]

    def addmul_col(dst, src, q):
        for row in m:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < n:
        best = None
        bi = bj = -1
        for i in range(t, R):
            row = m[i]
            for j in range(t, C):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best, bi, bj = abs(v), i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best is None:
            break
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            if m[t][t] < 0:
                negate_row(t)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, R):
                v = m[i][t]
                if v:
                    addmul_row(i, t, -(v // p))
                    if m[i][t]:
                        dirty = True
            if dirty:
                bi = min((i for i in range(t + 1, R) if m[i][t]),
                         key=lambda i: abs(m[i][t]))
                swap_rows(t, bi)
                continue
            # column t is now zero off the pivot, so these column operations
            # only touch row t
            dirty = False
            for j in range(t + 1, C):
                v = m[t][j]
                if v:
                    addmul_col(j, t, -(v // p))
                    if m[t][j]:
                        dirty = True
            if dirty:
                bj = min((j for j in range(t + 1, C) if m[t][j]),
                         key=lambda j: abs(m[t][j]))
                swap_cols(t, bj)
                continue
            bad = None
            for i in range(t + 1, R):
                row = m[i]
                for j in range(t + 1, C):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            addmul_row(t, bad, 1)
        t += 1
    diag = [abs(m[i][i]) for i in range(n)]
    return diag, U, V


def echelon_exact(mat, transforms=False):
    """Column echelon form over Z via exact column operations.

    Returns (h, pivot_rows, v, vinv) with h = mat * v and vinv = v^-1.
    """
    m = [[int(x) for x in row] for row in mat]
    R = len(m)
    C = len(m[0]) if R else 0
    V = _identity(C) if transforms else None
    Vinv = _identity(C) if transforms else None

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def addmul_col(dst, src, q):
        # col[dst] += q * col[src]; inverse tracked on Vinv rows
        for row in m:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]
            rs, rd = Vinv[src], Vinv[dst]
            for k in range(C):
                rs[k] -= q * rd[k]

    def negate_col(j):
        for row in m:
            row[j] = -row[j]
        if V is not None:
            for row in V:
                row[j] = -row[j]
            Vinv[j] = [-x for x in Vinv[j]]

    pivot_rows = []
    pc = 0
    for r in range(R):
        if pc >= C:
            break
        cols = [j for j in range(pc, C) if m[r][j]]
        if not cols:
            continue
        while len(cols) > 1:
            j0 = min(cols, key=lambda j: abs(m[r][j]))
            for j in cols:
                if j != j0:
                    q = m[r][j] // m[r][j0]
                    if q:
                        addmul_col(j, j0, -q)
            cols = [j for j in cols if m[r][j]]
        j0 = cols[0]
        if j0 != pc:
            swap_cols(pc, j0)
        if m[r][pc] < 0:
            negate_col(pc)
        pivot_rows.append(r)
        pc += 1
    return m, pivot_rows, V, Vinv


# ---------------------------------------------------------------------------
# numpy fallback (int64, vectorized operations, overflow-guarded)


def _snf_diag_numpy(a):
    R, C = a.shape
    n = min(R, C)
    t = 0
    while t < n:
        sub = a[t:, t:]
        nz = sub != 0
        if not nz.any():
            break
        absv = np.where(nz, np.abs(sub), _I64MAX)
        k = int(np.argmin(absv))
        bi, bj = divmod(k, C - t)
        bi += t
        bj += t
        if bi != t:
            a[[t, bi]] = a[[bi, t]]
        if bj != t:
            a[:, [t, bj]] = a[:, [bj, t]]
        while True:
            if a[t, t] < 0:
                a[t, t:] = -a[t, t:]
            p = int(a[t, t])
            col = a[t + 1:, t]
            if col.size and col.any():
                q = col // p
                qm = int(np.abs(q).max())
                rm = int(np.abs(a[t, t:]).max())
                if qm and qm * rm > _LIMIT:
                    return False, None
                a[t + 1:, t:] -= q[:, None] * a[t, t:][None, :]
                col = a[t + 1:, t]
                if col.any():
                    absc = np.where(col != 0, np.abs(col), _I64MAX)
                    bi = t + 1 + int(np.argmin(absc))
                    a[[t, bi]] = a[[bi, t]]
                    continue
            row = a[t, t + 1:]
            if row.size and row.any():
                q = row // p
                # p*q stays within the magnitude of the original row
                a[t, t + 1:] -= p * q
                row = a[t, t + 1:]
                if row.any():
                    absr = np.where(row != 0, np.abs(row), _I64MAX)
                    bj = t + 1 + int(np.argmin(absr))
                    a[:, [t, bj]] = a[:, [bj, t]]
                    continue
            rest = a[t + 1:, t + 1:]
            if rest.size:
                mism = np.nonzero((rest % p).any(axis=1))[0]
                if mism.size:
                    i = t + 1 + int(mism[0])
                    if int(np.abs(a[t]).max()) + int(np.abs(a[i]).max()) > _LIMIT:
                        return False, None
                    a[t] += a[i]
                    continue
            break
        t += 1
    return True, np.abs(a.diagonal()[:n])


def _echelon_numpy(a, transforms):
    R, C = a.shape
    V = np.eye(C, dtype=np.int64) if transforms else None
    Vinv = np.eye(C, dtype=np.int64) if transforms else None
    pivot_rows = []
    pc = 0
    for r in range(R):
        if pc >= C:
            break
        while True:
            row = a[r, pc:]
            nzj = np.nonzero(row)[0]
            if nzj.size == 0:
                j0 = -1
                break
            if nzj.size == 1:
                j0 = pc + int(nzj[0])
                break
            j0 = pc + int(nzj[np.argmin(np.abs(row[nzj]))])
            p = int(a[r, j0])
            q = a[r, pc:] // p
            q[j0 - pc] = 0
            qm = int(np.abs(q).max())
            cm = int(np.abs(a[:, j0]).max())
            if qm and qm * cm > _LIMIT:
                return False, None, None, None, None
            a[:, pc:] -= np.outer(a[:, j0], q)
            if transforms:
                vm = int(np.abs(V[:, j0]).max())
                im = int(np.abs(Vinv[pc:, :]).max())
                if qm and (qm * vm > _LIMIT or qm * im * (C - pc) > _LIMIT):
                    return False, None, None, None, None
                V[:, pc:] -= np.outer(V[:, j0], q)
                Vinv[j0, :] += q @ Vinv[pc:, :]
        if j0 < 0:
            continue
        if j0 != pc:
            a[:, [pc, j0]] = a[:, [j0, pc]]
            if transforms:
                V[:, [pc, j0]] = V[:, [j0, pc]]
                Vinv[[pc, j0]] = Vinv[[j0, pc]]
        if a[r, pc] < 0:
            a[:, pc] = -a[:, pc]
            if transforms:
                V[:, pc] = -V[:, pc]
                Vinv[pc] = -Vinv[pc]
        pivot_rows.append(r)
        pc += 1
    return True, a, pivot_rows, V, Vinv


# ---------------------------------------------------------------------------
# dispatch


def _to_int64(mat):
    """Convert to an int64 array if every entry is comfortably small."""
    if isinstance(mat, np.ndarray) and mat.dtype == np.int64:
        a = mat
    else:
        try:
            a = np.array([[int(x) for x in row] for row in mat], dtype=object)
            if a.size == 0:
                return np.zeros((len(mat), 0), dtype=np.int64)
            if int(np.abs(a).max()) > _INPUT_LIMIT:
                return None
            a = a.astype(np.int64)
        except (OverflowError, ValueError):
            return None
    if a.size and int(np.abs(a).max()) > _INPUT_LIMIT:
        return None
    return a


def _dims(mat):
    if isinstance(mat, np.ndarray):
        return mat.shape[0], mat.shape[1]
    r = len(mat)
    return r, (len(mat[0]) if r else 0)


def snf_diagonal(mat) -> list:
    """Invariant diagonal of ``mat`` (length min(R,C), chain order, zeros last)."""
    R, C = _dims(mat)
    if R == 0 or C == 0:
        return []
    a = None if R * C <= 64 else _to_int64(mat)
    if a is not None:
        a = np.ascontiguousarray(a.copy())
        if backend_name() == "numba":
            from . import _kernels_numba as nb
            ok = nb.snf_diag(a)
            if ok:
                return [int(x) for x in np.abs(a.diagonal()[:min(R, C)])]
        else:
            ok, diag = _snf_diag_numpy(a)
            if ok:
                return [int(x) for x in diag]
    diag, _, _ = smith_exact(mat, transforms=False)
    return diag


def column_echelon(mat, transforms: bool = False) -> Echelon:
    """Column echelon form of ``mat`` (optionally with V and V^-1)."""
    R, C = _dims(mat)
    if R == 0 or C == 0:
        ident = _identity(C) if transforms else None
        h = [list(map(int, row)) for row in mat] if C else [[] for _ in range(R)]
        return Echelon(h, [], ident,
                       [row[:] for row in ident] if ident is not None else None)
    a = None if R * C <= 64 else _to_int64(mat)
    if a is not None:
        a = np.ascontiguousarray(a.copy())
        if backend_name() == "numba":
            from . import _kernels_numba as nb
            V = np.eye(C, dtype=np.int64) if transforms else np.zeros((0, 0), np.int64)
            Vinv = np.eye(C, dtype=np.int64) if transforms else np.zeros((0, 0), np.int64)
            prows = np.empty(min(R, C), dtype=np.int64)
            ok, npiv = nb.echelon(a, V, Vinv, transforms, prows)
            if ok:
                piv = [int(x) for x in prows[:npiv]]
                return Echelon(a.tolist(), piv,
                               V.tolist() if transforms else None,
                               Vinv.tolist() if transforms else None)
        else:
            ok, h, piv, V, Vinv = _echelon_numpy(a, transforms)
            if ok:
                return Echelon(h.tolist(), piv,
                               V.tolist() if transforms else None,
                               Vinv.tolist() if transforms else None)
    h, piv, V, Vinv = echelon_exact(mat, transforms=transforms)
    return Echelon(h, piv, V, Vinv)
