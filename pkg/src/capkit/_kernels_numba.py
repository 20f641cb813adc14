"""Numba-compiled int64 elimination kernels.

Same algorithms and overflow guards as the numpy fallback in kernels.py;
both must produce identical results.  Guards return ok=0 so the caller can
redo the computation with exact arithmetic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_LIM = 1 << 61
_BIG = (1 << 62)


@njit(cache=True)
def snf_diag(a):
    """In-place Smith diagonalization of ``a``. Returns 1 on success."""
    R, C = a.shape
    n = min(R, C)
    t = 0
    while t < n:
        best = _BIG
        bi = -1
        bj = -1
        for i in range(t, R):
            for j in range(t, C):
                v = a[i, j]
                if v != 0:
                    av = -v if v < 0 else v
                    if av < best:
                        best = av
                        bi = i
                        bj = j
        if bi < 0:
            break
        if bi != t:
            for j in range(C):
                a[t, j], a[bi, j] = a[bi, j], a[t, j]
        if bj != t:
            for i in range(R):
                a[i, t], a[i, bj] = a[i, bj], a[i, t]
        while True:
            if a[t, t] < 0:
                for j in range(t, C):
                    a[t, j] = -a[t, j]
            p = a[t, t]
            rm = 0
            for j in range(t, C):
                e = a[t, j]
                ae = -e if e < 0 else e
                if ae > rm:
                    rm = ae
            dirty = False
            for i in range(t + 1, R):
                v = a[i, t]
                if v != 0:
                    q = v // p
                    if q != 0:
                        aq = -q if q < 0 else q
                        if rm > 0 and aq > _LIM // rm:
                            return 0
                        for j in range(t, C):
                            a[i, j] -= q * a[t, j]
                    if a[i, t] != 0:
                        dirty = True
            if dirty:
                best = _BIG
                bi = -1
                for i in range(t + 1, R):
                    v = a[i, t]
                    if v != 0:
                        av = -v if v < 0 else v
                        if av < best:
                            best = av
                            bi = i
                for j in range(C):
                    a[t, j], a[bi, j] = a[bi, j], a[t, j]
                continue
            # column t is clear below the pivot, so clearing row t only
            # touches row t itself
            dirty = False
            for j in range(t + 1, C):
                v = a[t, j]
                if v != 0:
                    q = v // p
                    a[t, j] = v - q * p
                    if a[t, j] != 0:
                        dirty = True
            if dirty:
                best = _BIG
                bj = -1
                for j in range(t + 1, C):
                    v = a[t, j]
                    if v != 0:
                        av = -v if v < 0 else v
                        if av < best:
                            best = av
                            bj = j
                for i in range(R):
                    a[i, t], a[i, bj] = a[i, bj], a[i, t]
                continue
            bad = -1
            for i in range(t + 1, R):
                for j in range(t + 1, C):
                    if a[i, j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            m1 = 0
            m2 = 0
            for j in range(C):
                e = a[t, j]
                ae = -e if e < 0 else e
                if ae > m1:
                    m1 = ae
                e = a[bad, j]
                ae = -e if e < 0 else e
                if ae > m2:
                    m2 = ae
            if m1 + m2 > _LIM:
                return 0
            for j in range(C):
                a[t, j] += a[bad, j]
        t += 1
    return 1


@njit(cache=True)
def echelon(a, V, Vinv, transforms, prows):
    """In-place column echelon of ``a`` with optional transform tracking.

    Returns (ok, npiv); pivot of column k is at row prows[k].
    """
    R, C = a.shape
    lim2 = _LIM // (C + 1)
    pc = 0
    npiv = 0
    for r in range(R):
        if pc >= C:
            break
        j0 = -1
        while True:
            cnt = 0
            best = _BIG
            j0 = -1
            for j in range(pc, C):
                v = a[r, j]
                if v != 0:
                    cnt += 1
                    av = -v if v < 0 else v
                    if av < best:
                        best = av
                        j0 = j
            if cnt <= 1:
                break
            p = a[r, j0]
            cm = 0
            for i in range(R):
                e = a[i, j0]
                ae = -e if e < 0 else e
                if ae > cm:
                    cm = ae
            vm = 0
            im = 0
            if transforms:
                for i in range(C):
                    e = V[i, j0]
                    ae = -e if e < 0 else e
                    if ae > vm:
                        vm = ae
                for i in range(C):
                    for k in range(C):
                        e = Vinv[i, k]
                        ae = -e if e < 0 else e
                        if ae > im:
                            im = ae
            for j in range(pc, C):
                if j == j0:
                    continue
                v = a[r, j]
                if v == 0:
                    continue
                q = v // p
                if q == 0:
                    continue
                aq = -q if q < 0 else q
                if cm > 0 and aq > _LIM // cm:
                    return 0, 0
                for i in range(R):
                    a[i, j] -= q * a[i, j0]
                if transforms:
                    if vm > 0 and aq > _LIM // vm:
                        return 0, 0
                    if im > 0 and aq > lim2 // im:
                        return 0, 0
                    for i in range(C):
                        V[i, j] -= q * V[i, j0]
                    for k in range(C):
                        Vinv[j0, k] += q * Vinv[j, k]
        if j0 < 0:
            continue
        if j0 != pc:
            for i in range(R):
                a[i, pc], a[i, j0] = a[i, j0], a[i, pc]
            if transforms:
                for i in range(C):
                    V[i, pc], V[i, j0] = V[i, j0], V[i, pc]
                for k in range(C):
                    Vinv[pc, k], Vinv[j0, k] = Vinv[j0, k], Vinv[pc, k]
        if a[r, pc] < 0:
            for i in range(R):
                a[i, pc] = -a[i, pc]
            if transforms:
                for i in range(C):
                    V[i, pc] = -V[i, pc]
                for k in range(C):
                    Vinv[pc, k] = -Vinv[pc, k]
        prows[npiv] = r
        npiv += 1
        pc += 1
    return 1, npiv
