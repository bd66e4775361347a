# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_pykernels`` call for call."""
from libc.math cimport sqrt

import numpy as np
cimport numpy as cnp

cnp.import_array()

NAME = "cython"

ctypedef Py_ssize_t idx_t


cdef inline idx_t _flip(idx_t i) nogil:
    return -i - 2


def csr_matvec(const idx_t[::1] indptr, const idx_t[::1] indices,
               const double[::1] data, const double[::1] x):
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t i, p
    cdef double s
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] y = out
    with nogil:
        for i in range(n):
            s = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                s = s + data[p] * x[indices[p]]
            y[i] = s
    return out


def etree(const idx_t[::1] indptr, const idx_t[::1] indices):
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t k, p, i, inext
    out = np.full(n, -1, dtype=np.intp)
    anc = np.full(n, -1, dtype=np.intp)
    cdef idx_t[::1] parent = out
    cdef idx_t[::1] ancestor = anc
    with nogil:
        for k in range(n):
            for p in range(indptr[k], indptr[k + 1]):
                i = indices[p]
                while i != -1 and i < k:
                    inext = ancestor[i]
                    ancestor[i] = k
                    if inext == -1:
                        parent[i] = k
                    i = inext
    return out


def chol_colptr(const idx_t[::1] indptr, const idx_t[::1] indices,
                const idx_t[::1] parent):
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t k, p, i
    cnt = np.ones(n, dtype=np.intp)
    mk = np.full(n, -1, dtype=np.intp)
    cdef idx_t[::1] counts = cnt
    cdef idx_t[::1] mark = mk
    with nogil:
        for k in range(n):
            mark[k] = k
            for p in range(indptr[k], indptr[k + 1]):
                i = indices[p]
                if i > k:
                    continue
                while mark[i] != k:
                    counts[i] += 1
                    mark[i] = k
                    i = parent[i]
    Lp = np.zeros(n + 1, dtype=np.intp)
    np.cumsum(cnt, out=Lp[1:])
    return Lp


def chol_numeric(const idx_t[::1] indptr, const idx_t[::1] indices,
                 const double[::1] data, const idx_t[::1] parent,
                 const idx_t[::1] Lp):
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t nnz = Lp[n]
    Li_arr = np.empty(nnz, dtype=np.intp)
    Lx_arr = np.empty(nnz, dtype=np.float64)
    cdef idx_t[::1] Li = Li_arr
    cdef double[::1] Lx = Lx_arr
    nxt_arr = np.array(Lp[:n], dtype=np.intp)
    cdef idx_t[::1] nxt = nxt_arr
    x_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    mk = np.full(n, -1, dtype=np.intp)
    cdef idx_t[::1] mark = mk
    st = np.empty(n, dtype=np.intp)
    cdef idx_t[::1] stack = st
    pth = np.empty(n, dtype=np.intp)
    cdef idx_t[::1] path = pth
    cdef idx_t k, p, i, t, top, plen, q, bad = -1
    cdef double d, lki
    with nogil:
        for k in range(n):
            top = n
            mark[k] = k
            for p in range(indptr[k], indptr[k + 1]):
                i = indices[p]
                if i > k:
                    continue
                plen = 0
                while mark[i] != k:
                    path[plen] = i
                    plen += 1
                    mark[i] = k
                    i = parent[i]
                while plen > 0:
                    plen -= 1
                    top -= 1
                    stack[top] = path[plen]
            for p in range(indptr[k], indptr[k + 1]):
                if indices[p] <= k:
                    x[indices[p]] = data[p]
            d = x[k]
            x[k] = 0.0
            for t in range(top, n):
                i = stack[t]
                lki = x[i] / Lx[Lp[i]]
                x[i] = 0.0
                for q in range(Lp[i] + 1, nxt[i]):
                    x[Li[q]] -= Lx[q] * lki
                d -= lki * lki
                q = nxt[i]
                nxt[i] += 1
                Li[q] = k
                Lx[q] = lki
            if not d > 0.0:
                bad = k
                break
            q = nxt[k]
            nxt[k] += 1
            Li[q] = k
            Lx[q] = sqrt(d)
    return Li_arr, Lx_arr, bad


def lsolve(const idx_t[::1] Lp, const idx_t[::1] Li, const double[::1] Lx,
           double[::1] x):
    cdef idx_t n = Lp.shape[0] - 1
    cdef idx_t j, p
    cdef double xj
    with nogil:
        for j in range(n):
            xj = x[j] / Lx[Lp[j]]
            x[j] = xj
            for p in range(Lp[j] + 1, Lp[j + 1]):
                x[Li[p]] -= Lx[p] * xj


def ltsolve(const idx_t[::1] Lp, const idx_t[::1] Li, const double[::1] Lx,
            double[::1] x):
    cdef idx_t n = Lp.shape[0] - 1
    cdef idx_t j, p
    cdef double s
    with nogil:
        for j in range(n - 1, -1, -1):
            s = x[j]
            for p in range(Lp[j] + 1, Lp[j + 1]):
                s -= Lx[p] * x[Li[p]]
            x[j] = s / Lx[Lp[j]]


cdef idx_t _wclear(idx_t mark, idx_t lemax, idx_t[::1] w, idx_t n) nogil:
    cdef idx_t k
    if mark < 2 or mark + lemax < 0:
        for k in range(n):
            if w[k] != 0:
                w[k] = 1
        mark = 2
    return mark


cdef idx_t _tdfs(idx_t j, idx_t k, idx_t[::1] head, idx_t[::1] nxt,
                 idx_t[::1] post, idx_t[::1] stack) nogil:
    cdef idx_t top = 0, p, i
    stack[0] = j
    while top >= 0:
        p = stack[top]
        i = head[p]
        if i == -1:
            top -= 1
            post[k] = p
            k += 1
        else:
            head[p] = nxt[i]
            top += 1
            stack[top] = i
    return k


def amd(const idx_t[::1] Cp_in, const idx_t[::1] Ci_in, idx_t n):
    if n <= 1:
        return np.arange(n, dtype=np.intp)
    cdef idx_t cnz = Cp_in[n]
    cdef idx_t dense = max(16, <idx_t>(10 * sqrt(<double>n)))
    dense = min(n - 2, dense)
    cdef idx_t nzmax = cnz + cnz // 5 + 2 * n
    Cp_arr = np.array(Cp_in, dtype=np.intp)
    Ci_arr = np.zeros(max(nzmax, 1), dtype=np.intp)
    Ci_arr[:cnz] = Ci_in[:cnz]
    cdef idx_t[::1] Cp = Cp_arr
    cdef idx_t[::1] Ci = Ci_arr
    ws = np.empty((9, n + 1), dtype=np.intp)
    cdef idx_t[::1] length = ws[0]
    cdef idx_t[::1] nv = ws[1]
    cdef idx_t[::1] nxt = ws[2]
    cdef idx_t[::1] head = ws[3]
    cdef idx_t[::1] elen = ws[4]
    cdef idx_t[::1] degree = ws[5]
    cdef idx_t[::1] w = ws[6]
    cdef idx_t[::1] hhead = ws[7]
    cdef idx_t[::1] last = ws[8]
    P_arr = np.zeros(n + 1, dtype=np.intp)
    cdef idx_t[::1] P = P_arr
    cdef idx_t lemax = 0, mindeg = 0, nel = 0, mark
    cdef idx_t i, j, k, k1, k2, d, dk, dext, e, elenk, eln, jlast, ln
    cdef idx_t nvi, nvj, nvk, wnvi, p, p1, p2, p3, p4, pj, pk, pk1, pk2, pn, q
    cdef idx_t h
    cdef bint ok
    with nogil:
        for k in range(n):
            length[k] = Cp[k + 1] - Cp[k]
        length[n] = 0
        for i in range(n + 1):
            head[i] = -1
            last[i] = -1
            nxt[i] = -1
            hhead[i] = -1
            nv[i] = 1
            w[i] = 1
            elen[i] = 0
            degree[i] = length[i]
        mark = _wclear(0, 0, w, n)
        elen[n] = -2
        Cp[n] = -1
        w[n] = 0
        for i in range(n):
            d = degree[i]
            if d == 0:
                elen[i] = -2
                nel += 1
                Cp[i] = -1
                w[i] = 0
            elif d > dense:
                nv[i] = 0
                elen[i] = -1
                nel += 1
                Cp[i] = _flip(n)
                nv[n] += 1
            else:
                if head[d] != -1:
                    last[head[d]] = i
                nxt[i] = head[d]
                head[d] = i
        while nel < n:
            k = -1
            while mindeg < n:
                k = head[mindeg]
                if k != -1:
                    break
                mindeg += 1
            if nxt[k] != -1:
                last[nxt[k]] = -1
            head[mindeg] = nxt[k]
            elenk = elen[k]
            nvk = nv[k]
            nel += nvk
            if elenk > 0 and cnz + mindeg >= nzmax:
                for j in range(n):
                    p = Cp[j]
                    if p >= 0:
                        Cp[j] = Ci[p]
                        Ci[p] = _flip(j)
                q = 0
                p = 0
                while p < cnz:
                    j = _flip(Ci[p])
                    p += 1
                    if j >= 0:
                        Ci[q] = Cp[j]
                        Cp[j] = q
                        q += 1
                        for k2 in range(length[j] - 1):
                            Ci[q] = Ci[p]
                            q += 1
                            p += 1
                cnz = q
            dk = 0
            nv[k] = -nvk
            p = Cp[k]
            pk1 = p if elenk == 0 else cnz
            pk2 = pk1
            for k1 in range(1, elenk + 2):
                if k1 > elenk:
                    e = k
                    pj = p
                    ln = length[k] - elenk
                else:
                    e = Ci[p]
                    p += 1
                    pj = Cp[e]
                    ln = length[e]
                for k2 in range(ln):
                    i = Ci[pj]
                    pj += 1
                    nvi = nv[i]
                    if nvi <= 0:
                        continue
                    dk += nvi
                    nv[i] = -nvi
                    Ci[pk2] = i
                    pk2 += 1
                    if nxt[i] != -1:
                        last[nxt[i]] = last[i]
                    if last[i] != -1:
                        nxt[last[i]] = nxt[i]
                    else:
                        head[degree[i]] = nxt[i]
                if e != k:
                    Cp[e] = _flip(k)
                    w[e] = 0
            if elenk != 0:
                cnz = pk2
            degree[k] = dk
            Cp[k] = pk1
            length[k] = pk2 - pk1
            elen[k] = -2
            mark = _wclear(mark, lemax, w, n)
            for pk in range(pk1, pk2):
                i = Ci[pk]
                eln = elen[i]
                if eln <= 0:
                    continue
                nvi = -nv[i]
                wnvi = mark - nvi
                for p in range(Cp[i], Cp[i] + eln):
                    e = Ci[p]
                    if w[e] >= mark:
                        w[e] -= nvi
                    elif w[e] != 0:
                        w[e] = degree[e] + wnvi
            for pk in range(pk1, pk2):
                i = Ci[pk]
                p1 = Cp[i]
                p2 = p1 + elen[i] - 1
                pn = p1
                h = 0
                d = 0
                for p in range(p1, p2 + 1):
                    e = Ci[p]
                    if w[e] != 0:
                        dext = w[e] - mark
                        if dext > 0:
                            d += dext
                            Ci[pn] = e
                            pn += 1
                            h += e
                        else:
                            Cp[e] = _flip(k)
                            w[e] = 0
                elen[i] = pn - p1 + 1
                p3 = pn
                p4 = p1 + length[i]
                for p in range(p2 + 1, p4):
                    j = Ci[p]
                    nvj = nv[j]
                    if nvj <= 0:
                        continue
                    d += nvj
                    Ci[pn] = j
                    pn += 1
                    h += j
                if d == 0:
                    Cp[i] = _flip(k)
                    nvi = -nv[i]
                    dk -= nvi
                    nvk += nvi
                    nel += nvi
                    nv[i] = 0
                    elen[i] = -1
                else:
                    degree[i] = min(degree[i], d)
                    Ci[pn] = Ci[p3]
                    Ci[p3] = Ci[p1]
                    Ci[p1] = k
                    length[i] = pn - p1 + 1
                    h = h % n
                    nxt[i] = hhead[h]
                    hhead[h] = i
                    last[i] = h
            degree[k] = dk
            lemax = max(lemax, dk)
            mark = _wclear(mark + lemax, lemax, w, n)
            for pk in range(pk1, pk2):
                i = Ci[pk]
                if nv[i] >= 0:
                    continue
                h = last[i]
                i = hhead[h]
                hhead[h] = -1
                while i != -1 and nxt[i] != -1:
                    ln = length[i]
                    eln = elen[i]
                    for p in range(Cp[i] + 1, Cp[i] + ln):
                        w[Ci[p]] = mark
                    jlast = i
                    j = nxt[i]
                    while j != -1:
                        ok = length[j] == ln and elen[j] == eln
                        p = Cp[j] + 1
                        while ok and p <= Cp[j] + ln - 1:
                            if w[Ci[p]] != mark:
                                ok = False
                            p += 1
                        if ok:
                            Cp[j] = _flip(i)
                            nv[i] += nv[j]
                            nv[j] = 0
                            elen[j] = -1
                            j = nxt[j]
                            nxt[jlast] = j
                        else:
                            jlast = j
                            j = nxt[j]
                    i = nxt[i]
                    mark += 1
            p = pk1
            for pk in range(pk1, pk2):
                i = Ci[pk]
                nvi = -nv[i]
                if nvi <= 0:
                    continue
                nv[i] = nvi
                d = degree[i] + dk - nvi
                d = min(d, n - nel - nvi)
                if head[d] != -1:
                    last[head[d]] = i
                nxt[i] = head[d]
                last[i] = -1
                head[d] = i
                mindeg = min(mindeg, d)
                degree[i] = d
                Ci[p] = i
                p += 1
            nv[k] = nvk
            length[k] = p - pk1
            if length[k] == 0:
                Cp[k] = -1
                w[k] = 0
            if elenk != 0:
                cnz = p
        for i in range(n):
            Cp[i] = _flip(Cp[i])
        for j in range(n + 1):
            head[j] = -1
        for j in range(n, -1, -1):
            if nv[j] > 0:
                continue
            nxt[j] = head[Cp[j]]
            head[Cp[j]] = j
        for e in range(n, -1, -1):
            if nv[e] <= 0:
                continue
            if Cp[e] != -1:
                nxt[e] = head[Cp[e]]
                head[Cp[e]] = e
        k = 0
        for i in range(n + 1):
            if Cp[i] == -1:
                k = _tdfs(i, k, head, nxt, P, w)
    return np.asarray(P_arr[:n])
