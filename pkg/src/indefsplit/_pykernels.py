"""Pure-Python kernels.

Reference implementations with the same call signatures as the compiled
``_ckernels`` extension. They are used when the extension has not been
built (or when ``INDEFSPLIT_PURE=1`` is set) and serve as the baseline in
``benchmarks/bench_kernels.py``.

All index arrays are ``np.intp``; all value arrays are ``float64``.
Sparse Cholesky factors are stored column-compressed: ``Lp`` (column
pointers), ``Li`` (row indices, diagonal first in each column), ``Lx``.
"""
from math import sqrt

import numpy as np

NAME = "python"


def _flip(i):
    return -i - 2


def csr_matvec(indptr, indices, data, x):
    n = indptr.shape[0] - 1
    rows = np.repeat(np.arange(n), np.diff(indptr))
    return np.bincount(rows, weights=data * x[indices], minlength=n)


def etree(indptr, indices):
    """Elimination tree of a symmetric matrix given in CSR (full storage)."""
    n = len(indptr) - 1
    Ap = indptr.tolist()
    Ai = indices.tolist()
    parent = [-1] * n
    ancestor = [-1] * n
    for k in range(n):
        for p in range(Ap[k], Ap[k + 1]):
            i = Ai[p]
            while i != -1 and i < k:
                inext = ancestor[i]
                ancestor[i] = k
                if inext == -1:
                    parent[i] = k
                i = inext
    return np.asarray(parent, dtype=np.intp)


def chol_colptr(indptr, indices, parent):
    """Column pointers of L from the row-subtree traversal."""
    n = len(indptr) - 1
    Ap = indptr.tolist()
    Ai = indices.tolist()
    par = parent.tolist()
    counts = [1] * n
    mark = [-1] * n
    for k in range(n):
        mark[k] = k
        for p in range(Ap[k], Ap[k + 1]):
            i = Ai[p]
            if i > k:
                continue
            while mark[i] != k:
                counts[i] += 1
                mark[i] = k
                i = par[i]
    Lp = np.zeros(n + 1, dtype=np.intp)
    np.cumsum(counts, out=Lp[1:])
    return Lp


def chol_numeric(indptr, indices, data, parent, Lp):
    """Up-looking Cholesky. Returns ``(Li, Lx, bad)``; ``bad`` is -1 on
    success, otherwise the (permuted) row whose pivot was not positive."""
    n = len(indptr) - 1
    Ap = indptr.tolist()
    Ai = indices.tolist()
    Ax = data.tolist()
    par = parent.tolist()
    nnz = int(Lp[n])
    Li = np.empty(nnz, dtype=np.intp)
    Lx = np.empty(nnz, dtype=np.float64)
    colptr = Lp.tolist()
    nxt = colptr[:-1]
    x = np.zeros(n)
    mark = [-1] * n
    stack = [0] * n
    for k in range(n):
        # pattern of row k of L, topologically ordered in stack[top:]
        top = n
        mark[k] = k
        for p in range(Ap[k], Ap[k + 1]):
            i = Ai[p]
            if i > k:
                continue
            path = []
            while mark[i] != k:
                path.append(i)
                mark[i] = k
                i = par[i]
            for i in reversed(path):
                top -= 1
                stack[top] = i
        for p in range(Ap[k], Ap[k + 1]):
            if Ai[p] <= k:
                x[Ai[p]] = Ax[p]
        d = x[k]
        x[k] = 0.0
        for t in range(top, n):
            i = stack[t]
            lki = x[i] / Lx[colptr[i]]
            x[i] = 0.0
            a, b = colptr[i] + 1, nxt[i]
            if b > a:
                x[Li[a:b]] -= Lx[a:b] * lki
            d -= lki * lki
            p = nxt[i]
            nxt[i] += 1
            Li[p] = k
            Lx[p] = lki
        if not d > 0.0:
            return Li, Lx, k
        p = nxt[k]
        nxt[k] += 1
        Li[p] = k
        Lx[p] = sqrt(d)
    return Li, Lx, -1


def lsolve(Lp, Li, Lx, x):
    """Solve L y = x in place."""
    n = len(Lp) - 1
    for j in range(n):
        a, b = Lp[j], Lp[j + 1]
        x[j] /= Lx[a]
        if b > a + 1:
            x[Li[a + 1:b]] -= Lx[a + 1:b] * x[j]


def ltsolve(Lp, Li, Lx, x):
    """Solve L^T y = x in place."""
    n = len(Lp) - 1
    for j in range(n - 1, -1, -1):
        a, b = Lp[j], Lp[j + 1]
        if b > a + 1:
            x[j] -= Lx[a + 1:b] @ x[Li[a + 1:b]]
        x[j] /= Lx[a]


def amd(Cp_in, Ci_in, n):
    """Approximate minimum degree ordering.

    ``Cp_in``/``Ci_in`` hold the off-diagonal adjacency of a symmetric
    pattern (both triangles). Quotient-graph elimination with element
    absorption, mass elimination, supernode detection by hashing and
    aggressive absorption; the final ordering is a postorder of the
    assembly tree.
    """
    if n <= 1:
        return np.arange(n, dtype=np.intp)
    cnz = int(Cp_in[n])
    dense = max(16, int(10 * sqrt(n)))
    dense = min(n - 2, dense)
    nzmax = cnz + cnz // 5 + 2 * n
    Cp = Cp_in.tolist()
    Ci = Ci_in.tolist() + [0] * (nzmax - cnz)
    length = [Cp[k + 1] - Cp[k] for k in range(n)] + [0]
    nv = [1] * (n + 1)
    nxt = [-1] * (n + 1)
    head = [-1] * (n + 1)
    elen = [0] * (n + 1)
    degree = length[:]
    w = [1] * (n + 1)
    hhead = [-1] * (n + 1)
    last = [-1] * (n + 1)
    P = [0] * (n + 1)
    lemax = 0
    mindeg = 0
    nel = 0
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
        # select node of minimum approximate degree
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
        # garbage collection
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
                    for _ in range(length[j] - 1):
                        Ci[q] = Ci[p]
                        q += 1
                        p += 1
            cnz = q
        # construct new element
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
            for _ in range(ln):
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
        # find set differences
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
        # degree update
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
                h %= n
                nxt[i] = hhead[h]
                hhead[h] = i
                last[i] = h
        degree[k] = dk
        lemax = max(lemax, dk)
        mark = _wclear(mark + lemax, lemax, w, n)
        # supernode detection
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
        # finalize new element
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
    # postorder the assembly tree
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
    return np.asarray(P[:n], dtype=np.intp)


def _wclear(mark, lemax, w, n):
    if mark < 2 or mark + lemax < 0:
        for k in range(n):
            if w[k] != 0:
                w[k] = 1
        mark = 2
    return mark


def _tdfs(j, k, head, nxt, post, stack):
    top = 0
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
