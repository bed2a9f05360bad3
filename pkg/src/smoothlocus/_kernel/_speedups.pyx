# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of pure.py; same conventions, same results, faster loops.

Coefficients stay Python objects (Fraction / int) so exactness is
untouched; the win is in the merge, divisibility and reduction loops.
"""

from fractions import Fraction

GREVLEX = 0
LEX = 1
BLOCK = 2


def order_key(int kind, int k, tuple mono):
    cdef int total
    if kind == GREVLEX:
        total = 0
        for e in mono:
            total += e
        return (total, tuple(-e for e in reversed(mono)))
    if kind == LEX:
        return mono
    head = mono[:k]
    tail = mono[k:]
    total = 0
    for e in tail:
        total += e
    return (head, total, tuple(-e for e in reversed(tail)))


def keyed_terms(pairs, int kind, int k):
    out = [(order_key(kind, k, m), m, c) for m, c in pairs]
    out.sort(reverse=True)
    return out


def unkeyed(terms):
    return tuple((m, c) for _, m, c in terms)


def kadd(list a, list b, charp):
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t la = len(a), lb = len(b)
    out = []
    while i < la and j < lb:
        ta = <tuple>a[i]
        tb = <tuple>b[j]
        ka = ta[0]
        kb = tb[0]
        if ka > kb:
            out.append(ta)
            i += 1
        elif kb > ka:
            out.append(tb)
            j += 1
        else:
            c = ta[2] + tb[2]
            if charp:
                c %= charp
            if c:
                out.append((ka, ta[1], c))
            i += 1
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return out


def kmul_term(list f, tuple mono, coeff, charp, int kind, int k):
    out = []
    for _, m, c in f:
        m2 = tuple(x + y for x, y in zip(<tuple>m, mono))
        c2 = c * coeff
        if charp:
            c2 %= charp
        out.append((order_key(kind, k, m2), m2, c2))
    return out


def kmul(list a, list b, charp, int kind, int k):
    if not a or not b:
        return []
    acc = {}
    for _, ma, ca in a:
        for _, mb, cb in b:
            m = tuple(x + y for x, y in zip(<tuple>ma, <tuple>mb))
            prev = acc.get(m)
            acc[m] = ca * cb if prev is None else prev + ca * cb
    pairs = []
    for m, c in acc.items():
        if charp:
            c %= charp
        if c:
            pairs.append((m, c))
    return keyed_terms(pairs, kind, k)


cdef bint _divides(tuple d, tuple m):
    cdef Py_ssize_t i, n = len(d)
    for i in range(n):
        if <object>d[i] > <object>m[i]:
            return False
    return True


cdef object _inv(c, charp):
    if charp:
        return pow(c, -1, charp)
    return Fraction(1) / c


def kreduce(f, list divisors, charp, int kind, int k):
    if not divisors:
        return list(f)
    lead = [(g[0][1], _inv(g[0][2], charp), g) for g in divisors]
    cdef Py_ssize_t nlead = len(lead)
    cdef Py_ssize_t pos = 0, lh, t
    rem = []
    h = list(f)
    lh = len(h)
    while pos < lh:
        top = <tuple>h[pos]
        m0 = <tuple>top[1]
        hit = None
        for t in range(nlead):
            trip = <tuple>lead[t]
            if _divides(<tuple>trip[0], m0):
                hit = trip
                break
        if hit is None:
            rem.append(top)
            pos += 1
            continue
        lm = <tuple>hit[0]
        qm = tuple(x - y for x, y in zip(m0, lm))
        qc = top[2] * hit[1]
        if charp:
            qc = (-qc) % charp
        else:
            qc = -qc
        h = kadd(h[pos:], kmul_term(<list>hit[2], qm, qc, charp, kind, k), charp)
        pos = 0
        lh = len(h)
    return rem


def kdivmod(f, list divisors, charp, int kind, int k):
    quots = [{} for _ in divisors]
    if not divisors:
        return quots, list(f)
    lead = [(i, g[0][1], _inv(g[0][2], charp)) for i, g in enumerate(divisors)]
    cdef Py_ssize_t nlead = len(lead)
    cdef Py_ssize_t pos = 0, lh, t, idx
    rem = []
    h = list(f)
    lh = len(h)
    while pos < lh:
        top = <tuple>h[pos]
        m0 = <tuple>top[1]
        hit = None
        for t in range(nlead):
            trip = <tuple>lead[t]
            if _divides(<tuple>trip[1], m0):
                hit = trip
                break
        if hit is None:
            rem.append(top)
            pos += 1
            continue
        idx = hit[0]
        lm = <tuple>hit[1]
        qm = tuple(x - y for x, y in zip(m0, lm))
        qc = top[2] * hit[2]
        if charp:
            qc %= charp
        q = <dict>quots[idx]
        prev = q.get(qm)
        q[qm] = qc if prev is None else prev + qc
        if charp:
            neg = (-qc) % charp
        else:
            neg = -qc
        h = kadd(h[pos:], kmul_term(<list>divisors[idx], qm, neg, charp, kind, k), charp)
        pos = 0
        lh = len(h)
    return quots, rem


def kspoly(list f, list g, charp, int kind, int k):
    mf = <tuple>(<tuple>f[0])[1]
    mg = <tuple>(<tuple>g[0])[1]
    lcm = tuple(a if a >= b else b for a, b in zip(mf, mg))
    uf = tuple(a - b for a, b in zip(lcm, mf))
    ug = tuple(a - b for a, b in zip(lcm, mg))
    cf = _inv((<tuple>f[0])[2], charp)
    cg = _inv((<tuple>g[0])[2], charp)
    if charp:
        cg = (-cg) % charp
    else:
        cg = -cg
    return kadd(
        kmul_term(f, uf, cf, charp, kind, k),
        kmul_term(g, ug, cg, charp, kind, k),
        charp,
    )
