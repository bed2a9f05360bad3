"""Pure-Python polynomial kernels: term merging, products, reduction.

These are the inner loops of every Groebner computation, kept free of the
object layer so they can be swapped for the compiled twin in _speedups.pyx.

Data conventions shared by both backends:

  * a monomial is a tuple of non-negative ints (one exponent per variable);
  * a coefficient is a Fraction when char == 0 and an int in [0, char)
    when char is a prime;
  * a "keyed" polynomial is a list of (key, monomial, coefficient) triples
    sorted descending by key, where key = order_key(kind, k, monomial);
  * monomials within one keyed polynomial are distinct and no coefficient
    is zero (the empty list is the zero polynomial).

Orders: GREVLEX and LEX over all variables, BLOCK(k) compares the first k
variables lexicographically and breaks ties by grevlex on the rest (an
elimination order for the first block).
"""

from fractions import Fraction

GREVLEX = 0
LEX = 1
BLOCK = 2


def order_key(kind, k, mono):
    """Sort key for a monomial; larger key = larger monomial."""
    if kind == GREVLEX:
        return (sum(mono), tuple(-e for e in reversed(mono)))
    if kind == LEX:
        return mono
    head = mono[:k]
    tail = mono[k:]
    return (head, sum(tail), tuple(-e for e in reversed(tail)))


def keyed_terms(pairs, kind, k):
    """Attach keys to (monomial, coefficient) pairs and sort descending.

    Monomials must be distinct and coefficients nonzero.
    """
    out = [(order_key(kind, k, m), m, c) for m, c in pairs]
    out.sort(reverse=True)
    return out


def unkeyed(terms):
    return tuple((m, c) for _, m, c in terms)


def kadd(a, b, char):
    """Sum of two keyed polynomials (same order)."""
    out = []
    i = j = 0
    la = len(a)
    lb = len(b)
    while i < la and j < lb:
        ka = a[i][0]
        kb = b[j][0]
        if ka > kb:
            out.append(a[i])
            i += 1
        elif kb > ka:
            out.append(b[j])
            j += 1
        else:
            c = a[i][2] + b[j][2]
            if char:
                c %= char
            if c:
                out.append((ka, a[i][1], c))
            i += 1
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return out


def kmul_term(f, mono, coeff, char, kind, k):
    """Product of a keyed polynomial with the single term coeff*mono.

    coeff must be nonzero; order is preserved because monomial orders are
    multiplicative.
    """
    out = []
    for _, m, c in f:
        m2 = tuple(x + y for x, y in zip(m, mono))
        c2 = c * coeff
        if char:
            c2 %= char
        out.append((order_key(kind, k, m2), m2, c2))
    return out


def kmul(a, b, char, kind, k):
    """Full product of two keyed polynomials."""
    if not a or not b:
        return []
    acc = {}
    for _, ma, ca in a:
        for _, mb, cb in b:
            m = tuple(x + y for x, y in zip(ma, mb))
            acc[m] = acc.get(m, 0) + ca * cb
    pairs = []
    for m, c in acc.items():
        if char:
            c %= char
        if c:
            pairs.append((m, c))
    return keyed_terms(pairs, kind, k)


def _divides(d, m):
    for a, b in zip(d, m):
        if a > b:
            return False
    return True


def _inv(c, char):
    if char:
        return pow(c, -1, char)
    return Fraction(1) / c


def kreduce(f, divisors, char, kind, k):
    """Full normal form of f modulo the keyed polynomials in divisors.

    Classic multivariate division: while the leading term of the running
    polynomial is divisible by some leading monomial of a divisor, cancel
    it; otherwise move it to the remainder.  Divisor choice is first match
    in list order, so the result is deterministic for a fixed list.
    """
    if not divisors:
        return list(f)
    lead = [(g[0][1], _inv(g[0][2], char), g) for g in divisors]
    rem = []
    h = list(f)
    pos = 0
    lh = len(h)
    while pos < lh:
        key0, m0, c0 = h[pos]
        hit = None
        for lm, lcinv, g in lead:
            if _divides(lm, m0):
                hit = (lm, lcinv, g)
                break
        if hit is None:
            rem.append(h[pos])
            pos += 1
            continue
        lm, lcinv, g = hit
        qm = tuple(x - y for x, y in zip(m0, lm))
        qc = c0 * lcinv
        if char:
            qc = (-qc) % char
        else:
            qc = -qc
        h = kadd(h[pos:], kmul_term(g, qm, qc, char, kind, k), char)
        pos = 0
        lh = len(h)
    return rem


def kdivmod(f, divisors, char, kind, k):
    """Division with quotients: f = sum(q_i * divisors_i) + remainder.

    Returns (quotients, remainder) where each quotient is a dict mapping
    monomial -> coefficient.  Same reduction strategy as kreduce; only used
    on cold paths that need the certificate.
    """
    quots = [{} for _ in divisors]
    if not divisors:
        return quots, list(f)
    lead = [(i, g[0][1], _inv(g[0][2], char)) for i, g in enumerate(divisors)]
    rem = []
    h = list(f)
    pos = 0
    lh = len(h)
    while pos < lh:
        key0, m0, c0 = h[pos]
        hit = None
        for i, lm, lcinv in lead:
            if _divides(lm, m0):
                hit = (i, lm, lcinv)
                break
        if hit is None:
            rem.append(h[pos])
            pos += 1
            continue
        i, lm, lcinv = hit
        qm = tuple(x - y for x, y in zip(m0, lm))
        qc = c0 * lcinv
        if char:
            qc %= char
        q = quots[i]
        q[qm] = q.get(qm, 0) + qc
        if char:
            neg = (-qc) % char
        else:
            neg = -qc
        h = kadd(h[pos:], kmul_term(divisors[i], qm, neg, char, kind, k), char)
        pos = 0
        lh = len(h)
    return quots, rem


def kspoly(f, g, char, kind, k):
    """S-polynomial of two nonzero keyed polynomials, both scaled monic."""
    mf = f[0][1]
    mg = g[0][1]
    lcm = tuple(a if a >= b else b for a, b in zip(mf, mg))
    uf = tuple(a - b for a, b in zip(lcm, mf))
    ug = tuple(a - b for a, b in zip(lcm, mg))
    cf = _inv(f[0][2], char)
    cg = _inv(g[0][2], char)
    if char:
        cg = (-cg) % char
    else:
        cg = -cg
    return kadd(
        kmul_term(f, uf, cf, char, kind, k),
        kmul_term(g, ug, cg, char, kind, k),
        char,
    )
