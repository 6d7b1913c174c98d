"""Dense univariate arithmetic on raw coefficient lists (lowest degree first).

Every routine takes the coefficient field ``K`` explicitly and works on
plain lists of raw field values, so it can serve both :class:`Poly` and the
quotient-field element arithmetic without circular imports.  Lists are
always returned stripped of trailing zeros; the zero polynomial is ``[]``.
"""


def strip(a, K):
    z = K.zero
    n = len(a)
    while n and a[n - 1] == z:
        n -= 1
    return a[:n] if n != len(a) else a


def add(a, b, K):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = K.add(out[i], c)
    return strip(out, K)


def sub(a, b, K):
    n = max(len(a), len(b))
    out = []
    z = K.zero
    for i in range(n):
        x = a[i] if i < len(a) else z
        y = b[i] if i < len(b) else z
        out.append(K.sub(x, y))
    return strip(out, K)


def neg(a, K):
    return [K.neg(c) for c in a]


def scale(a, c, K):
    if c == K.zero:
        return []
    return strip([K.mul(x, c) for x in a], K)


def mul(a, b, K):
    if not a or not b:
        return []
    z = K.zero
    out = [z] * (len(a) + len(b) - 1)
    kadd, kmul = K.add, K.mul
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            out[i + j] = kadd(out[i + j], kmul(x, y))
    return strip(out, K)


def divmod_(a, b, K):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], list(a)
    r = list(a)
    db = len(b) - 1
    inv_lc = K.inv(b[-1])
    q = [K.zero] * (len(a) - db)
    ksub, kmul = K.sub, K.mul
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c == K.zero:
            continue
        c = kmul(c, inv_lc)
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = ksub(r[k - db + j], kmul(c, b[j]))
    return strip(q, K), strip(r[:db], K)


def rem(a, b, K):
    return divmod_(a, b, K)[1]


def monic(a, K):
    if not a:
        return []
    if a[-1] == K.one:
        return list(a)
    inv = K.inv(a[-1])
    return [K.mul(c, inv) for c in a]


def gcd(a, b, K):
    a, b = strip(list(a), K), strip(list(b), K)
    while b:
        a, b = b, rem(a, b, K)
    return monic(a, K)


def gcdex(a, b, K):
    """Return (g, s, t) with s*a + t*b = g monic (g = [] when both are zero)."""
    r0, r1 = strip(list(a), K), strip(list(b), K)
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        q, r = divmod_(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, K), K)
        t0, t1 = t1, sub(t0, mul(q, t1, K), K)
    if not r0:
        return [], [], []
    inv = K.inv(r0[-1])
    return scale(r0, inv, K), scale(s0, inv, K), scale(t0, inv, K)


def deriv(a, K):
    return strip([K.mul(K.from_int(i), a[i]) for i in range(1, len(a))], K)


def evaluate(a, x, K):
    acc = K.zero
    for c in reversed(a):
        acc = K.add(K.mul(acc, x), c)
    return acc


def powmod(a, e, m, K):
    result = [K.one]
    base = rem(a, m, K)
    while e:
        if e & 1:
            result = rem(mul(result, base, K), m, K)
        e >>= 1
        if e:
            base = rem(mul(base, base, K), m, K)
    return result


def compose(a, b, K):
    """a(b(x)) by Horner."""
    out = []
    for c in reversed(a):
        out = add(mul(out, b, K), [c] if c != K.zero else [], K)
    return out
