"""Univariate polynomial arithmetic over GF(p) for the module-theory filters.

Polynomials are tuples of ints in [0, p), ascending degree, trimmed.  Sizes
here are tiny (degree <= matrix dimension <= 16, p <= 19), so the plain
quadratic algorithms are the right tool.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import InternalError
from .fieldmat import inv_mod


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(f):
    return len(f) - 1


def add(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, x in enumerate(f):
        out[i] = x
    for i, x in enumerate(g):
        out[i] = (out[i] + x) % p
    return trim(out)


def scale(f, c, p):
    return trim((x * c) % p for x in f)


def mul(f, g, p):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def divmod_poly(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [0] * max(1, len(f) - len(g) + 1)
    ginv = inv_mod(g[-1], p)
    while len(f) >= len(g) and trim(f):
        shift = len(f) - len(g)
        c = (f[-1] * ginv) % p
        q[shift] = c
        for i, x in enumerate(g):
            f[shift + i] = (f[shift + i] - c * x) % p
        while f and f[-1] == 0:
            f.pop()
    return trim(q), trim(f)


def mod(f, g, p):
    return divmod_poly(f, g, p)[1]


def monic(f, p):
    if not f:
        return f
    return scale(f, inv_mod(f[-1], p), p)


def gcd(f, g, p):
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def powmod(f, k, m, p):
    result = (1,)
    f = mod(f, m, p)
    while k:
        if k & 1:
            result = mod(mul(result, f, p), m, p)
        f = mod(mul(f, f, p), m, p)
        k >>= 1
    return result


def derivative(f, p):
    return trim((i * f[i]) % p for i in range(1, len(f)))


def charpoly(mat, p):
    """Characteristic polynomial det(xI - A) via Hessenberg reduction.

    Works over any prime field; the similarity transforms keep the
    polynomial intact and the Hessenberg shape admits a stable column
    recurrence for the leading principal characteristic polynomials.
    """
    a = np.mod(np.asarray(mat, dtype=np.int64), p).copy()
    n = a.shape[0]
    for j in range(n - 2):
        col = a[j + 1:, j]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            a[[j + 1, piv]] = a[[piv, j + 1]]
            a[:, [j + 1, piv]] = a[:, [piv, j + 1]]
        inv = inv_mod(a[j + 1, j], p)
        for i in range(j + 2, n):
            if a[i, j]:
                f = (a[i, j] * inv) % p
                a[i] = (a[i] - f * a[j + 1]) % p
                a[:, j + 1] = (a[:, j + 1] + f * a[:, i]) % p
    # leading-block recurrence on the Hessenberg form
    polys = [(1,)]
    for k in range(1, n + 1):
        term = mul(add((0, 1), ((-a[k - 1, k - 1]) % p,), p), polys[k - 1], p)
        prod = 1
        for m in range(1, k):
            prod = (prod * a[k - m, k - m - 1]) % p
            if prod == 0:
                break
            coeff = (a[k - 1 - m, k - 1] * prod) % p
            if coeff:
                term = add(term, scale(polys[k - 1 - m], (-coeff) % p, p), p)
        polys.append(term)
    return polys[n]


def squarefree_part(f, p):
    """Product of the distinct irreducible factors of f (monic)."""
    f = monic(f, p)
    if deg(f) <= 1:
        return f
    d = derivative(f, p)
    if not d:
        # f = g(x^p) = g(x)^p over the prime field
        g = trim(tuple(f[i] for i in range(0, len(f), p)))
        return squarefree_part(g, p)
    g = gcd(f, d, p)
    if deg(g) == 0:
        return f
    part1 = divmod_poly(f, g, p)[0]
    part2 = squarefree_part(g, p)
    extra = divmod_poly(part2, gcd(part1, part2, p), p)[0]
    return mul(part1, extra, p)


def _equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        r = tuple(rng.randrange(p) for _ in range(n))
        r = trim(r)
        if deg(r) < 1:
            continue
        if p == 2:
            t = r
            acc = r
            for _ in range(d - 1):
                acc = mod(mul(acc, acc, p), f, p)
                t = add(t, acc, p)
            g = gcd(t, f, p)
        else:
            t = powmod(r, (p**d - 1) // 2, f, p)
            g = gcd(add(t, ((p - 1),), p), f, p)
        if 0 < deg(g) < n:
            return _equal_degree_split(g, d, p, rng) + \
                _equal_degree_split(divmod_poly(f, g, p)[0], d, p, rng)


def distinct_irreducible_factors(f, p, seed=0):
    """All distinct monic irreducible factors of f, sorted by (degree, coeffs).

    Distinct-degree splitting followed by seeded Cantor-Zassenhaus; the seed
    makes runs reproducible.
    """
    f = squarefree_part(f, p)
    rng = random.Random((hash(f) & 0xFFFFFFFF) ^ seed)
    factors = []
    x = (0, 1)
    frob = x
    d = 0
    while deg(f) > 0:
        d += 1
        if 2 * d > deg(f):
            factors.append(monic(f, p))
            break
        frob = powmod(frob, p, f, p)
        g = gcd(add(frob, scale(x, p - 1, p), p), f, p)
        if deg(g) > 0:
            factors.extend(_equal_degree_split(g, d, p, rng))
            f = divmod_poly(f, g, p)[0]
            frob = mod(frob, f, p)
    out = sorted(set(factors), key=lambda q: (len(q), q))
    for q in out:
        if deg(q) < 1:
            raise InternalError("constant factor escaped factorisation")
    return out


def eval_matrix(f, mat, p):
    """f(A) for a square int matrix A, reduced mod p (Horner)."""
    a = np.mod(np.asarray(mat, dtype=np.int64), p)
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f):
        out = (out @ a) % p
        out[np.diag_indices(n)] = (out[np.diag_indices(n)] + c) % p
    return out
