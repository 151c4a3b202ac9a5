"""Independent reference computations used by the tests.

Nothing here imports the package; the values come from brute-force
enumeration or closed forms.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product


def ssyt(shape, N, content=None):
    """Yield semistandard tableaux of ``shape`` with entries ``1..N`` (rows as tuples)."""
    shape = [p for p in shape if p]
    cells = [(r, c) for r, p in enumerate(shape) for c in range(p)]
    filling = {}

    def rec(idx):
        if idx == len(cells):
            yield tuple(tuple(filling[(r, c)] for c in range(p)) for r, p in enumerate(shape))
            return
        r, c = cells[idx]
        lo = 1
        if c > 0:
            lo = max(lo, filling[(r, c - 1)])
        if r > 0:
            lo = max(lo, filling[(r - 1, c)] + 1)
        for v in range(lo, N + 1):
            filling[(r, c)] = v
            yield from rec(idx + 1)
        filling.pop((r, c), None)

    for t in rec(0):
        if content is None:
            yield t
        else:
            counts = [0] * N
            for row in t:
                for v in row:
                    counts[v - 1] += 1
            if tuple(counts) == tuple(content):
                yield t


def gl_dimension(shape, N) -> int:
    return sum(1 for _ in ssyt(shape, N))


def kostka(shape, weight) -> int:
    return sum(1 for _ in ssyt(shape, len(weight), weight))


def monomial_count(k, n, d) -> int:
    return sum(1 for _ in combinations_with_replacement(range(k * n), d))


def gaussian_binomial_by_inversions(n, k):
    """``{exponent: coefficient}`` of sum over 0/1 words with ``k`` ones of ``t^{inversions}``."""
    out = {}
    for ones in combinations(range(n), k):
        word = [1 if a in ones else 0 for a in range(n)]
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if word[a] > word[b])
        out[inv] = out.get(inv, 0) + 1
    return out


def symmetric_qbinomial_value(n, k, q):
    """Balanced ``[n, k]`` from the inversion count: ``q^{-k(n-k)} G(q^2)``."""
    g = gaussian_binomial_by_inversions(n, k)
    return q ** (-k * (n - k)) * sum(c * q ** (2 * e) for e, c in g.items())


def qnumber_value(n, q):
    return (q ** n - q ** (-n)) / (q - 1 / q)


# frozen small matrices

S_STRING_2 = ((0, 1), ("-q", 0))  # quantum Weyl element on the 2-dim module, basis (u0, u1)
RVEE_VECTOR_K2 = {0: ("+", Fraction(1, 2)), 1: ("-", Fraction(-3, 2))}  # i: (sign, q-exponent)


def vector_rep_transport(h, t, j):
    """Diagonal transport of the Casimir connection on the vector representation.

    ``kappa_ab`` acts on ``e_c`` as ``[c in {a, b}]``, so the transport along
    the ``T_j`` path is ``exp(h sum_{b != c} L_cb)`` with ``L`` the change of
    ``log phi`` along the path: ``i pi`` for the root being encircled, and the
    real log ratio at the endpoints for every other root.
    """
    n = len(t)
    s = list(t)
    s[j - 1], s[j] = s[j], s[j - 1]
    diag = []
    for c in range(n):
        acc = 0j
        for b in range(n):
            if b == c:
                continue
            a1, a2 = min(b, c), max(b, c)
            if (a1, a2) == (j - 1, j):
                acc += 1j * math.pi
            else:
                acc += math.log((s[a1] - s[a2]) / (t[a1] - t[a2]))
        diag.append(cmath.exp(h * acc))
    return diag


def all_words(letters, max_len):
    for length in range(max_len + 1):
        yield from product(letters, repeat=length)
