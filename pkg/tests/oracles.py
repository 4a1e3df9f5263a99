"""Independent brute-force reference computations.

Elements are frozensets of point labels here, not bitmasks, so that nothing
is shared with the package beyond the definitions themselves.
"""
import math
from fractions import Fraction
from itertools import chain, combinations, combinations_with_replacement, product


def powerset(points):
    pts = list(points)
    return [frozenset(c) for c in chain.from_iterable(combinations(pts, r) for r in range(len(pts) + 1))]


def closure(seeds, full, maps=(), complement=False):
    fam = {frozenset(), frozenset(full)} | {frozenset(s) for s in seeds}
    while True:
        new = set(fam)
        for a in fam:
            for b in fam:
                new.add(a & b)
                new.add(a | b)
            for f in maps:
                new.add(f(a))
            if complement:
                new.add(frozenset(full) - a)
        if new == fam:
            return fam
        fam = new


def refines(beta, alpha):
    return all(any(b <= a for a in alpha) for b in beta)


def join(alpha, beta):
    out = {a & b for a in alpha for b in beta}
    if len(out) > 1:
        out.discard(frozenset())
    return frozenset(out)


def covers(W, full, max_size=None):
    els = [e for e in W if e]
    k = len(els) if max_size is None else max_size
    out = []
    for r in range(1, k + 1):
        for c in combinations(els, r):
            if frozenset().union(*c) == frozenset(full):
                out.append(frozenset(c))
    return out


def shannon(masses):
    S = sum(masses)
    return -sum((x / S) * math.log(x / S) for x in masses if x)


def h_star(alpha, m):
    return shannon([m(a) for a in alpha])


def n_nonzero(alpha, m):
    return sum(1 for a in alpha if m(a))


def h_hat(alpha, W, full, m):
    N = n_nonzero(alpha, m)
    best = 0.0
    for beta in covers(W, full):
        if refines(beta, alpha) and n_nonzero(beta, m) <= N:
            best = max(best, h_star(beta, m))
    return best


def h_w(alpha, W, full, m, max_len=2):
    """inf over multisets of at most ``max_len`` covers of W."""
    pool = covers(W, full)
    hat = {b: h_hat(b, W, full, m) for b in pool}
    best = hat.get(frozenset(alpha), h_hat(alpha, W, full, m))
    for r in range(1, max_len + 1):
        for fam in combinations_with_replacement(pool, r):
            j = frozenset({frozenset(full)})
            for b in fam:
                j = join(j, b)
            if refines(j, alpha):
                best = min(best, sum(hat[b] for b in fam))
    return best


def min_subcover_size(alpha, full):
    alpha = list(alpha)
    for r in range(1, len(alpha) + 1):
        for c in combinations(alpha, r):
            if frozenset().union(*c) == frozenset(full):
                return r
    raise ValueError("not a cover")


def words(alphabet, forbidden, n):
    """All length-n words avoiding every forbidden word as a factor."""
    out = []
    for w in product(alphabet, repeat=n):
        s = "".join(w)
        if not any(f in s for f in forbidden):
            out.append(s)
    return out


def fibonacci(k):
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def markov_block_entropy(pi, P, n):
    """Entropy of the n-block distribution, by enumerating blocks."""
    k = len(pi)
    total = 0.0
    for w in product(range(k), repeat=n):
        p = Fraction(pi[w[0]])
        for x, y in zip(w, w[1:]):
            p *= Fraction(P[x][y])
        if p:
            total -= float(p) * math.log(float(p))
    return total


def spectral_radius(A):
    import numpy as np
    return max(abs(np.linalg.eigvals(np.array(A, dtype=float))))
