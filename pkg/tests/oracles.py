"""Brute-force reference computations, written without the package's linear algebra."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, prod


def bareiss_det(M):
    """Exact integer determinant by fraction-free elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def determinantal_factors(M, m, n):
    """Invariant factors d_1 | d_2 | ... from gcds of k x k minors (zeros past the rank dropped)."""
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, bareiss_det([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


def rank_q(M, ncols):
    """Rank over the rationals."""
    A = [[Fraction(x) for x in row] for row in M]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                t = A[i][c] / A[r][c]
                A[i] = [a - t * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def free_complex_cohomology(dims, mats):
    """``(rank, torsion factors)`` of every degree of a complex of free groups.

    ``mats[q]`` is the matrix of ``d^q: Z^dims[q] -> Z^dims[q+1]``.
    """
    out = []
    for q, n in enumerate(dims):
        r_out = rank_q(mats[q], n) if q < len(mats) and dims[q + 1] else 0
        if q > 0 and n and dims[q - 1]:
            prev = mats[q - 1]
            r_in = rank_q(prev, dims[q - 1])
            torsion = [d for d in determinantal_factors(prev, n, dims[q - 1]) if d > 1]
        else:
            r_in, torsion = 0, []
        out.append((n - r_out - r_in, torsion))
    return out


def group_signature(factors, bound):
    """``#{x : m x = 0}`` for m = 1..bound; determines a finite abelian group."""
    return [prod(gcd(m, d) for d in factors) for m in range(1, bound + 1)]


def coset_subquotient_signature(B, C, gmat, fmat, A_ngens):
    """Signature of ``ker g / im f`` by enumerating the elements of the finite group ``B``."""
    elements = list(itertools.product(*[range(b) for b in B]))

    def g(x):
        return tuple(sum(gmat[i][j] * x[j] for j in range(len(B))) % C[i] for i in range(len(C)))

    zero_c = tuple(0 for _ in C)
    ker = {x for x in elements if g(x) == zero_c}
    gens = [tuple(fmat[i][j] % B[i] for i in range(len(B))) for j in range(A_ngens)]
    image = {tuple(0 for _ in B)}
    frontier = list(image)
    while frontier:
        nxt = []
        for x in frontier:
            for v in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, v, B))
                if y not in image:
                    image.add(y)
                    nxt.append(y)
        frontier = nxt
    order = len(ker) // len(image)
    sig = []
    for m in range(1, order + 1):
        hits = sum(1 for x in ker if tuple(m * a % b for a, b in zip(x, B)) in image)
        sig.append(hits // len(image))
    return order, sig


def zmod_ideals_bruteforce(n):
    """All ideals of Z/n as frozensets, by testing every subset."""
    out = []
    for bits in range(1 << n):
        S = {a for a in range(n) if bits >> a & 1}
        if 0 not in S:
            continue
        if all((a + b) % n in S for a in S for b in S) and all((r * a) % n in S for a in S for r in range(n)):
            out.append(frozenset(S))
    return out


def subspace_components(opens, U):
    """Connected components of the subspace ``U`` by testing relatively clopen splits."""
    U = frozenset(U)
    rel = {frozenset(V & U) for V in opens}
    comps = []
    rest = set(U)
    while rest:
        x = min(rest)
        best = U
        for V in rel:
            if x in V and (U - V) in rel and len(V) < len(best):
                best = V
        comps.append(best)
        rest -= best
    return sorted(comps, key=min)


def random_finite_instance(rnd, max_order=200):
    """Random ``(B, C, g, A, f)`` with all groups finite, ``|B| <= max_order`` and ``g f = 0``."""
    from math import lcm

    while True:
        B = [rnd.randint(2, 6) for _ in range(rnd.randint(1, 4))]
        if prod(B) <= max_order:
            break
    C = [rnd.randint(2, 6) for _ in range(rnd.randint(1, 3))]
    g = [[rnd.randint(0, 3) * (c // gcd(b, c)) for b in B] for c in C]
    elements = list(itertools.product(*[range(b) for b in B]))
    ker = [x for x in elements if all(sum(g[i][j] * x[j] for j in range(len(B))) % C[i] == 0 for i in range(len(C)))]
    m = rnd.randint(0, 3)
    cols = [rnd.choice(ker) for _ in range(m)]
    f = [[cols[j][i] for j in range(m)] for i in range(len(B))]
    e = lcm(*B)
    A = [e] * m
    return B, C, g, A, f
