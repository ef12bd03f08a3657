"""Quantales built from finite topological spaces and finite commutative rings.

The continuous-function ring of a space is replaced by its finite analogue:
the ring ``F_q^k`` of all functions from the discrete ``k``-point space to
the prime field ``F_q``. Its idempotents ``e_i`` (indicator functions of the
points) sum to 1 and play the role of a partition of unity, which is what
makes the ``tau -| theta`` adjunction hold exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import config
from .errors import (
    NotAFunctionRing,
    NotALocale,
    NotAnIdeal,
    NotContinuous,
    NotARing,
    NotARingHom,
    NotATopology,
    NotSurjective,
    SizeCapExceeded,
    ValidationError,
)
from .lattice import Quantale, validate_quantale
from .morphisms import MonotoneMap

# ---------------------------------------------------------------- spaces


def _set_label(points: Sequence[str], s: Iterable[int]) -> str:
    return "{" + ",".join(points[i] for i in sorted(s)) + "}"


class FiniteSpace:
    """A finite topological space given by its list of open sets.

    Opens are stored as frozensets of point indices, sorted by size and then
    by their sorted index tuples; this order is also the element order of
    :func:`locale_of_space`.
    """

    def __init__(self, points: Sequence[str], opens: Iterable[Iterable], name: str = ""):
        self.points = tuple(points)
        self.name = name
        if len(set(self.points)) != len(self.points):
            raise ValidationError("duplicate point labels")
        pos = {p: i for i, p in enumerate(self.points)}
        found = set()
        for U in opens:
            idx = []
            for p in U:
                if isinstance(p, int) and not isinstance(p, bool):
                    if not 0 <= p < len(self.points):
                        raise ValidationError(f"point index {p} out of range")
                    idx.append(p)
                elif p in pos:
                    idx.append(pos[p])
                else:
                    raise ValidationError(f"unknown point {p!r}")
            found.add(frozenset(idx))
        whole = frozenset(range(len(self.points)))
        for must in (frozenset(), whole):
            if must not in found:
                raise NotATopology(
                    f"{_set_label(self.points, must)} must be open", witness=[_set_label(self.points, must)]
                )
        ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
        for A, B in itertools.combinations(ordered, 2):
            for C, op in ((A | B, "union"), (A & B, "intersection")):
                if C not in found:
                    raise NotATopology(
                        f"{op} of {_set_label(self.points, A)} and {_set_label(self.points, B)} is not open",
                        witness=[_set_label(self.points, A), _set_label(self.points, B)],
                    )
        self.opens: tuple[frozenset[int], ...] = tuple(ordered)
        self._open_index = {U: i for i, U in enumerate(self.opens)}
        self._locale: Quantale | None = None

    def __repr__(self) -> str:
        return f"FiniteSpace({list(self.points)!r}, {len(self.opens)} opens)"

    @property
    def n(self) -> int:
        return len(self.points)

    def open_index(self, U: Iterable[int]) -> int:
        return self._open_index[frozenset(U)]

    def open_label(self, U: Iterable[int]) -> str:
        return _set_label(self.points, U)

    def minimal_open(self, x: int) -> frozenset[int]:
        out = frozenset(range(self.n))
        for U in self.opens:
            if x in U:
                out &= U
        return out


def locale_of_space(X: FiniteSpace) -> Quantale:
    """``O(X)`` ordered by inclusion with intersection as multiplication (memoized per space)."""
    if X._locale is None:
        ops = X.opens
        idx = X._open_index
        labels = [X.open_label(U) for U in ops]
        leq = [[U <= V for V in ops] for U in ops]
        mul = [[idx[U & V] for V in ops] for U in ops]
        X._locale = validate_quantale(labels, leq, mul)
    return X._locale


def components(X: FiniteSpace, U: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of the subspace ``U``.

    Two points are adjacent when they are comparable in the specialization
    preorder (``y`` lies in the minimal open of ``x`` or vice versa); for
    finite spaces the components of this graph are the topological ones.
    """
    U = sorted(set(U))
    minimal = {x: X.minimal_open(x) for x in U}
    seen: set[int] = set()
    comps = []
    for start in U:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in U:
                if y not in seen and (y in minimal[x] or x in minimal[y]):
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


def discrete_space(k: int) -> FiniteSpace:
    pts = [f"x{i + 1}" for i in range(k)]
    subsets = [c for r in range(k + 1) for c in itertools.combinations(range(k), r)]
    return FiniteSpace(pts, subsets, name=f"discrete{k}")


def sierpinski_space() -> FiniteSpace:
    return FiniteSpace(["x", "y"], [[], ["x"], ["x", "y"]], name="sierpinski")


def pseudocircle() -> FiniteSpace:
    return FiniteSpace(
        ["a", "b", "c", "d"],
        [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a", "b", "c", "d"]],
        name="pseudocircle",
    )


def space_from_preorder(points: Sequence[str], leq: Sequence[Sequence[bool]], name: str = "") -> FiniteSpace:
    """Alexandrov space of a preorder: the opens are the down-closed sets.

    ``leq[x][y]`` means every open containing ``y`` contains ``x``.
    """
    n = len(points)
    opens = [
        [i for i in range(n) if bits >> i & 1]
        for bits in range(1 << n)
        if all(not (bits >> y & 1) or bits >> x & 1 for x in range(n) for y in range(n) if leq[x][y])
    ]
    return FiniteSpace(points, opens, name=name)


def preimage_map(X: FiniteSpace, Y: FiniteSpace, g: Sequence[int]) -> MonotoneMap:
    """``V -> g^{-1}(V)`` from ``O(Y)`` to ``O(X)`` for a continuous point map ``g: X -> Y``."""
    if len(g) != X.n or any(not 0 <= y < Y.n for y in g):
        raise ValidationError("point map does not send every point of the source into the target")
    table = []
    for V in Y.opens:
        pre = frozenset(x for x in range(X.n) if g[x] in V)
        if pre not in X._open_index:
            raise NotContinuous(f"preimage of {Y.open_label(V)} is not open", witness=Y.open_label(V))
        table.append(X.open_index(pre))
    return MonotoneMap(locale_of_space(Y), locale_of_space(X), table, name="preimage")


def all_topologies(n: int) -> list[FiniteSpace]:
    """Every topology on the points ``p1..pn`` (labelled, not up to homeomorphism)."""
    pts = [f"p{i + 1}" for i in range(n)]
    full = frozenset(range(n))
    middle = [frozenset(c) for r in range(1, n) for c in itertools.combinations(range(n), r)]
    out = []
    for bits in range(1 << len(middle)):
        fam = {frozenset(), full} | {s for i, s in enumerate(middle) if bits >> i & 1}
        if all(A | B in fam and A & B in fam for A in fam for B in fam):
            out.append(FiniteSpace(pts, [sorted(s) for s in fam], name=f"top{n}_{bits}"))
    return out


def space_of_locale(L: Quantale) -> tuple[FiniteSpace, list[int]]:
    """Realize a finite locale as ``O(X)`` (Birkhoff duality).

    Points are the join-irreducible elements, the open set attached to
    ``u`` is ``{p : p <= u}``. Returns the space and, for every element of
    ``L``, the index of its open set in ``space.opens``.
    """
    if not L.is_locale:
        raise NotALocale("multiplication is not the binary meet")
    jis = [
        p
        for p in L.elements
        if p != L.bottom and L.join(q for q in L.elements if L.lt(q, p)) != p
    ]
    sets = [frozenset(i for i, p in enumerate(jis) if L.leq[p][u]) for u in L.elements]
    if len(set(sets)) != L.n:  # pragma: no cover - a locale is distributive
        raise NotALocale("lattice is not distributive")
    X = FiniteSpace([L.label(p) for p in jis], [sorted(s) for s in sets], name=f"points({L.n})")
    return X, [X.open_index(s) for s in sets]


# ---------------------------------------------------------------- rings


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


class FiniteRing:
    """A finite commutative unital ring given by addition and multiplication tables."""

    def __init__(self, labels, add, mul, zero: int, one: int, name: str = "", check: bool = True):
        self.labels = tuple(labels)
        self.add = tuple(tuple(r) for r in add)
        self.mul = tuple(tuple(r) for r in mul)
        self.zero, self.one = zero, one
        self.name = name
        self.function_params: tuple[int, int] | None = None
        self.coords: list[tuple[int, ...]] | None = None
        n = len(self.labels)
        if n > config.RING_CAP:
            raise SizeCapExceeded(f"ring of order {n} exceeds the cap of {config.RING_CAP}", witness=n)
        if check:
            self._validate()
        self.neg = tuple(next(b for b in range(n) if self.add[a][b] == zero) for a in range(n))
        self._ideal_q = None

    def __repr__(self) -> str:
        return f"FiniteRing({self.name or '?'}, order={self.n})"

    @property
    def n(self) -> int:
        return len(self.labels)

    def _validate(self) -> None:
        n, A, M, L = self.n, self.add, self.mul, self.labels
        if len(A) != n or len(M) != n or any(len(r) != n for r in A + M):
            raise NotARing("tables must be n x n")
        if any(not 0 <= x < n for r in A + M for x in r):
            raise NotARing("table entry out of range")
        for a in range(n):
            if A[a][self.zero] != a:
                raise NotARing(f"{L[self.zero]} is not an additive identity", witness=(L[a],))
            if M[a][self.one] != a:
                raise NotARing(f"{L[self.one]} is not a multiplicative identity", witness=(L[a],))
            if not any(A[a][b] == self.zero for b in range(n)):
                raise NotARing(f"{L[a]} has no additive inverse", witness=(L[a],))
            for b in range(n):
                if A[a][b] != A[b][a] or M[a][b] != M[b][a]:
                    raise NotARing("ring is not commutative", witness=(L[a], L[b]))
        for a, b, c in itertools.product(range(n), repeat=3):
            if A[A[a][b]][c] != A[a][A[b][c]]:
                raise NotARing("addition is not associative", witness=(L[a], L[b], L[c]))
            if M[M[a][b]][c] != M[a][M[b][c]]:
                raise NotARing("multiplication is not associative", witness=(L[a], L[b], L[c]))
            if M[a][A[b][c]] != A[M[a][b]][M[a][c]]:
                raise NotARing("multiplication does not distribute", witness=(L[a], L[b], L[c]))

    def idempotents(self) -> list[int]:
        return [a for a in range(self.n) if self.mul[a][a] == a]


def zmod_ring(n: int) -> FiniteRing:
    if n < 1:
        raise ValueError("n must be positive")
    if n > config.RING_CAP:
        raise SizeCapExceeded(f"Z/{n} exceeds the ring cap of {config.RING_CAP}", witness=n)
    R = FiniteRing(
        [str(i) for i in range(n)],
        [[(a + b) % n for b in range(n)] for a in range(n)],
        [[(a * b) % n for b in range(n)] for a in range(n)],
        0,
        1 % n,
        name=f"zmod{n}",
        check=False,
    )
    return R


def function_ring(q: int, k: int) -> FiniteRing:
    """``F_q^k``: functions from the discrete ``k``-point space to ``F_q`` (q prime)."""
    if not _is_prime(q):
        raise ValueError(f"only prime fields are supported, got q={q}")
    if k < 1:
        raise ValueError("k must be positive")
    if q**k > config.RING_CAP:
        raise SizeCapExceeded(f"F_{q}^{k} has {q ** k} elements, cap is {config.RING_CAP}", witness=q**k)
    coords = list(itertools.product(range(q), repeat=k))
    pos = {c: i for i, c in enumerate(coords)}
    add = [[pos[tuple((x + y) % q for x, y in zip(a, b))] for b in coords] for a in coords]
    mul = [[pos[tuple((x * y) % q for x, y in zip(a, b))] for b in coords] for a in coords]
    labels = ["(" + ",".join(map(str, c)) + ")" for c in coords]
    R = FiniteRing(labels, add, mul, pos[(0,) * k], pos[(1,) * k], name=f"funring{q}x{k}", check=False)
    R.function_params = (q, k)
    R.coords = coords
    return R


@dataclass(frozen=True)
class Ideal:
    ring: FiniteRing
    elements: frozenset[int]

    def __le__(self, other: "Ideal") -> bool:
        return self.elements <= other.elements

    def __contains__(self, a: int) -> bool:
        return a in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __hash__(self) -> int:
        return hash(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and other.ring is self.ring and other.elements == self.elements


def additive_closure(R: FiniteRing, gens: Iterable[int]) -> frozenset[int]:
    gens = sorted(set(gens))
    seen = {R.zero}
    frontier = [R.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = R.add[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def ideal_generated(R: FiniteRing, gens: Iterable[int]) -> Ideal:
    gens = set(gens)
    return Ideal(R, additive_closure(R, {R.mul[r][g] for r in range(R.n) for g in gens}))


def check_ideal(R: FiniteRing, elements: Iterable[int]) -> Ideal:
    S = frozenset(elements)
    if R.zero not in S:
        raise NotAnIdeal("an ideal contains zero", witness=[])
    for a in S:
        for b in S:
            if R.add[a][b] not in S:
                raise NotAnIdeal("not closed under addition", witness=[R.labels[a], R.labels[b]])
        for r in range(R.n):
            if R.mul[r][a] not in S:
                raise NotAnIdeal("does not absorb multiplication", witness=[R.labels[r], R.labels[a]])
    return Ideal(R, S)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, additive_closure(I.ring, I.elements | J.elements))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    R = I.ring
    return Ideal(R, additive_closure(R, {R.mul[a][b] for a in I.elements for b in J.elements}))


def _ideal_label(R: FiniteRing, I: Ideal) -> str:
    for a in sorted(I.elements):
        if ideal_generated(R, [a]).elements == I.elements:
            return f"({R.labels[a]})"
    gens: list[int] = []
    cur = frozenset({R.zero})
    for a in sorted(I.elements):
        if a not in cur:
            gens.append(a)
            cur = ideal_generated(R, gens).elements
    return "(" + ",".join(R.labels[g] for g in gens) + ")"


def enumerate_ideals(R: FiniteRing) -> list[Ideal]:
    """All ideals, by breadth-first closure of principal ideals under sums."""
    found = {ideal_generated(R, [a]).elements for a in range(R.n)}
    frontier = list(found)
    principal = list(found)
    while frontier:
        nxt = []
        for I in frontier:
            for P in principal:
                S = additive_closure(R, I | P)
                if S not in found:
                    found.add(S)
                    nxt.append(S)
        frontier = nxt
    return [Ideal(R, S) for S in sorted(found, key=lambda s: (len(s), sorted(s)))]


def ideal_quantale(R: FiniteRing) -> tuple[Quantale, list[Ideal]]:
    """``I(R)``: inclusion order, sums as joins, ideal products as multiplication (memoized)."""
    if R._ideal_q is None:
        ideals = enumerate_ideals(R)
        if len(ideals) > config.SIZE_CAP:
            raise SizeCapExceeded(f"{len(ideals)} ideals exceed the cap", witness=len(ideals))
        pos = {I.elements: i for i, I in enumerate(ideals)}
        leq = [[I <= J for J in ideals] for I in ideals]
        mul = [[pos[ideal_product(I, J).elements] for J in ideals] for I in ideals]
        Q = validate_quantale([_ideal_label(R, I) for I in ideals], leq, mul)
        R._ideal_q = (Q, ideals)
    return R._ideal_q


def ideal_index(R: FiniteRing, I: Ideal | Iterable[int]) -> int:
    Q, ideals = ideal_quantale(R)
    S = I.elements if isinstance(I, Ideal) else frozenset(I)
    for i, J in enumerate(ideals):
        if J.elements == S:
            return i
    raise NotAnIdeal("not an ideal of the ring", witness=sorted(R.labels[a] for a in S))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def ideals_of_zmod(n: int) -> tuple[Quantale, list[int]]:
    """``I(Z/n)`` from divisors: ``(d)`` for ``d | n``, ordered by ideal size."""
    from math import gcd

    if n < 1:
        raise ValueError("n must be positive")
    divs = sorted(_divisors(n), reverse=True)
    pos = {d: i for i, d in enumerate(divs)}
    labels = ["(0)" if d == n and n > 1 else f"({d})" for d in divs]
    leq = [[a % b == 0 for b in divs] for a in divs]
    mul = [[pos[gcd(a * b, n)] for b in divs] for a in divs]
    return validate_quantale(labels, leq, mul), divs


# ---------------------------------------------------------------- tau and theta


def _require_function_ring(R: FiniteRing) -> tuple[int, int]:
    if R.function_params is None:
        raise NotAFunctionRing(f"{R!r} was not built by function_ring")
    return R.function_params


def tau(R: FiniteRing, I: Ideal) -> frozenset[int]:
    """Coordinates at which some member of ``I`` is nonzero."""
    _, k = _require_function_ring(R)
    return frozenset(i for i in range(k) if any(R.coords[f][i] for f in I.elements))


def vanishing_set(R: FiniteRing, U: Iterable[int]) -> frozenset[int]:
    _, k = _require_function_ring(R)
    U = set(U)
    return frozenset(f for f in range(R.n) if all(R.coords[f][i] == 0 for i in range(k) if i not in U))


def theta(R: FiniteRing, U: Iterable[int]) -> Ideal:
    """The ideal generated by the functions vanishing outside ``U``."""
    return ideal_generated(R, vanishing_set(R, U))


@dataclass
class TauTheta:
    ring: FiniteRing
    ideals: Quantale
    ideal_list: list[Ideal]
    space: FiniteSpace
    locale: Quantale
    tau: MonotoneMap
    theta: MonotoneMap


def tau_theta(R: FiniteRing, space: FiniteSpace | None = None) -> TauTheta:
    """The pair ``tau: I(R) -> O(X)`` and ``theta: O(X) -> I(R)`` as monotone maps."""
    _, k = _require_function_ring(R)
    X = space if space is not None else discrete_space(k)
    Q, ideals = ideal_quantale(R)
    L = locale_of_space(X)
    t = MonotoneMap(Q, L, [X.open_index(tau(R, I)) for I in ideals], name="tau")
    th = MonotoneMap(L, Q, [ideal_index(R, theta(R, U)) for U in X.opens], name="theta")
    return TauTheta(R, Q, ideals, X, L, t, th)


# ---------------------------------------------------------------- ring maps


class RingHom:
    def __init__(self, source: FiniteRing, target: FiniteRing, table: Sequence[int]):
        self.source, self.target = source, target
        self.table = tuple(table)
        S, T, f = source, target, self.table
        if len(f) != S.n or any(not 0 <= x < T.n for x in f):
            raise NotARingHom("table does not map source elements into the target")
        if f[S.one] != T.one:
            raise NotARingHom("does not preserve 1", witness=[S.labels[S.one]])
        for a in range(S.n):
            for b in range(S.n):
                if f[S.add[a][b]] != T.add[f[a]][f[b]]:
                    raise NotARingHom("does not preserve addition", witness=[S.labels[a], S.labels[b]])
                if f[S.mul[a][b]] != T.mul[f[a]][f[b]]:
                    raise NotARingHom("does not preserve multiplication", witness=[S.labels[a], S.labels[b]])

    def __call__(self, a: int) -> int:
        return self.table[a]

    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.n))

    def kernel(self) -> Ideal:
        return Ideal(self.source, frozenset(a for a in range(self.source.n) if self.table[a] == self.target.zero))


def quotient_ring(R: FiniteRing, I: Ideal) -> tuple[FiniteRing, RingHom]:
    """``R/I`` with cosets labelled by their smallest representative, and the quotient map."""
    cosets: list[frozenset[int]] = []
    which = {}
    for a in range(R.n):
        if a in which:
            continue
        c = frozenset(R.add[a][i] for i in I.elements)
        for x in c:
            which[x] = len(cosets)
        cosets.append(c)
    reps = [min(c) for c in cosets]
    add = [[which[R.add[a][b]] for b in reps] for a in reps]
    mul = [[which[R.mul[a][b]] for b in reps] for a in reps]
    labels = [f"[{R.labels[r]}]" for r in reps]
    S = FiniteRing(labels, add, mul, which[R.zero], which[R.one], name=f"{R.name}/I")
    return S, RingHom(R, S, [which[a] for a in range(R.n)])


def induced_surjection_morphism(f: RingHom) -> MonotoneMap:
    """``J -> <f(J)>`` from ``I(R)`` to ``I(S)`` for a surjective ring homomorphism."""
    if not f.is_surjective():
        missing = sorted(set(range(f.target.n)) - set(f.table))
        raise NotSurjective("ring homomorphism is not surjective", witness=[f.target.labels[m] for m in missing])
    QR, ideals_R = ideal_quantale(f.source)
    QS, _ = ideal_quantale(f.target)
    table = [ideal_index(f.target, ideal_generated(f.target, {f(a) for a in J.elements})) for J in ideals_R]
    return MonotoneMap(QR, QS, table, name="f*")
