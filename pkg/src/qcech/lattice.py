"""Finite quantales given by explicit order and multiplication tables.

Elements are the integers ``0..n-1`` with string labels; the integer order
is the canonical total order used everywhere downstream (cover indexing,
sorting of tuples, choice of witnesses).

Only binary and empty joins are tabulated. A finite join is an iterated
binary join, so distributivity of the multiplication over binary joins and
over the empty join (``a*bot = bot*a = bot``) implies distributivity over
every subset; validation therefore checks exactly those two cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import config
from .errors import (
    NotALattice,
    NotAPartialOrder,
    NotAssociative,
    NotClosedUnderMul,
    NotCommutative,
    NotDistributive,
    SizeCapExceeded,
    ValidationError,
)
from .morphisms import MonotoneMap


@dataclass(frozen=True)
class QuantaleFlags:
    semicartesian: bool
    commutative: bool
    unital: bool
    idempotent: bool
    geometric: bool

    def as_dict(self) -> dict:
        return {
            "semicartesian": self.semicartesian,
            "commutative": self.commutative,
            "unital": self.unital,
            "idempotent": self.idempotent,
            "geometric": self.geometric,
        }


class Quantale:
    """A validated finite quantale. Build instances with :func:`validate_quantale`."""

    def __init__(self, labels, leq, mul, join2, bottom, top):
        self.labels: tuple[str, ...] = tuple(labels)
        self.leq: tuple[tuple[bool, ...], ...] = leq
        self.mul: tuple[tuple[int, ...], ...] = mul
        self.join2: tuple[tuple[int, ...], ...] = join2
        self.bottom: int = bottom
        self.top: int = top
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self) -> str:
        return f"Quantale(n={self.n}, labels={list(self.labels)!r})"

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(self.n)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq[a][b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def product(self, items: Iterable[int]) -> int:
        """Left-associated product; the empty product is ``top``."""
        it = iter(items)
        try:
            acc = next(it)
        except StopIteration:
            return self.top
        for x in it:
            acc = self.mul[acc][x]
        return acc

    def join(self, items: Iterable[int]) -> int:
        acc = self.bottom
        for x in items:
            acc = self.join2[acc][x]
        return acc

    def meet(self, a: int, b: int) -> int:
        return self.meet2[a][b]

    @cached_property
    def meet2(self) -> tuple[tuple[int, ...], ...]:
        # greatest lower bound = join of all lower bounds (finite complete lattice)
        n = self.n
        return tuple(
            tuple(self.join(c for c in range(n) if self.leq[c][a] and self.leq[c][b]) for b in range(n))
            for a in range(n)
        )

    def down(self, u: int) -> list[int]:
        return [w for w in range(self.n) if self.leq[w][u]]

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """Bitmask of ``{v : w <= v}`` for every ``w``."""
        return tuple(sum(1 << v for v in range(self.n) if self.leq[w][v]) for w in range(self.n))

    @cached_property
    def hasse_edges(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
        n = self.n
        edges = []
        for a in range(n):
            for b in range(n):
                if self.lt(a, b) and not any(self.lt(a, c) and self.lt(c, b) for c in range(n)):
                    edges.append((a, b))
        return tuple(edges)

    @cached_property
    def flags(self) -> QuantaleFlags:
        n, m, le = self.n, self.mul, self.leq
        semi = all(le[m[a][b]][a] and le[m[a][b]][b] for a in range(n) for b in range(n))
        comm = all(m[a][b] == m[b][a] for a in range(n) for b in range(a + 1, n))
        unital = all(m[self.top][a] == a and m[a][self.top] == a for a in range(n))
        idem = all(m[a][a] == a for a in range(n))
        approx = [idem_approx(self, q) for q in range(n)]
        geometric = approx[self.bottom] == self.bottom and all(
            approx[self.join2[a][b]] == self.join2[approx[a]][approx[b]]
            for a in range(n)
            for b in range(a + 1, n)
        )
        return QuantaleFlags(semi, comm, unital, idem, geometric)

    @cached_property
    def is_locale(self) -> bool:
        return all(self.mul[a][b] == self.meet2[a][b] for a in range(self.n) for b in range(self.n))

    def summary(self) -> dict:
        return {
            "elements": list(self.labels),
            "size": self.n,
            "bottom": self.labels[self.bottom],
            "top": self.labels[self.top],
            "flags": self.flags.as_dict(),
            "locale": self.is_locale,
        }


def order_from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> list[list[bool]]:
    """Reflexive-transitive closure of the relation given by ``(a, b)`` meaning ``a <= b``."""
    rel = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        rel[a][b] = True
    for k in range(n):
        rk = rel[k]
        for i in range(n):
            if rel[i][k]:
                ri = rel[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return rel


def validate_quantale(
    labels: Sequence[str],
    leq: Sequence[Sequence[bool]],
    mul: Sequence[Sequence[int]],
    cap: int | None = None,
) -> Quantale:
    """Check every quantale axiom and return the validated structure.

    ``leq[a][b]`` states ``a <= b``; ``mul[a][b]`` is the index of ``a * b``.
    """
    cap = config.SIZE_CAP if cap is None else cap
    n = len(labels)
    if n == 0:
        raise NotALattice("a complete lattice has at least one element (the empty join)", witness=())
    if n > cap:
        raise SizeCapExceeded(f"{n} elements exceeds the cap of {cap}", witness=n)
    if len(set(labels)) != n:
        raise ValidationError("duplicate element labels", witness=sorted(labels))
    if len(leq) != n or any(len(row) != n for row in leq):
        raise ValidationError("order relation must be an n x n table")
    if len(mul) != n or any(len(row) != n for row in mul):
        raise ValidationError("multiplication must be an n x n table")
    for row in mul:
        for x in row:
            if not (isinstance(x, int) and 0 <= x < n):
                raise ValidationError("multiplication table entry out of range", witness=x)

    le = tuple(tuple(bool(x) for x in row) for row in leq)
    lab = list(labels)
    for a in range(n):
        if not le[a][a]:
            raise NotAPartialOrder(f"not reflexive at {lab[a]}", witness=(lab[a],))
    for a in range(n):
        for b in range(a + 1, n):
            if le[a][b] and le[b][a]:
                raise NotAPartialOrder(
                    f"not antisymmetric: {lab[a]} <= {lab[b]} <= {lab[a]}", witness=(lab[a], lab[b])
                )
    for a, b, c in itertools.product(range(n), repeat=3):
        if le[a][b] and le[b][c] and not le[a][c]:
            raise NotAPartialOrder(
                f"not transitive: {lab[a]} <= {lab[b]} <= {lab[c]}", witness=(lab[a], lab[b], lab[c])
            )

    bottoms = [b for b in range(n) if all(le[b][x] for x in range(n))]
    if not bottoms:
        raise NotALattice("the empty set has no join (no bottom element)", witness=())
    bottom = bottoms[0]
    join2 = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ub = [c for c in range(n) if le[a][c] and le[b][c]]
            least = [c for c in ub if all(le[c][d] for d in ub)]
            if not least:
                raise NotALattice(f"{{{lab[a]}, {lab[b]}}} has no join", witness=(lab[a], lab[b]))
            join2[a][b] = join2[b][a] = least[0]
    top = bottom
    for x in range(n):
        top = join2[top][x]

    m = tuple(tuple(row) for row in mul)
    for a, b, c in itertools.product(range(n), repeat=3):
        if m[m[a][b]][c] != m[a][m[b][c]]:
            raise NotAssociative(
                f"({lab[a]}*{lab[b]})*{lab[c]} != {lab[a]}*({lab[b]}*{lab[c]})",
                witness=(lab[a], lab[b], lab[c]),
            )
    for a in range(n):
        if m[a][bottom] != bottom or m[bottom][a] != bottom:
            raise NotDistributive(
                f"multiplication by {lab[a]} does not preserve the empty join", witness=(lab[a], ())
            )
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                j = join2[b][c]
                if m[a][j] != join2[m[a][b]][m[a][c]]:
                    raise NotDistributive(
                        f"{lab[a]}*({lab[b]} v {lab[c]}) != {lab[a]}*{lab[b]} v {lab[a]}*{lab[c]}",
                        witness=(lab[a], (lab[b], lab[c]), "left"),
                    )
                if m[j][a] != join2[m[b][a]][m[c][a]]:
                    raise NotDistributive(
                        f"({lab[b]} v {lab[c]})*{lab[a]} != {lab[b]}*{lab[a]} v {lab[c]}*{lab[a]}",
                        witness=(lab[a], (lab[b], lab[c]), "right"),
                    )
    return Quantale(lab, le, m, tuple(tuple(r) for r in join2), bottom, top)


def join(Q: Quantale, S: Iterable[int]) -> int:
    return Q.join(S)


def idempotents(Q: Quantale) -> list[int]:
    return [p for p in Q.elements if Q.mul[p][p] == p]


def idem_approx(Q: Quantale, q: int) -> int:
    """Join of all idempotents ``p`` with ``p <= q * p``."""
    return Q.join(p for p in Q.elements if Q.mul[p][p] == p and Q.leq[p][Q.mul[q][p]])


def _require_comm_semicartesian(Q: Quantale) -> None:
    if not Q.flags.commutative:
        a, b = next(
            (a, b) for a in Q.elements for b in Q.elements if Q.mul[a][b] != Q.mul[b][a]
        )
        raise NotCommutative(
            f"{Q.label(a)}*{Q.label(b)} != {Q.label(b)}*{Q.label(a)}", witness=(Q.label(a), Q.label(b))
        )
    if not Q.flags.semicartesian:
        raise ValidationError("quantale is not semicartesian")


def _subquantale(Q: Quantale, keep: list[int]) -> Quantale:
    pos = {x: i for i, x in enumerate(keep)}
    for a in keep:
        for b in keep:
            if Q.mul[a][b] not in pos:
                raise NotClosedUnderMul(
                    f"{Q.label(a)}*{Q.label(b)} = {Q.label(Q.mul[a][b])} leaves the subset",
                    witness=(Q.label(a), Q.label(b), Q.label(Q.mul[a][b])),
                )
    leq = [[Q.leq[a][b] for b in keep] for a in keep]
    mul = [[pos[Q.mul[a][b]] for b in keep] for a in keep]
    return validate_quantale([Q.label(x) for x in keep], leq, mul)


def idem_locale(Q: Quantale) -> tuple[Quantale, MonotoneMap]:
    """The locale of idempotents with the restricted multiplication, plus its inclusion."""
    _require_comm_semicartesian(Q)
    keep = idempotents(Q)
    sub = _subquantale(Q, keep)
    return sub, MonotoneMap(sub, Q, keep)


def idem_mul_is_meet(Q: Quantale) -> tuple[bool, tuple[str, str] | None]:
    """Whether the restricted multiplication on idempotents equals their meet in ``Q``."""
    ids = idempotents(Q)
    for a in ids:
        for b in ids:
            if Q.mul[a][b] != Q.meet(a, b):
                return False, (Q.label(a), Q.label(b))
    return True, None


def approximation_map(Q: Quantale) -> tuple[Quantale, MonotoneMap]:
    """The idempotent approximation ``q -> q^-`` as a map ``Q -> Idem(Q)``."""
    sub, inc = idem_locale(Q)
    pos = {x: i for i, x in enumerate(inc.table)}
    return sub, MonotoneMap(Q, sub, [pos[idem_approx(Q, q)] for q in Q.elements])


def product_quantale(Q1: Quantale, Q2: Quantale, cap: int | None = None) -> tuple[Quantale, tuple[MonotoneMap, MonotoneMap]]:
    cap = config.SIZE_CAP if cap is None else cap
    n1, n2 = Q1.n, Q2.n
    if n1 * n2 > cap:
        raise SizeCapExceeded(f"product has {n1 * n2} elements, cap is {cap}", witness=n1 * n2)
    pairs = [(a, b) for a in range(n1) for b in range(n2)]
    labels = [f"({Q1.label(a)},{Q2.label(b)})" for a, b in pairs]
    leq = [[Q1.leq[a][c] and Q2.leq[b][d] for c, d in pairs] for a, b in pairs]
    mul = [[Q1.mul[a][c] * n2 + Q2.mul[b][d] for c, d in pairs] for a, b in pairs]
    P = validate_quantale(labels, leq, mul, cap=cap)
    p1 = MonotoneMap(P, Q1, [a for a, _ in pairs])
    p2 = MonotoneMap(P, Q2, [b for _, b in pairs])
    return P, (p1, p2)


def interval_quantale(Q: Quantale, a: int) -> tuple[Quantale, MonotoneMap]:
    """The sub-quantale ``[a^-, top]`` with inherited operations and its inclusion."""
    _require_comm_semicartesian(Q)
    lo = idem_approx(Q, a)
    keep = [x for x in Q.elements if Q.leq[lo][x]]
    sub = _subquantale(Q, keep)
    return sub, MonotoneMap(sub, Q, keep)


def chain(n: int, mul: str = "meet") -> Quantale:
    """The ``n``-element chain ``c0 < c1 < ...`` with multiplication ``meet``."""
    labels = [f"c{i}" for i in range(n)]
    leq = [[i <= j for j in range(n)] for i in range(n)]
    if mul != "meet":
        raise ValueError(f"unsupported chain multiplication {mul!r}")
    return validate_quantale(labels, leq, [[min(i, j) for j in range(n)] for i in range(n)])


def find_isomorphism(Q1: Quantale, Q2: Quantale) -> list[int] | None:
    """Search for an order- and multiplication-preserving bijection ``Q1 -> Q2``."""
    n = Q1.n
    if n != Q2.n:
        return None

    def sig(Q, x):
        return (sum(Q.leq[x]), sum(row[x] for row in Q.leq), Q.mul[x][x] == x)

    cand = [[y for y in range(n) if sig(Q2, y) == sig(Q1, x)] for x in range(n)]
    assign: list[int] = []
    used: set[int] = set()

    def ok(x: int, y: int) -> bool:
        for x2, y2 in enumerate(assign):
            if Q1.leq[x][x2] != Q2.leq[y][y2] or Q1.leq[x2][x] != Q2.leq[y2][y]:
                return False
        return True

    def extend() -> bool:
        x = len(assign)
        if x == n:
            return all(
                Q2.mul[assign[a]][assign[b]] == assign[Q1.mul[a][b]] for a in range(n) for b in range(n)
            )
        for y in cand[x]:
            if y not in used and ok(x, y):
                assign.append(y)
                used.add(y)
                if extend():
                    return True
                assign.pop()
                used.discard(y)
        return False

    return list(assign) if extend() else None
