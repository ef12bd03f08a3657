"""Abelian presheaves on finite quantales and the sheaf-condition checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .abgroups import TRIVIAL, FgAbGroup, GroupHom, block_hom, direct_sum, invariant_factors, subquotient
from .cech import Cover, enumerate_covers
from .errors import BadHomShape, PathDependence, RestrictionUnavailable, ValidationError
from .lattice import Quantale
from .morphisms import MonotoneMap
from .sources import FiniteSpace, components, locale_of_space, space_of_locale


class AbPresheaf:
    """Values ``F(u)`` and restrictions ``F(b) -> F(a)`` for every ``a <= b``.

    Build with :func:`build_presheaf` (Hasse-edge data) or one of the
    constructors below; all comparable-pair restrictions are cached.
    """

    def __init__(self, base: Quantale, values: Sequence[FgAbGroup], res: dict, name: str = ""):
        self.base = base
        self.values = list(values)
        self._res = res
        self.name = name
        self._sheaf_report: "SheafReport | None" = None

    def __repr__(self) -> str:
        return f"AbPresheaf({self.name or '?'} on {self.base.n} elements)"

    def value(self, u: int) -> FgAbGroup:
        return self.values[u]

    def res(self, a: int, b: int) -> GroupHom:
        """Restriction ``F(b) -> F(a)`` along ``a <= b``."""
        try:
            return self._res[a, b]
        except KeyError:
            raise RestrictionUnavailable(
                f"{self.base.label(a)} is not below {self.base.label(b)}",
                witness=(self.base.label(a), self.base.label(b)),
            ) from None

    def check_functorial(self) -> None:
        Q = self.base
        for b in Q.elements:
            for a in Q.elements:
                if not Q.lt(a, b):
                    continue
                for c in Q.elements:
                    if Q.lt(b, c) and self._res[a, c] != self._res[a, b].compose(self._res[b, c]):
                        raise PathDependence(
                            f"restriction {Q.label(c)} -> {Q.label(a)} differs from the composite through {Q.label(b)}",
                            witness=(Q.label(a), Q.label(b), Q.label(c)),
                        )

    def summary(self) -> dict:
        return {
            "name": self.name,
            "values": {self.base.label(u): self.values[u].to_list() for u in self.base.elements},
        }


def _from_function(base: Quantale, values: Sequence[FgAbGroup], res_fn: Callable[[int, int], GroupHom], name: str) -> AbPresheaf:
    res = {}
    for a in base.elements:
        for b in base.elements:
            if base.leq[a][b]:
                res[a, b] = GroupHom.identity(values[a]) if a == b else res_fn(a, b)
    return AbPresheaf(base, values, res, name)


def build_presheaf(
    base: Quantale,
    values: Sequence[FgAbGroup] | Mapping[str, FgAbGroup],
    hasse_res: Mapping[tuple, Any],
    name: str = "",
) -> AbPresheaf:
    """Presheaf from one restriction per Hasse edge ``(a, b)``, ``a`` covered by ``b``.

    ``hasse_res`` values are GroupHoms ``F(b) -> F(a)`` or plain matrices;
    keys may be indices or labels. Every way of composing edges between two
    comparable elements must give the same map.
    """
    Q = base
    if isinstance(values, Mapping):
        missing = [lab for lab in Q.labels if lab not in values]
        if missing:
            raise BadHomShape("missing values", witness=missing)
        vals = [values[lab] for lab in Q.labels]
    else:
        vals = list(values)
    if len(vals) != Q.n:
        raise BadHomShape(f"expected {Q.n} values, got {len(vals)}")

    def key(x):
        return Q.index(x) if isinstance(x, str) else x

    edges: dict[tuple[int, int], GroupHom] = {}
    for (a, b), h in hasse_res.items():
        a, b = key(a), key(b)
        if (a, b) not in Q.hasse_edges:
            raise BadHomShape(f"({Q.label(a)}, {Q.label(b)}) is not a Hasse edge", witness=(Q.label(a), Q.label(b)))
        if isinstance(h, GroupHom):
            if h.domain != vals[b] or h.codomain != vals[a]:
                raise BadHomShape("restriction endpoints do not match the values", witness=(Q.label(a), Q.label(b)))
        else:
            try:
                h = GroupHom(vals[b], vals[a], h)
            except ValidationError as exc:
                raise BadHomShape(
                    f"bad restriction {Q.label(b)} -> {Q.label(a)}: {exc}", witness=(Q.label(a), Q.label(b))
                ) from exc
        edges[a, b] = h
    for a, b in Q.hasse_edges:
        if (a, b) not in edges:
            raise BadHomShape(f"missing restriction for edge {Q.label(a)} < {Q.label(b)}", witness=(Q.label(a), Q.label(b)))

    res: dict[tuple[int, int], GroupHom] = {}
    via: dict[tuple[int, int], int] = {}

    def derive(a: int, b: int) -> GroupHom:
        if (a, b) in res:
            return res[a, b]
        if a == b:
            h = GroupHom.identity(vals[a])
        else:
            h = None
            for c in Q.elements:
                if (a, c) in edges and Q.leq[c][b]:
                    cand = edges[a, c].compose(derive(c, b))
                    if h is None:
                        h, via[a, b] = cand, c
                    elif cand != h:
                        raise PathDependence(
                            f"two paths {Q.label(b)} -> {Q.label(a)} (via {Q.label(via[a, b])} and via {Q.label(c)}) disagree",
                            witness=(Q.label(a), Q.label(b), Q.label(via[a, b]), Q.label(c)),
                        )
        res[a, b] = h
        return h

    for a in Q.elements:
        for b in Q.elements:
            if Q.leq[a][b]:
                derive(a, b)
    return AbPresheaf(Q, vals, res, name)


def constant_presheaf(base: Quantale, K: FgAbGroup, name: str = "") -> AbPresheaf:
    return _from_function(base, [K] * base.n, lambda a, b: GroupHom.identity(K), name or f"const({K})")


def _component_presheaf(base: Quantale, X: FiniteSpace, open_of: Sequence[int], K: FgAbGroup, name: str) -> AbPresheaf:
    comps = [components(X, X.opens[open_of[u]]) for u in base.elements]
    values = [direct_sum([K] * len(c))[0] for c in comps]
    k = K.ngens

    def res_fn(a: int, b: int) -> GroupHom:
        M = [[0] * values[b].ngens for _ in range(values[a].ngens)]
        for j, C in enumerate(comps[a]):
            i = next(i for i, D in enumerate(comps[b]) if C <= D)
            for t in range(k):
                M[j * k + t][i * k + t] = 1
        return GroupHom(values[b], values[a], M)

    return _from_function(base, values, res_fn, name)


def locally_constant_sheaf(X: FiniteSpace, K: FgAbGroup, name: str = "") -> AbPresheaf:
    """One copy of ``K`` per connected component; restriction copies along component inclusion."""
    L = locale_of_space(X)
    return _component_presheaf(L, X, list(L.elements), K, name or f"lc({K})")


def locally_constant_on_locale(L: Quantale, K: FgAbGroup, name: str = "") -> AbPresheaf:
    """The locally-constant sheaf on an abstract finite locale, through its space of points."""
    X, open_of = space_of_locale(L)
    return _component_presheaf(L, X, open_of, K, name or f"lc({K})")


def pullback_presheaf(F: AbPresheaf, f: MonotoneMap, name: str = "", check: bool = True) -> AbPresheaf:
    """``F o f`` on the source of ``f``."""
    if f.target is not F.base:
        raise ValidationError("map does not land in the base of the presheaf")
    values = [F.value(f(u)) for u in f.source.elements]
    P = _from_function(f.source, values, lambda a, b: F.res(f(a), f(b)), name or f"{F.name}*")
    if check:
        P.check_functorial()
    return P


# ---------------------------------------------------------------- sheaf condition


@dataclass
class CoverVerdict:
    base: str
    members: list[str]
    passed: bool
    kind: str | None = None
    witness: Any = None

    def as_dict(self) -> dict:
        d = {"element": self.base, "cover": self.members, "verdict": "pass" if self.passed else "fail"}
        if not self.passed:
            d["kind"] = self.kind
            d["witness"] = self.witness
        return d


@dataclass
class SheafReport:
    verdicts: list[CoverVerdict] = field(default_factory=list)

    @property
    def is_sheaf(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failures(self) -> list[CoverVerdict]:
        return [v for v in self.verdicts if not v.passed]

    def as_dict(self, full: bool = False) -> dict:
        d = {
            "is_sheaf": self.is_sheaf,
            "covers_checked": len(self.verdicts),
            "failures": [v.as_dict() for v in self.failures],
        }
        if full:
            d["verdicts"] = [v.as_dict() for v in self.verdicts]
        return d


def equalizer_maps(F: AbPresheaf, u: int, members: Sequence[int]) -> tuple[GroupHom, GroupHom]:
    """``e: F(u) -> prod F(u_i)`` and ``p - q: prod F(u_i) -> prod_{(i,j)} F(u_i * u_j)``."""
    Q = F.base
    prod_i, blocks_i = direct_sum([F.value(m) for m in members])
    e = block_hom(F.value(u), prod_i, [(0, F.value(u).ngens)], blocks_i, {(i, 0): (1, F.res(m, u)) for i, m in enumerate(members)})
    pairs = [(i, j) for i in range(len(members)) for j in range(len(members))]
    prods = [Q.mul[members[i]][members[j]] for i, j in pairs]
    prod_ij, blocks_ij = direct_sum([F.value(w) for w in prods])
    M = [[0] * prod_i.ngens for _ in range(prod_ij.ngens)]
    for k, ((i, j), w) in enumerate(zip(pairs, prods)):
        r0 = blocks_ij[k][0]
        for src, sign in ((i, 1), (j, -1)):
            h = F.res(w, members[src])
            c0 = blocks_i[src][0]
            for r, row in enumerate(h.matrix):
                for c, v in enumerate(row):
                    if v:
                        M[r0 + r][c0 + c] += sign * v
    return e, GroupHom(prod_i, prod_ij, M)


def _free_equalizer_ok(e: GroupHom, pq: GroupHom) -> bool:
    """Rank test for exactness of ``0 -> A -> B -> C`` when all three are free.

    ``e`` must be a split injection (all invariant factors 1) and
    ``rank B = rank A + rank(pq)``. A False answer means "use the general path".
    """
    if any(d for G in (e.domain, e.codomain, pq.codomain) for d in G.factors):
        return False
    n = e.domain.ngens
    if n:
        fe = invariant_factors(e.matrix, n)
        if len(fe) != n or any(d != 1 for d in fe):
            return False
    m = e.codomain.ngens
    rank_pq = len(invariant_factors(pq.matrix, m)) if m and pq.codomain.ngens else 0
    return m == n + rank_pq


def check_cover(F: AbPresheaf, cover: Cover) -> CoverVerdict:
    Q = F.base
    members = list(cover.members)
    e, pq = equalizer_maps(F, cover.base, members)
    labels = [Q.label(m) for m in members]
    if _free_equalizer_ok(e, pq):
        return CoverVerdict(Q.label(cover.base), labels, True)
    ker = subquotient(e, GroupHom.zero(TRIVIAL, e.domain))
    if not ker.group.is_trivial:
        return CoverVerdict(Q.label(cover.base), labels, False, "NotInjective", ker.generators[0])
    glue = subquotient(pq, e)
    if not glue.group.is_trivial:
        return CoverVerdict(Q.label(cover.base), labels, False, "NotExact", glue.generators[0])
    return CoverVerdict(Q.label(cover.base), labels, True)


def sheaf_check(F: AbPresheaf, covers: Sequence[Cover] | None = None, stop_at_first: bool = False) -> SheafReport:
    """Check the equalizer condition on the given covers, or on every cover of every element."""
    Q = F.base
    full = covers is None
    if full:
        cached = getattr(F, "_sheaf_report", None)
        if cached is not None:
            return cached
        covers = [C for u in Q.elements for C in enumerate_covers(Q, u)]
    report = SheafReport()
    for C in covers:
        v = check_cover(F, C)
        report.verdicts.append(v)
        if stop_at_first and not v.passed:
            return report
    if full:
        F._sheaf_report = report
    return report
