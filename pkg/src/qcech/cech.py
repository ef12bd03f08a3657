"""Cech cochain complexes of covers in a quantale, refinement maps, and the
cohomology of an element.

The degree-q cochain group of a family ``u_0, ..., u_{N-1}`` is the direct
sum, over strictly increasing index tuples ``i_0 < ... < i_q``, of
``F(u_{i_0} * ... * u_{i_q})``. Products are taken left to right in
ascending index order.

Covers are canonicalized to duplicate-free, sorted member sets with the
bottom element removed. This does not change the colimit: a family and its
underlying set refine each other (send each index to any index with the same
member, and back), and so do a family with and without bottom members, so
they have the same image in the directed system.

Element cohomology is the colimit over all covers ordered by refinement.
For a finite element the covers form a finite preorder, which is directed
exactly when it has a greatest class: a cover refining every other cover.
The colimit of a directed system indexed by a preorder with a terminal
object is the value there, so we locate such a cover and compute its
cohomology. If none exists the preorder is not directed and
:class:`~qcech.errors.NotDirected` is raised with a pair of covers that have
no common refinement.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from . import config
from .abgroups import FgAbGroup, GroupHom, IntComplex, Subquotient, direct_sum, induced_map
from .errors import (
    InvalidWitness,
    NotACover,
    NotDirected,
    ProductNotACover,
    SizeCapExceeded,
    ValidationError,
)
from .lattice import Quantale

if TYPE_CHECKING:
    from .presheaf import AbPresheaf


@dataclass(frozen=True)
class Cover:
    quantale: Quantale = field(repr=False, compare=False)
    base: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [self.quantale.label(m) for m in self.members]

    def as_dict(self) -> dict:
        return {"element": self.quantale.label(self.base), "members": self.labels()}


def make_cover(Q: Quantale, u: int, members: Sequence[int]) -> Cover:
    """Sort, deduplicate and drop bottom (unless ``u`` is bottom); check the join is ``u``."""
    ms = sorted(set(members))
    if u != Q.bottom:
        ms = [m for m in ms if m != Q.bottom]
    j = Q.join(ms)
    if j != u:
        raise NotACover(
            f"join of {[Q.label(m) for m in ms]} is {Q.label(j)}, not {Q.label(u)}", witness=Q.label(j)
        )
    return Cover(Q, u, tuple(ms))


def _cover_masks(Q: Quantale, u: int, cap: int | None):
    cap = config.COVER_CAP if cap is None else cap
    cand = [w for w in Q.down(u) if w != Q.bottom]
    if len(cand) + 1 > cap:
        raise SizeCapExceeded(
            f"{Q.label(u)} has {len(cand) + 1} elements below it, cover cap is {cap}", witness=len(cand) + 1
        )
    m = len(cand)
    joins = [Q.bottom] * (1 << m)
    masks = []
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        joins[mask] = Q.join2[joins[mask & (mask - 1)]][cand[low]]
        if joins[mask] == u:
            masks.append(mask)
    return cand, masks


def _mask_members(cand: list[int], mask: int) -> tuple[int, ...]:
    return tuple(c for i, c in enumerate(cand) if mask >> i & 1)


def enumerate_covers(Q: Quantale, u: int, cap: int | None = None) -> list[Cover]:
    """Every canonical cover of ``u``, ordered by size and then members.

    The bottom element is covered by the empty family and by ``{bottom}``.
    """
    if u == Q.bottom:
        return [Cover(Q, u, ()), Cover(Q, u, (u,))]
    cand, masks = _cover_masks(Q, u, cap)
    covers = [Cover(Q, u, _mask_members(cand, mk)) for mk in masks]
    covers.sort(key=lambda C: (len(C.members), C.members))
    return covers


def refines(U: Cover, V: Cover) -> bool:
    Q = U.quantale
    return all(any(Q.leq[a][b] for b in V.members) for a in U.members)


# ---------------------------------------------------------------- complexes


def tuple_product(Q: Quantale, cover: Cover, idx: Sequence[int]) -> int:
    """Left-associated product of the members at a strictly increasing index tuple."""
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"index tuple {tuple(idx)} is not strictly increasing")
    return Q.product(cover.members[i] for i in idx)


@dataclass
class CechComplex:
    quantale: Quantale
    members: tuple[int, ...]
    tuples: list[list[tuple[int, ...]]]
    products: list[list[int]]
    blocks: list[list[tuple[int, int]]]
    complex: IntComplex

    def as_dict(self) -> dict:
        return {
            "groups": [G.to_list() for G in self.complex.groups],
            "differentials": [d.matrix for d in self.complex.differentials],
        }


def family_complex(Q: Quantale, members: Sequence[int], F: "AbPresheaf") -> CechComplex:
    """Cech complex of an indexed family (kept in the given order, repeats allowed)."""
    if F.base is not Q:
        raise ValidationError("presheaf lives on a different quantale")
    if not Q.flags.commutative:
        warnings.warn("Cech complexes over a non-commutative quantale use ascending-index products", stacklevel=2)
    N = len(members)
    tuples = [list(itertools.combinations(range(N), q + 1)) for q in range(N)]
    products = [[Q.product(members[i] for i in t) for t in ts] for ts in tuples]
    groups, blocks = [], []
    for q in range(N):
        G, bl = direct_sum([F.value(w) for w in products[q]])
        groups.append(G)
        blocks.append(bl)
    diffs = []
    for q in range(N - 1):
        pos = {t: i for i, t in enumerate(tuples[q])}
        M = [[0] * groups[q].ngens for _ in range(groups[q + 1].ngens)]
        for ti, t in enumerate(tuples[q + 1]):
            r0 = blocks[q + 1][ti][0]
            for k in range(q + 2):
                fi = pos[t[:k] + t[k + 1 :]]
                h = F.res(products[q + 1][ti], products[q][fi])
                c0 = blocks[q][fi][0]
                sign = -1 if k % 2 else 1
                for r, row in enumerate(h.matrix):
                    Mr = M[r0 + r]
                    for c, v in enumerate(row):
                        if v:
                            Mr[c0 + c] += sign * v
        diffs.append(GroupHom(groups[q], groups[q + 1], M))
    return CechComplex(Q, tuple(members), tuples, products, blocks, IntComplex(groups, diffs))


def build_complex(cover: Cover, F: "AbPresheaf") -> CechComplex:
    return family_complex(cover.quantale, cover.members, F)


@dataclass
class CohomologyResult:
    groups: list[FgAbGroup]
    subquotients: list[Subquotient] = field(repr=False)
    cover: Cover
    complex: CechComplex = field(repr=False)
    cover_count: int | None = None

    def factor_lists(self) -> list[list[int]]:
        return [G.to_list() for G in self.groups]

    def as_dict(self) -> dict:
        d = {
            "degrees": {str(q): G.to_list() for q, G in enumerate(self.groups)},
            "groups": [str(G) for G in self.groups],
            "cover": self.cover.labels(),
        }
        if self.cover_count is not None:
            d["cover_count"] = self.cover_count
        return d


def _complex_cohomology(cx: CechComplex, cover: Cover, q_max: int | None) -> CohomologyResult:
    if q_max is None:
        q_max = max(len(cx.members) - 1, 0)
    sqs = [cx.complex.cohomology(q) for q in range(q_max + 1)]
    return CohomologyResult([sq.group for sq in sqs], sqs, cover, cx)


def cover_cohomology(cover: Cover, F: "AbPresheaf", q_max: int | None = None) -> CohomologyResult:
    return _complex_cohomology(build_complex(cover, F), cover, q_max)


# ---------------------------------------------------------------- refinement


@dataclass(frozen=True)
class RefinementWitness:
    """``r`` sends member ``i`` of ``refining`` to a member ``r[i]`` of ``refined`` above it."""

    refining: Cover
    refined: Cover
    r: tuple[int, ...]

    def __post_init__(self):
        U, V, Q = self.refining, self.refined, self.refining.quantale
        if U.base != V.base or V.quantale is not Q:
            raise InvalidWitness("covers of different elements")
        if len(self.r) != len(U.members):
            raise InvalidWitness("witness must assign every member", witness=list(self.r))
        for i, j in enumerate(self.r):
            if not (0 <= j < len(V.members)) or not Q.leq[U.members[i]][V.members[j]]:
                raise InvalidWitness(f"member {i} is not below its assigned member", witness=(i, j))


def find_refinement(U: Cover, V: Cover) -> RefinementWitness | None:
    """Canonical witness: each member goes to the lowest-index member above it."""
    Q = U.quantale
    r = []
    for a in U.members:
        j = next((j for j, b in enumerate(V.members) if Q.leq[a][b]), None)
        if j is None:
            return None
        r.append(j)
    return RefinementWitness(U, V, tuple(r))


def all_refinement_witnesses(U: Cover, V: Cover, cap: int | None = None) -> list[RefinementWitness]:
    cap = config.WITNESS_CAP if cap is None else cap
    Q = U.quantale
    options = [[j for j, b in enumerate(V.members) if Q.leq[a][b]] for a in U.members]
    total = 1
    for o in options:
        total *= len(o)
    if total > cap:
        raise SizeCapExceeded(f"{total} refinement witnesses exceed the cap of {cap}", witness=total)
    return [RefinementWitness(U, V, r) for r in itertools.product(*options)]


def _sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign of the sorting permutation and the sorted tuple, or ``None`` on repeats."""
    if len(set(seq)) != len(seq):
        return None
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def refinement_map(
    w: RefinementWitness,
    F: "AbPresheaf",
    cx_refining: CechComplex | None = None,
    cx_refined: CechComplex | None = None,
) -> list[GroupHom]:
    """Cochain map ``C(refined) -> C(refining)`` of the witness, verified against the differentials.

    A refining tuple whose image under ``r`` repeats an index gets zero;
    otherwise the component is the sorted image cochain times the sign of
    the sorting permutation, restricted to the refining product.
    """
    cu = cx_refining or build_complex(w.refining, F)
    cv = cx_refined or build_complex(w.refined, F)
    maps = []
    for q in range(len(cu.tuples)):
        dom = cv.complex.group(q)
        cod = cu.complex.group(q)
        M = [[0] * dom.ngens for _ in range(cod.ngens)]
        if q < len(cv.tuples):
            vpos = {t: i for i, t in enumerate(cv.tuples[q])}
            for ti, t in enumerate(cu.tuples[q]):
                ss = _sort_sign([w.r[i] for i in t])
                if ss is None:
                    continue
                sign, s = ss
                vi = vpos[s]
                h = F.res(cu.products[q][ti], cv.products[q][vi])
                r0, c0 = cu.blocks[q][ti][0], cv.blocks[q][vi][0]
                for r, row in enumerate(h.matrix):
                    for c, v in enumerate(row):
                        if v:
                            M[r0 + r][c0 + c] += sign * v
        maps.append(GroupHom(dom, cod, M))
    for q in range(len(maps)):
        lhs = cu.complex.d(q).compose(maps[q])
        nxt = maps[q + 1] if q + 1 < len(maps) else GroupHom.zero(cv.complex.group(q + 1), cu.complex.group(q + 1))
        rhs = nxt.compose(cv.complex.d(q))
        if lhs != rhs:  # pragma: no cover - the alternating extension is a cochain map
            raise InvalidWitness(f"refinement map does not commute with d^{q}", witness=q)
    return maps


def induced_cohomology_map(
    w: RefinementWitness,
    F: "AbPresheaf",
    q_max: int | None = None,
    res_refining: CohomologyResult | None = None,
    res_refined: CohomologyResult | None = None,
) -> list[GroupHom]:
    """Maps ``H^q(refined) -> H^q(refining)`` in canonical coordinates, ``q = 0..q_max``."""
    if q_max is None:
        q_max = max(len(w.refining) - 1, len(w.refined) - 1, 0)
    ru = res_refining or cover_cohomology(w.refining, F, q_max)
    rv = res_refined or cover_cohomology(w.refined, F, q_max)
    chain_maps = refinement_map(w, F, ru.complex, rv.complex)
    out = []
    for q in range(q_max + 1):
        sv = rv.subquotients[q] if q < len(rv.subquotients) else rv.complex.complex.cohomology(q)
        su = ru.subquotients[q] if q < len(ru.subquotients) else ru.complex.complex.cohomology(q)
        h = chain_maps[q] if q < len(chain_maps) else GroupHom.zero(sv.ambient, su.ambient)
        out.append(induced_map(h, sv, su))
    return out


@dataclass
class HomotopyCheck:
    ok: bool
    witnesses: int
    differing: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    degree: int | None = None


def homotopy_uniqueness_check(
    U: Cover,
    V: Cover,
    F: "AbPresheaf",
    cap: int | None = None,
    q_max: int | None = None,
    res_u: CohomologyResult | None = None,
    res_v: CohomologyResult | None = None,
) -> HomotopyCheck:
    """All refinement witnesses ``U -> V`` induce the same maps on cohomology.

    Precomputed results for ``U`` and ``V`` may be passed; they must cover
    degrees ``0..q_max``.
    """
    ws = all_refinement_witnesses(U, V, cap)
    if len(ws) < 2:
        return HomotopyCheck(True, len(ws))
    if q_max is None:
        q_max = max(len(U) - 1, len(V) - 1, 0)
    ru = res_u or cover_cohomology(U, F, q_max)
    rv = res_v or cover_cohomology(V, F, q_max)
    first = induced_cohomology_map(ws[0], F, q_max, ru, rv)
    for w in ws[1:]:
        other = induced_cohomology_map(w, F, q_max, ru, rv)
        for q, (a, b) in enumerate(zip(first, other)):
            if a != b:
                return HomotopyCheck(False, len(ws), (ws[0].r, w.r), q)
    return HomotopyCheck(True, len(ws))


def common_refinement(U: Cover, V: Cover) -> tuple[Cover, RefinementWitness, RefinementWitness]:
    """The cover of pairwise products, with witnesses into both covers."""
    Q = U.quantale
    if U.base != V.base or V.quantale is not Q:
        raise ValidationError("covers of different elements")
    prods = sorted({Q.mul[a][b] for a in U.members for b in V.members})
    try:
        W = make_cover(Q, U.base, prods)
    except NotACover as exc:
        raise ProductNotACover(
            f"pairwise products join to {exc.witness}, not {Q.label(U.base)}", witness=exc.witness
        ) from exc
    wu, wv = find_refinement(W, U), find_refinement(W, V)
    if wu is None or wv is None:  # pragma: no cover - semicartesian products lie below their factors
        raise ProductNotACover("pairwise products do not refine both covers")
    return W, wu, wv


# ---------------------------------------------------------------- element cohomology


@dataclass
class TerminalCovers:
    terminal: Cover
    largest: Cover
    cover_count: int


def terminal_covers(Q: Quantale, u: int, cap: int | None = None) -> TerminalCovers:
    """Locate covers of ``u`` that refine every cover of ``u``.

    An element lies in some member of every cover iff it is "small"; the
    small elements form the largest terminal cover, and dropping those that
    are joins of strictly smaller small elements leaves the irredundant one.
    """
    if u == Q.bottom:
        empty = Cover(Q, u, ())
        return TerminalCovers(empty, empty, 2)
    cand, masks = _cover_masks(Q, u, cap)
    pos_mask = [sum(1 << i for i, c in enumerate(cand) if Q.leq[w][c]) for w in cand]
    small = [w for i, w in enumerate(cand) if all(mk & pos_mask[i] for mk in masks)]
    if Q.join(small) != u:
        raise NotDirected(
            f"covers of {Q.label(u)} have no common refinement",
            witness=_non_directed_pair(Q, u, cand, masks),
        )
    irredundant = [w for w in small if Q.join(s for s in small if Q.lt(s, w)) != w]
    return TerminalCovers(Cover(Q, u, tuple(irredundant)), Cover(Q, u, tuple(small)), len(masks))


def _non_directed_pair(Q: Quantale, u: int, cand: list[int], masks: list[int]):
    below = [sum(1 << i for i, c in enumerate(cand) if Q.leq[c][cand[j]]) for j in range(len(cand))]

    def down_mask(mask: int) -> int:
        out = 0
        for j in range(len(cand)):
            if mask >> j & 1:
                out |= below[j]
        return out

    downs = [down_mask(mk) for mk in masks]
    for a, b in itertools.combinations(range(len(masks)), 2):
        common = downs[a] & downs[b]
        if Q.join(_mask_members(cand, common)) != u:
            return [
                [Q.label(x) for x in _mask_members(cand, masks[a])],
                [Q.label(x) for x in _mask_members(cand, masks[b])],
            ]
    return None  # pragma: no cover - a finite preorder without a top has such a pair


def element_cohomology(
    Q: Quantale, u: int, F: "AbPresheaf", q_max: int | None = None, cap: int | None = None
) -> CohomologyResult:
    tc = terminal_covers(Q, u, cap)
    res = cover_cohomology(tc.terminal, F, q_max)
    res.cover_count = tc.cover_count
    return res
