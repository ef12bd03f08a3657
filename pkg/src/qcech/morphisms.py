"""Monotone maps between finite quantales, computed right adjoints, and
certificates for (strong) geometric morphisms.

A map in this module is always named by the direction it actually goes:
an inverse image ``f*`` from ``Q'`` to ``Q`` is a ``MonotoneMap`` with
``source = Q'`` and ``target = Q``. Its direct image is obtained with
:func:`right_adjoint` and is never supplied by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Sequence

from .errors import DoesNotPreserveJoins, NotMonotone, ValidationError

if TYPE_CHECKING:
    from .cech import Cover
    from .lattice import Quantale


class MonotoneMap:
    """An order-preserving map given by its table ``source index -> target index``."""

    def __init__(self, source: "Quantale", target: "Quantale", table: Sequence[int], name: str = ""):
        self.source = source
        self.target = target
        self.table: tuple[int, ...] = tuple(table)
        self.name = name
        if len(self.table) != source.n:
            raise ValidationError(f"map table has {len(self.table)} entries, source has {source.n}")
        for x in self.table:
            if not (0 <= x < target.n):
                raise ValidationError("map value out of range", witness=x)
        for a in source.elements:
            for b in source.elements:
                if source.leq[a][b] and not target.leq[self.table[a]][self.table[b]]:
                    raise NotMonotone(
                        f"{source.label(a)} <= {source.label(b)} but images are not ordered",
                        witness=(source.label(a), source.label(b)),
                    )

    def __call__(self, a: int) -> int:
        return self.table[a]

    def __repr__(self) -> str:
        return f"MonotoneMap({self.name or '?'}: {self.source.n} -> {self.target.n})"

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        """``self o inner``."""
        if inner.target is not self.source:
            raise ValidationError("maps are not composable")
        return MonotoneMap(inner.source, self.target, [self.table[x] for x in inner.table])

    def is_surjective(self) -> bool:
        return set(self.table) == set(self.target.elements)

    def as_pairs(self) -> list[list[str]]:
        return [[self.source.label(a), self.target.label(b)] for a, b in enumerate(self.table)]


def identity_map(Q: "Quantale") -> MonotoneMap:
    return MonotoneMap(Q, Q, list(Q.elements), name="id")


@dataclass
class GeometricCertificate:
    preserves_joins: bool
    preserves_unit: bool
    weak_mul: bool
    strong_mul: bool
    witnesses: dict[str, Any] = field(default_factory=dict)

    @property
    def geometric(self) -> bool:
        return self.preserves_joins and self.preserves_unit and self.weak_mul

    @property
    def strong(self) -> bool:
        return self.geometric and self.strong_mul

    def as_dict(self) -> dict:
        return {
            "preserves_joins": self.preserves_joins,
            "preserves_unit": self.preserves_unit,
            "weak_mul": self.weak_mul,
            "strong_mul": self.strong_mul,
            "geometric": self.geometric,
            "strong": self.strong,
            "witnesses": self.witnesses,
        }


def _join_failure(f: MonotoneMap, include_empty: bool = True):
    """First subset (canonical order) whose join is not preserved, or ``None``.

    Finite joins are iterated binary joins, so the empty set and all pairs
    are the only subsets that need checking.
    """
    S, T = f.source, f.target
    if include_empty and f(S.bottom) != T.bottom:
        return ()
    for a in S.elements:
        for b in range(a + 1, S.n):
            if f(S.join2[a][b]) != T.join2[f(a)][f(b)]:
                return (S.label(a), S.label(b))
    return None


def certify_geometric(f: MonotoneMap) -> GeometricCertificate:
    S, T = f.source, f.target
    wit: dict[str, Any] = {}
    jf = _join_failure(f)
    if jf is not None:
        wit["preserves_joins"] = list(jf)
    unit_ok = f(S.top) == T.top
    if not unit_ok:
        wit["preserves_unit"] = [S.label(S.top), T.label(f(S.top))]
    weak = strong = True
    for p in S.elements:
        for q in S.elements:
            lhs = T.mul[f(p)][f(q)]
            rhs = f(S.mul[p][q])
            if weak and not T.leq[lhs][rhs]:
                weak = False
                wit["weak_mul"] = [S.label(p), S.label(q)]
            if strong and lhs != rhs:
                strong = False
                wit["strong_mul"] = [S.label(p), S.label(q)]
    return GeometricCertificate(jf is None, unit_ok, weak, strong, wit)


def right_adjoint(f: MonotoneMap, check: bool = True) -> MonotoneMap:
    """``f_*(b) = join{a : f(a) <= b}``; requires ``f`` to preserve all joins."""
    jf = _join_failure(f)
    if jf is not None:
        raise DoesNotPreserveJoins(f"map does not preserve the join of {list(jf)}", witness=list(jf))
    S, T = f.source, f.target
    table = [S.join(a for a in S.elements if T.leq[f(a)][b]) for b in T.elements]
    g = MonotoneMap(T, S, table, name=f"{f.name}_*" if f.name else "")
    if check:
        for a in S.elements:
            for b in T.elements:
                if T.leq[f(a)][b] != S.leq[a][g(b)]:  # pragma: no cover - follows from join preservation
                    raise DoesNotPreserveJoins("adjunction law fails", witness=(S.label(a), T.label(b)))
    return g


def check_adjunction(left: MonotoneMap, right: MonotoneMap) -> tuple[str, str] | None:
    """Cross-check a candidate pair: first ``(a, b)`` violating ``left(a) <= b <=> a <= right(b)``."""
    S, T = left.source, left.target
    for a in S.elements:
        for b in T.elements:
            if T.leq[left(a)][b] != S.leq[a][right(b)]:
                return (S.label(a), T.label(b))
    return None


@dataclass
class DirectImageFlags:
    unit: bool
    joins: bool
    empty_join: bool
    witnesses: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "unit": self.unit,
            "joins": self.joins,
            "empty_join": self.empty_join,
            "witnesses": self.witnesses,
        }


def direct_image_preserves(g: MonotoneMap) -> DirectImageFlags:
    """Unit and join preservation of a direct image.

    ``joins`` refers to nonempty joins, which is what carrying covers of the
    top element across needs; preservation of the empty join is reported
    separately in ``empty_join``.
    """
    S, T = g.source, g.target
    wit: dict[str, Any] = {}
    unit = g(S.top) == T.top
    if not unit:
        wit["unit"] = [S.label(S.top), T.label(g(S.top))]
    jf = _join_failure(g, include_empty=False)
    if jf is not None:
        wit["joins"] = list(jf)
    empty = g(S.bottom) == T.bottom
    if not empty:
        wit["empty_join"] = [S.label(S.bottom), T.label(g(S.bottom))]
    return DirectImageFlags(unit, jf is None, empty, wit)


def right_adjoint_preserves_meets(g: MonotoneMap) -> tuple[str, str] | None:
    """First pair whose meet ``g`` fails to preserve (``None`` also requires ``g(top) = top``)."""
    S, T = g.source, g.target
    if g(S.top) != T.top:
        return (S.label(S.top), S.label(S.top))
    for a in S.elements:
        for b in range(a, S.n):
            if g(S.meet(a, b)) != T.meet(g(a), g(b)):
                return (S.label(a), S.label(b))
    return None


def pullback_cover(f: MonotoneMap, C: "Cover") -> "Cover":
    """Image ``{f(u_i)}`` of a cover of ``u``, as a cover of ``f(u)``."""
    from .cech import make_cover

    jf = _join_failure(f)
    if jf is not None:
        raise DoesNotPreserveJoins(f"map does not preserve the join of {list(jf)}", witness=list(jf))
    if C.quantale is not f.source:
        raise ValidationError("cover does not live in the source of the map")
    return make_cover(f.target, f(C.base), [f(m) for m in C.members])
