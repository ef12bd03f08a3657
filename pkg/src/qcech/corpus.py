"""Deterministic corpus of small quantales, sheaves and morphisms for sweeps.

Base pairs ``(Q, F)`` pair a quantale with a sheaf on it:

* locales of all topologies on at most three points, with locally-constant ``Z``;
* ideal quantales of ``Z/n`` for ``n <= 12``, with locally-constant ``Z`` on
  the idempotents pulled back along the idempotent approximation;
* ideal quantales of ``F_2^k`` for ``k <= 3``, with locally-constant ``Z``
  pulled back along ``tau``;
* a few small product quantales.

Morphism instances ``(f, F)`` have ``f: Q' -> Q`` and ``F`` a sheaf on ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abgroups import Z
from .lattice import Quantale, approximation_map, idem_locale, product_quantale
from .morphisms import MonotoneMap, identity_map
from .presheaf import AbPresheaf, locally_constant_on_locale, locally_constant_sheaf, pullback_presheaf
from .sources import (
    all_topologies,
    function_ring,
    ideal_index,
    ideal_quantale,
    induced_surjection_morphism,
    locale_of_space,
    quotient_ring,
    tau_theta,
    zmod_ring,
)
from .theorems import idempotent_sheaf


@dataclass
class BasePair:
    name: str
    quantale: Quantale
    sheaf: AbPresheaf


@dataclass
class MorphismInstance:
    name: str
    f: MonotoneMap
    sheaf: AbPresheaf


def standard_sheaf(Q: Quantale) -> AbPresheaf:
    """Locally-constant ``Z`` on a locale; on other quantales, through the idempotent approximation."""
    if Q.is_locale:
        return locally_constant_on_locale(Q, Z)
    return idempotent_sheaf(Q)


@lru_cache(maxsize=None)
def _zmod_quantale(n: int) -> Quantale:
    return ideal_quantale(zmod_ring(n))[0]


@lru_cache(maxsize=None)
def _product_specs() -> tuple:
    out = []
    for a, b in [(2, 2), (2, 3), (4, 2), (4, 3), (9, 2), (4, 4)]:
        P, (p1, p2) = product_quantale(_zmod_quantale(a), _zmod_quantale(b))
        out.append((f"I(Z/{a}) x I(Z/{b})", P, p1, p2, a, b))
    S = all_topologies(2)
    for i, j in [(1, 1), (1, 2), (2, 3)]:
        La, Lb = locale_of_space(S[i]), locale_of_space(S[j])
        P, (p1, p2) = product_quantale(La, Lb)
        out.append((f"O(T2.{i}) x O(T2.{j})", P, p1, p2, None, None))
    return tuple(out)


@lru_cache(maxsize=None)
def base_pairs() -> tuple[BasePair, ...]:
    pairs = []
    for n in (1, 2, 3):
        for i, X in enumerate(all_topologies(n)):
            pairs.append(BasePair(f"O(T{n}.{i})", locale_of_space(X), locally_constant_sheaf(X, Z)))
    for n in range(1, 13):
        Q = _zmod_quantale(n)
        pairs.append(BasePair(f"I(Z/{n})", Q, standard_sheaf(Q)))
    for k in (1, 2, 3):
        tt = tau_theta(function_ring(2, k))
        F = pullback_presheaf(locally_constant_sheaf(tt.space, Z), tt.tau, name="lc(Z) o tau")
        pairs.append(BasePair(f"I(F_2^{k})", tt.ideals, F))
    for name, P, *_ in _product_specs():
        pairs.append(BasePair(name, P, standard_sheaf(P)))
    return tuple(pairs)


@lru_cache(maxsize=None)
def morphism_instances() -> tuple[MorphismInstance, ...]:
    out = []
    for bp in base_pairs():
        out.append(MorphismInstance(f"id on {bp.name}", identity_map(bp.quantale), bp.sheaf))
    for n in range(1, 13):
        Q = _zmod_quantale(n)
        F = standard_sheaf(Q)
        _, inc = idem_locale(Q)
        if inc.source.n != Q.n:
            out.append(MorphismInstance(f"Idem inclusion into I(Z/{n})", inc, F))
            Idem, approx = approximation_map(Q)
            out.append(MorphismInstance(f"approximation on I(Z/{n})", approx, locally_constant_on_locale(Idem, Z)))
    for k in (1, 2, 3):
        tt = tau_theta(function_ring(2, k))
        out.append(MorphismInstance(f"tau on F_2^{k}", tt.tau, locally_constant_sheaf(tt.space, Z)))
        out.append(
            MorphismInstance(f"theta on F_2^{k}", tt.theta, pullback_presheaf(locally_constant_sheaf(tt.space, Z), tt.tau))
        )
    for name, P, p1, p2, _, _ in _product_specs():
        out.append(MorphismInstance(f"first projection of {name}", p1, standard_sheaf(p1.target)))
        out.append(MorphismInstance(f"second projection of {name}", p2, standard_sheaf(p2.target)))
    for n in range(2, 13):
        R = zmod_ring(n)
        for m in range(2, n):
            if n % m:
                continue
            QR, ideals = ideal_quantale(R)
            I = ideals[ideal_index(R, [a for a in range(n) if a % m == 0])]
            S, qh = quotient_ring(R, I)
            f = induced_surjection_morphism(qh)
            out.append(MorphismInstance(f"quotient Z/{n} -> Z/{m}", f, standard_sheaf(f.target)))
    return tuple(out)
