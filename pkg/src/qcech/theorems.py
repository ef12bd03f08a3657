"""Executable checks of the change-of-base, tau/theta, cover-comparison,
invariance and quotient direct-image statements on concrete instances.

Every check returns a :class:`TheoremReport`. The conclusion is evaluated
only when every hypothesis passes; otherwise it is ``"skipped"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

from .abgroups import Z, groups_isomorphic
from .cech import Cover, element_cohomology, enumerate_covers, family_complex
from .errors import ValidationError
from .lattice import Quantale
from .morphisms import (
    MonotoneMap,
    _join_failure,
    certify_geometric,
    check_adjunction,
    direct_image_preserves,
    right_adjoint,
)
from .presheaf import AbPresheaf, locally_constant_on_locale, pullback_presheaf, sheaf_check
from .sources import (
    FiniteRing,
    Ideal,
    function_ring,
    ideal_index,
    ideal_quantale,
    ideal_sum,
    induced_surjection_morphism,
    quotient_ring,
    tau_theta,
    vanishing_set,
)


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def as_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "passed": self.passed}
        if not self.passed:
            d["witness"] = self.witness
        return d


@dataclass
class TheoremReport:
    theorem: str
    instance: str
    hypotheses: list[Check] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def hypotheses_ok(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    @property
    def conclusion(self) -> str:
        if not self.hypotheses_ok:
            return "skipped"
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def passed(self) -> bool:
        return self.conclusion == "pass"

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "hypotheses": [h.as_dict() for h in self.hypotheses],
            "conclusion": self.conclusion,
            "checks": [c.as_dict() for c in self.checks],
            "data": self.data,
        }


def _first(pred: Callable[..., bool], *ranges):
    """First tuple over the product of ranges where ``pred`` is false, else ``None``."""
    for t in itertools.product(*ranges):
        if not pred(*t):
            return t
    return None


def _check(name: str, bad) -> Check:
    return Check(name, bad is None, None if bad is None else list(bad) if isinstance(bad, tuple) else bad)


# ---------------------------------------------------------------- change of base


def verify_change_of_base(F: AbPresheaf, f: MonotoneMap, instance: str = "") -> TheoremReport:
    """``F o f`` is a sheaf on the source of a geometric ``f`` whenever ``F`` is a sheaf."""
    rep = TheoremReport("change-of-base", instance or f"{f.name or 'f'} with {F.name}")
    sr = sheaf_check(F)
    rep.hypotheses.append(Check("F is a sheaf", sr.is_sheaf, [v.as_dict() for v in sr.failures]))
    cert = certify_geometric(f)
    rep.hypotheses.append(Check("f geometric", cert.geometric, cert.witnesses))
    if rep.hypotheses_ok:
        pr = sheaf_check(pullback_presheaf(F, f))
        rep.checks.append(Check("F o f is a sheaf", pr.is_sheaf, [v.as_dict() for v in pr.failures[:1]]))
        rep.data["covers_checked"] = len(pr.verdicts)
    return rep


# ---------------------------------------------------------------- tau and theta


def verify_tau_theta(q: int, k: int) -> TheoremReport:
    R = function_ring(q, k)
    tt = tau_theta(R)
    Q, L, t, th = tt.ideals, tt.locale, tt.tau, tt.theta
    X, ideals = tt.space, tt.ideal_list
    rep = TheoremReport("tau-theta", f"F_{q}^{k}")
    rep.hypotheses.append(Check("function ring", True))
    rep.checks += [
        _check("tau preserves joins", _join_failure(t)),
        _check(
            "tau preserves multiplication",
            _first(lambda a, b: t(Q.mul[a][b]) == L.mul[t(a)][t(b)], Q.elements, Q.elements),
        ),
        _check("tau preserves unit", None if t(Q.top) == L.top else [L.label(t(Q.top))]),
        _check("theta preserves joins", _join_failure(th)),
        _check("theta preserves unit", None if th(L.top) == Q.top else [Q.label(th(L.top))]),
        _check("tau left adjoint to theta", check_adjunction(t, th)),
        _check(
            "theta(U) theta(V) <= theta(U meet V)",
            _first(lambda u, v: Q.leq[Q.mul[th(u)][th(v)]][th(L.mul[u][v])], L.elements, L.elements),
        ),
        _check(
            "theta(U) is the vanishing set",
            _first(lambda u: ideals[th(u)].elements == vanishing_set(R, X.opens[u]), L.elements),
        ),
        _check("computed right adjoint of tau is theta", None if right_adjoint(t).table == th.table else "tables differ"),
    ]
    rep.data = {"ideals": Q.n, "opens": L.n, "tau": t.as_pairs(), "theta": th.as_pairs()}
    return rep


# ---------------------------------------------------------------- covers of the function ring


def verify_cover_iso(cover: Cover, F: AbPresheaf, tau: MonotoneMap | None = None) -> TheoremReport:
    """The complex of ``cover`` with ``F o tau`` is the complex of ``tau(cover)`` with ``F``."""
    Q = cover.quantale
    if tau is None:
        raise ValueError("tau map required")
    L = tau.target
    rep = TheoremReport("cover-iso", f"cover {cover.labels()}")
    rep.hypotheses.append(Check("cover", Q.join(cover.members) == cover.base))
    cert = certify_geometric(tau)
    rep.hypotheses.append(Check("tau strong geometric", cert.strong, cert.witnesses))
    if F.base is not L:
        rep.hypotheses.append(Check("F lives on the space side", False))
    if not rep.hypotheses_ok:
        return rep
    image = [tau(m) for m in cover.members]
    A = family_complex(Q, cover.members, pullback_presheaf(F, tau, check=False))
    B = family_complex(L, image, F)
    prod_mismatch = next(
        (
            [q, Q.label(pa)]
            for q in range(len(A.products))
            for pa, pb in zip(A.products[q], B.products[q])
            if tau(pa) != pb
        ),
        None,
    )
    rep.checks.append(_check("tau of tuple products equals intersections", prod_mismatch))
    ga = [G.to_list() for G in A.complex.groups]
    gb = [G.to_list() for G in B.complex.groups]
    rep.checks.append(Check("groups equal degreewise", ga == gb, {"cover": ga, "image": gb}))
    bad_d = next(
        (q for q, (da, db) in enumerate(zip(A.complex.differentials, B.complex.differentials)) if da.matrix != db.matrix),
        None,
    )
    rep.checks.append(_check("coboundaries equal degreewise", bad_d))
    top = max(len(cover.members) - 1, 0)
    ha = [A.complex.cohomology(q).group for q in range(top + 1)]
    hb = [B.complex.cohomology(q).group for q in range(top + 1)]
    rep.checks.append(Check("cohomology isomorphic", all(groups_isomorphic(a, b) for a, b in zip(ha, hb))))
    rep.data = {
        "image": [L.label(u) for u in image],
        "groups": ga,
        "cohomology": [G.to_list() for G in ha],
    }
    return rep


# ---------------------------------------------------------------- invariance


def verify_main_iso(f: MonotoneMap, F: AbPresheaf, q_max: int | None = None, instance: str = "") -> TheoremReport:
    """Cohomology of the top element is unchanged by pulling ``F`` back along ``f``."""
    Qs, Q = f.source, f.target
    rep = TheoremReport("main-iso", instance or f"{f.name or 'f'} with {F.name}")
    cert = certify_geometric(f)
    rep.hypotheses.append(Check("f strong geometric", cert.strong, cert.witnesses))
    g = None
    if cert.preserves_joins:
        g = right_adjoint(f)
        di = direct_image_preserves(g)
        rep.hypotheses.append(Check("direct image preserves unit", di.unit, di.witnesses.get("unit")))
        rep.hypotheses.append(Check("direct image preserves joins", di.joins, di.witnesses.get("joins")))
    sr = sheaf_check(F)
    rep.hypotheses.append(Check("F is a sheaf", sr.is_sheaf, [v.as_dict() for v in sr.failures]))
    if not rep.hypotheses_ok:
        return rep
    assert g is not None
    bad = None
    for C in enumerate_covers(Q, Q.top):
        back = [g(m) for m in C.members]
        if Qs.join(back) != Qs.top or any(not Q.leq[f(b)][m] for b, m in zip(back, C.members)):
            bad = C.labels()
            break
    rep.checks.append(_check("f^*(f_*(U)) refines U", bad))
    P = pullback_presheaf(F, f, check=False)
    src = element_cohomology(Qs, Qs.top, P, q_max)
    tgt = element_cohomology(Q, Q.top, F, q_max)
    top = max(len(src.groups), len(tgt.groups)) - 1 if q_max is None else q_max
    if q_max is None:
        src = element_cohomology(Qs, Qs.top, P, top)
        tgt = element_cohomology(Q, Q.top, F, top)
    mism = next((q for q, (a, b) in enumerate(zip(src.groups, tgt.groups)) if not groups_isomorphic(a, b)), None)
    rep.checks.append(_check("cohomology isomorphic in every degree", mism))
    rep.data = {
        "source": src.factor_lists(),
        "target": tgt.factor_lists(),
        "source_cover": src.cover.labels(),
        "target_cover": tgt.cover.labels(),
    }
    return rep


# ---------------------------------------------------------------- quotients


def verify_quotient_direct_image(R: FiniteRing, I: Ideal) -> TheoremReport:
    """Direct image of the quotient map ``R -> R/I`` on ideals: ``K = q(J)`` goes to ``J + I``."""
    if I.ring is not R:
        raise ValidationError("the ideal belongs to a different ring")
    S, qh = quotient_ring(R, I)
    f = induced_surjection_morphism(qh)
    QR, idR = ideal_quantale(R)
    QS, idS = ideal_quantale(S)
    rep = TheoremReport("quotient", f"{R.name} / {QR.label(ideal_index(R, I))}")
    cert = certify_geometric(f)
    rep.hypotheses.append(Check("quotient map strong geometric", cert.strong, cert.witnesses))
    if not rep.hypotheses_ok:
        return rep
    g = right_adjoint(f)
    bad = None
    for j, J in enumerate(idR):
        if idR[g(f(j))] != ideal_sum(J, I):
            bad = [QR.label(j), QS.label(f(j))]
            break
    rep.checks.append(_check("direct image of q(J) is J + I", bad))
    pre = next(
        (QS.label(k) for k, K in enumerate(idS) if idR[g(k)].elements != frozenset(a for a in range(R.n) if qh(a) in K.elements)),
        None,
    )
    rep.checks.append(_check("direct image is the preimage", pre))
    rep.checks.append(_check("direct image of the unit is R", None if g(QS.top) == QR.top else QR.label(g(QS.top))))
    rep.checks.append(_check("direct image of (0) is I", None if idR[g(QS.bottom)] == I else QR.label(g(QS.bottom))))
    rep.checks.append(
        _check(
            "direct image preserves sums",
            _first(lambda a, b: g(QS.join2[a][b]) == QR.join2[g(a)][g(b)], QS.elements, QS.elements),
        )
    )
    rep.data = {"direct_image": [[QS.label(k), QR.label(g(k))] for k in QS.elements]}
    return rep


# ---------------------------------------------------------------- idempotents


def idempotent_sheaf(Q: Quantale) -> AbPresheaf:
    """Locally-constant integers on ``Idem(Q)`` pulled back along the idempotent approximation."""
    from .lattice import approximation_map

    if Q.flags.idempotent:
        return locally_constant_on_locale(Q, Z)
    Idem, approx = approximation_map(Q)
    return pullback_presheaf(locally_constant_on_locale(Idem, Z), approx, name="lc(Z) o approx")


def idempotent_observation(R: FiniteRing) -> dict:
    """Rank of H^0 at the unit ideal next to the idempotent count of ``R``; nothing is asserted."""
    Q, _ = ideal_quantale(R)
    res = element_cohomology(Q, Q.top, idempotent_sheaf(Q), 0)
    rank = res.groups[0].rank
    n_idem = len(R.idempotents())
    return {
        "ring": R.name,
        "idempotents": n_idem,
        "h0_rank": rank,
        "idempotents_equal_2_pow_rank": n_idem == 2**rank,
    }
