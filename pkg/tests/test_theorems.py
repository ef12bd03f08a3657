import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcech.abgroups import Z
from qcech.cech import enumerate_covers, make_cover
from qcech.corpus import base_pairs, morphism_instances, standard_sheaf
from qcech.errors import NotContinuous, ValidationError
from qcech.lattice import chain, idem_locale
from qcech.morphisms import MonotoneMap, identity_map
from qcech.presheaf import locally_constant_sheaf
from qcech.sources import (
    discrete_space,
    function_ring,
    ideal_index,
    ideal_quantale,
    preimage_map,
    tau_theta,
    zmod_ring,
)
from qcech.theorems import (
    Check,
    TheoremReport,
    idempotent_observation,
    verify_change_of_base,
    verify_cover_iso,
    verify_main_iso,
    verify_quotient_direct_image,
    verify_tau_theta,
)

from conftest import spaces


@pytest.fixture(scope="module")
def f22():
    tt = tau_theta(function_ring(2, 2))
    return tt, locally_constant_sheaf(tt.space, Z)


def test_report_conclusion_logic():
    rep = TheoremReport("t", "i", [Check("h", True)], [Check("c", True)])
    assert rep.conclusion == "pass" and rep.passed
    rep.checks.append(Check("d", False, [1]))
    assert rep.conclusion == "fail"
    assert rep.as_dict()["checks"][1] == {"name": "d", "passed": False, "witness": [1]}
    rep.hypotheses.append(Check("g", False))
    assert rep.conclusion == "skipped" and not rep.passed


# ---------------------------------------------------------------- change of base


def test_change_of_base_tau(f22):
    tt, F = f22
    rep = verify_change_of_base(F, tt.tau)
    assert rep.conclusion == "pass"
    assert rep.data["covers_checked"] == sum(len(enumerate_covers(tt.ideals, u)) for u in tt.ideals.elements)


def test_change_of_base_identity_and_broken():
    F = locally_constant_sheaf(discrete_space(2), Z)
    L = F.base
    assert verify_change_of_base(F, identity_map(L)).passed
    broken = MonotoneMap(L, L, [0, 0, 0, 3])  # misses the join of the two atoms
    rep = verify_change_of_base(F, broken)
    assert rep.conclusion == "skipped"
    assert not rep.hypotheses[1].passed and rep.checks == []


# ---------------------------------------------------------------- tau and theta


@pytest.mark.parametrize("q,k", [(2, 1), (2, 2), (3, 2)])
def test_tau_theta_examples(q, k):
    rep = verify_tau_theta(q, k)
    assert rep.passed, rep.as_dict()
    assert len(rep.checks) == 9
    assert rep.data["ideals"] == rep.data["opens"] == 2**k


# ---------------------------------------------------------------- cover comparison


def test_cover_iso_examples(f22):
    tt, F = f22
    Q = tt.ideals
    e1, e2 = Q.index("((1,0))"), Q.index("((0,1))")
    rep = verify_cover_iso(make_cover(Q, Q.top, [e1, e2]), F, tt.tau)
    assert rep.passed
    assert sorted(rep.data["image"]) == ["{x1}", "{x2}"]
    assert rep.data["groups"] == [[0, 0], []] and rep.data["cohomology"] == [[0, 0], []]
    rep = verify_cover_iso(make_cover(Q, Q.top, [Q.top]), F, tt.tau)
    assert rep.passed and rep.data["groups"] == [[0, 0]]
    rep = verify_cover_iso(make_cover(Q, Q.top, [e1, Q.top]), F, tt.tau)
    assert rep.passed and len(rep.data["groups"]) == 2


def test_cover_iso_requires_tau(f22):
    tt, F = f22
    with pytest.raises(ValueError):
        verify_cover_iso(make_cover(tt.ideals, tt.ideals.top, [tt.ideals.top]), F)


# ---------------------------------------------------------------- invariance


def test_main_iso_tau(f22):
    tt, F = f22
    rep = verify_main_iso(tt.tau, F)
    assert rep.passed
    assert rep.data["source"] == rep.data["target"] == [[0, 0], []]
    assert sorted(rep.data["target_cover"]) == ["{x1}", "{x2}"]


def test_main_iso_idem_inclusion_and_identity():
    Q4, _ = ideal_quantale(zmod_ring(4))
    rep = verify_main_iso(idem_locale(Q4)[1], standard_sheaf(Q4))
    assert rep.hypotheses_ok and rep.passed
    assert rep.data["source"] == rep.data["target"] == [[0], []]
    C = chain(3)
    K = locally_constant_sheaf(discrete_space(1), Z)
    assert verify_main_iso(identity_map(K.base), K).passed
    assert verify_main_iso(identity_map(C), standard_sheaf(C), q_max=2).data["source"] == [[0], [], []]


def test_main_iso_broken_morphism_is_skipped():
    F = locally_constant_sheaf(discrete_space(2), Z)
    L = F.base
    rep = verify_main_iso(MonotoneMap(L, L, [0, 0, 0, 3]), F)
    assert rep.conclusion == "skipped" and rep.checks == []


def test_main_iso_non_sheaf_is_skipped():
    from qcech.presheaf import constant_presheaf

    C = chain(2)
    rep = verify_main_iso(identity_map(C), constant_presheaf(C, Z))
    assert rep.conclusion == "skipped"
    assert [h.name for h in rep.hypotheses if not h.passed] == ["F is a sheaf"]


# ---------------------------------------------------------------- quotients


def test_quotient_examples():
    R = zmod_ring(4)
    Q, ideals = ideal_quantale(R)
    rep = verify_quotient_direct_image(R, ideals[Q.index("(2)")])
    assert rep.passed
    assert rep.data["direct_image"] == [["([0])", "(2)"], ["([1])", "(1)"]]
    rep = verify_quotient_direct_image(R, ideals[Q.bottom])
    assert rep.passed
    assert [b for _, b in rep.data["direct_image"]] == list(Q.labels)
    R6 = zmod_ring(6)
    Q6, ideals6 = ideal_quantale(R6)
    rep = verify_quotient_direct_image(R6, ideals6[Q6.index("(3)")])
    assert rep.passed and len(rep.checks) == 5


def test_quotient_rejects_foreign_ideal():
    R = zmod_ring(6)
    _, other = ideal_quantale(zmod_ring(6))
    with pytest.raises(ValidationError):
        verify_quotient_direct_image(R, other[1])


# ---------------------------------------------------------------- idempotents


def test_idempotent_observation_values():
    obs = idempotent_observation(zmod_ring(6))
    assert obs == {"ring": "zmod6", "idempotents": 4, "h0_rank": 2, "idempotents_equal_2_pow_rank": True}
    obs = idempotent_observation(function_ring(2, 3))
    assert obs["idempotents"] == 8 and obs["h0_rank"] == 3


# ---------------------------------------------------------------- corpus and properties


def test_corpus_shape():
    assert len(base_pairs()) >= 50
    names = [m.name for m in morphism_instances()]
    assert len(names) == len(set(names))
    assert any(n.startswith("tau") for n in names) and any(n.startswith("quotient") for n in names)
    assert any("projection" in n for n in names) and any("Idem inclusion" in n for n in names)


@settings(max_examples=40)
@given(spaces(3), spaces(3), st.data())
def test_preimage_maps_never_break_invariance(X, Y, data):
    g = [data.draw(st.integers(0, Y.n - 1)) for _ in range(X.n)]
    try:
        f = preimage_map(X, Y, g)
    except NotContinuous:
        return
    rep = verify_main_iso(f, locally_constant_sheaf(X, Z))
    assert rep.conclusion != "fail", rep.as_dict()
    assert verify_change_of_base(locally_constant_sheaf(X, Z), f).conclusion != "fail"


@settings(max_examples=20)
@given(st.sampled_from(range(2, 13)), st.data())
def test_quotients_of_zmod_pass(n, data):
    R = zmod_ring(n)
    Q, ideals = ideal_quantale(R)
    I = ideals[data.draw(st.sampled_from(list(Q.elements)))]
    assert verify_quotient_direct_image(R, I).passed
    assert ideal_index(R, I.elements) in Q.elements
