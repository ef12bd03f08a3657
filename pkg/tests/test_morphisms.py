import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcech.cech import make_cover, refines
from qcech.errors import DoesNotPreserveJoins, NotMonotone
from qcech.lattice import chain, idem_approx, idem_locale, interval_quantale, product_quantale
from qcech.morphisms import (
    MonotoneMap,
    certify_geometric,
    check_adjunction,
    direct_image_preserves,
    identity_map,
    pullback_cover,
    right_adjoint,
    right_adjoint_preserves_meets,
)
from qcech.sources import (
    function_ring,
    ideal_quantale,
    induced_surjection_morphism,
    preimage_map,
    quotient_ring,
    tau_theta,
    zmod_ring,
)

from conftest import POOL, spaces


def test_right_adjoint_of_identity():
    Q = chain(3)
    assert right_adjoint(identity_map(Q)).table == (0, 1, 2)


def test_right_adjoint_of_tau_is_theta():
    tt = tau_theta(function_ring(2, 2))
    assert right_adjoint(tt.tau).table == tt.theta.table


def test_right_adjoint_of_idem_inclusion_is_approximation():
    Q4, _ = ideal_quantale(zmod_ring(4))
    sub, inc = idem_locale(Q4)
    g = right_adjoint(inc)
    assert [inc(g(q)) for q in Q4.elements] == [idem_approx(Q4, q) for q in Q4.elements]


def test_right_adjoint_needs_joins():
    C = chain(3)
    with pytest.raises(DoesNotPreserveJoins) as ei:
        right_adjoint(MonotoneMap(C, C, [1, 1, 2]))  # bottom goes to c1
    assert ei.value.witness == []
    # on a chain every monotone map keeping bottom preserves joins
    f = MonotoneMap(C, C, [0, 0, 2])
    assert check_adjunction(f, right_adjoint(f)) is None


def test_not_monotone():
    C = chain(2)
    with pytest.raises(NotMonotone):
        MonotoneMap(C, C, [1, 0])


def test_projection_is_strong_geometric():
    P, (p1, _) = product_quantale(chain(2), chain(3))
    cert = certify_geometric(p1)
    assert cert.geometric and cert.strong and cert.strong_mul


def test_tau_is_strong_geometric():
    assert certify_geometric(tau_theta(function_ring(2, 2)).tau).strong


def test_constant_bottom_fails_unit():
    C = chain(2)
    cert = certify_geometric(MonotoneMap(C, C, [0, 0]))
    assert not cert.preserves_unit and not cert.geometric
    assert "preserves_unit" in cert.witnesses


def test_interval_inclusion_misses_empty_join():
    Q6, _ = ideal_quantale(zmod_ring(6))
    sub, inc = interval_quantale(Q6, Q6.index("(2)"))
    assert sub.labels == ("(2)", "(1)")
    cert = certify_geometric(inc)
    assert cert.preserves_unit and cert.strong_mul
    assert not cert.preserves_joins and cert.witnesses["preserves_joins"] == []


def test_direct_image_examples():
    tt = tau_theta(function_ring(2, 2))
    d = direct_image_preserves(tt.theta)
    assert d.unit and d.joins and d.empty_join
    Q4, _ = ideal_quantale(zmod_ring(4))
    _, inc = idem_locale(Q4)
    d = direct_image_preserves(right_adjoint(inc))
    assert d.unit and d.joins
    R = zmod_ring(4)
    S, qh = quotient_ring(R, ideal_quantale(R)[1][1])
    d = direct_image_preserves(right_adjoint(induced_surjection_morphism(qh)))
    assert d.unit and d.joins and not d.empty_join


def test_pullback_cover_examples():
    tt = tau_theta(function_ring(2, 2))
    Q = tt.ideals
    C = make_cover(Q, Q.top, [Q.index("((1,0))"), Q.index("((0,1))")])
    assert pullback_cover(identity_map(Q), C) == C
    img = pullback_cover(tt.tau, C)
    assert sorted(img.labels()) == ["{x1}", "{x2}"]
    back = pullback_cover(tt.tau, pullback_cover(tt.theta, img))
    assert refines(back, img)


# ---------------------------------------------------------------- properties


@given(spaces(3), spaces(3), st.data())
def test_adjunction_law_for_preimage_maps(X, Y, data):
    g = [data.draw(st.integers(0, Y.n - 1)) for _ in range(X.n)]
    try:
        f = preimage_map(X, Y, g)
    except Exception:
        return
    r = right_adjoint(f)
    S, T = f.source, f.target
    for a, b in itertools.product(S.elements, T.elements):
        assert T.leq[f(a)][b] == S.leq[a][r(b)]
    assert right_adjoint_preserves_meets(r) is None


def test_idem_inclusion_strong_on_pool():
    for Q in POOL:
        if Q.flags.commutative and Q.flags.semicartesian:
            cert = certify_geometric(idem_locale(Q)[1])
            assert cert.strong, cert.witnesses
            assert right_adjoint_preserves_meets(right_adjoint(idem_locale(Q)[1])) is None
