import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcech.abgroups import TRIVIAL, Z, FgAbGroup, GroupHom, matmul
from qcech.cech import (
    RefinementWitness,
    all_refinement_witnesses,
    build_complex,
    common_refinement,
    cover_cohomology,
    element_cohomology,
    enumerate_covers,
    family_complex,
    find_refinement,
    homotopy_uniqueness_check,
    induced_cohomology_map,
    make_cover,
    refinement_map,
    refines,
    terminal_covers,
    tuple_product,
)
from qcech.errors import InvalidWitness, NotACover, ProductNotACover
from qcech.lattice import validate_quantale
from qcech.presheaf import constant_presheaf, locally_constant_sheaf
from qcech.sources import discrete_space, ideal_quantale, locale_of_space, pseudocircle, zmod_ring

from conftest import nilpotent_chain, spaces
from oracles import free_complex_cohomology

Z2 = FgAbGroup.free(2)


@pytest.fixture(scope="module")
def circle():
    F = locally_constant_sheaf(pseudocircle(), Z)
    L = F.base
    idx = {lab: L.index(lab) for lab in L.labels}
    return L, F, idx


def minimal_cover(L, idx):
    return make_cover(L, L.top, [idx["{a}"], idx["{b}"], idx["{a,b,c}"], idx["{a,b,d}"]])


def zmod(n):
    return ideal_quantale(zmod_ring(n))[0]


# ---------------------------------------------------------------- covers


def test_make_cover_examples():
    Q6 = zmod(6)
    assert make_cover(Q6, Q6.top, [Q6.top]).members == (Q6.top,)
    C = make_cover(Q6, Q6.top, [Q6.index("(3)"), Q6.index("(2)"), Q6.index("(2)"), Q6.bottom])
    assert C.labels() == ["(3)", "(2)"]
    Q4 = zmod(4)
    with pytest.raises(NotACover) as ei:
        make_cover(Q4, Q4.top, [Q4.index("(2)")])
    assert ei.value.witness == "(2)"


def test_enumerate_covers_bottom_and_order(circle):
    L, _, idx = circle
    assert [C.members for C in enumerate_covers(L, L.bottom)] == [(), (L.bottom,)]
    covers = enumerate_covers(L, L.top)
    keys = [(len(C), C.members) for C in covers]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert all(L.join(C.members) == L.top and L.bottom not in C.members for C in covers)


def test_enumerate_covers_matches_brute_force(circle):
    L, _, _ = circle
    for u in L.elements:
        if u == L.bottom:
            continue
        below = [w for w in L.elements if L.leq[w][u] and w != L.bottom]
        brute = {
            tuple(sorted(S))
            for r in range(1, len(below) + 1)
            for S in itertools.combinations(below, r)
            if L.join(S) == u
        }
        assert {C.members for C in enumerate_covers(L, u)} == brute


def test_tuple_product_examples(circle):
    L, _, idx = circle
    C = make_cover(L, L.top, [idx["{a,b,c}"], idx["{a,b,d}"]])
    assert tuple_product(L, C, (0,)) == idx["{a,b,c}"]
    assert L.label(tuple_product(L, C, (0, 1))) == "{a,b}"
    Q4 = zmod(4)
    D = make_cover(Q4, Q4.top, [Q4.index("(2)"), Q4.top])
    assert Q4.label(tuple_product(Q4, D, (0, 1))) == "(2)"
    with pytest.raises(ValueError):
        tuple_product(L, C, (1, 0))


# ---------------------------------------------------------------- complexes


def test_trivial_cover_complex(circle):
    L, F, _ = circle
    res = cover_cohomology(make_cover(L, L.top, [L.top]), F)
    assert res.groups == [F.value(L.top)]


def test_pseudocircle_minimal_cover_complex(circle):
    L, F, idx = circle
    cx = build_complex(minimal_cover(L, idx), F)
    assert [G.to_list() for G in cx.complex.groups] == [[0] * 4, [0] * 6, [0] * 2, []]
    dims = [G.ngens for G in cx.complex.groups]
    mats = [d.matrix for d in cx.complex.differentials]
    expect = free_complex_cohomology(dims, mats)
    got = cover_cohomology(minimal_cover(L, idx), F).groups
    assert [(G.rank, [d for d in G.factors if d]) for G in got] == expect
    assert [str(G) for G in got[:3]] == ["Z", "Z", "0"]
    assert cx.complex.euler_characteristic() == 4 - 6 + 2 == 0


def test_two_member_cover_with_trivial_overlap():
    X = discrete_space(2)
    F = locally_constant_sheaf(X, Z)
    L = F.base
    C = make_cover(L, L.top, [L.index("{x1}"), L.index("{x2}")])
    cx = build_complex(C, F)
    assert cx.complex.d(0).is_zero()
    assert cover_cohomology(C, F).groups == [Z2, TRIVIAL]


def test_zero_presheaf_gives_zero(circle):
    L, _, idx = circle
    K = constant_presheaf(L, TRIVIAL)
    assert all(G.is_trivial for G in cover_cohomology(minimal_cover(L, idx), K).groups)


def test_family_complex_with_repeats_matches_set(circle):
    L, F, idx = circle
    C = minimal_cover(L, idx)
    fam = list(C.members) + [C.members[2]]
    a = family_complex(L, fam, F).complex
    b = build_complex(C, F).complex
    assert [a.cohomology(q).group for q in range(3)] == [b.cohomology(q).group for q in range(3)]


def noncommutative_chain():
    """0 < a < b < 1 with a*b = 0 but b*a = a."""
    leq = [[i <= j for j in range(4)] for i in range(4)]
    mul = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 1, 2, 2], [0, 1, 2, 3]]
    return validate_quantale(["0", "a", "b", "1"], leq, mul)


def test_noncommutative_warns_and_uses_ascending_order():
    Q = noncommutative_chain()
    assert Q.flags.semicartesian and not Q.flags.commutative
    F = constant_presheaf(Q, Z)
    a, b = Q.index("a"), Q.index("b")
    with pytest.warns(UserWarning):
        cx = family_complex(Q, [b, a], F)
    assert cx.products[1] == [Q.mul[b][a]] == [a]
    with pytest.warns(UserWarning):
        cx = family_complex(Q, [a, b], F)
    assert cx.products[1] == [Q.bottom]


# ---------------------------------------------------------------- refinement


def test_find_refinement_examples(circle):
    L, _, idx = circle
    U = minimal_cover(L, idx)
    assert find_refinement(U, U).r == (0, 1, 2, 3)
    V = make_cover(L, L.top, [idx["{a,b,c}"], idx["{a,b,d}"]])
    w = find_refinement(U, V)
    assert w.r == (0, 0, 0, 1)
    assert refines(U, V) and refines(V, U)
    T = make_cover(L, L.top, [L.top])
    assert find_refinement(T, V) is None
    with pytest.raises(InvalidWitness):
        RefinementWitness(U, V, (1, 1, 1, 1))


def test_identity_refinement_map_is_identity(circle):
    L, F, idx = circle
    U = minimal_cover(L, idx)
    maps = refinement_map(find_refinement(U, U), F)
    assert all(m == GroupHom.identity(m.domain) for m in maps)
    for h in induced_cohomology_map(find_refinement(U, U), F):
        assert h == GroupHom.identity(h.domain)


def test_repeated_index_gives_zero_component(circle):
    L, F, idx = circle
    U = minimal_cover(L, idx)
    V = make_cover(L, L.top, [idx["{a,b,c}"], idx["{a,b,d}"]])
    w = RefinementWitness(U, V, (0, 0, 0, 1))
    m1 = refinement_map(w, F)[1]
    cu = build_complex(U, F)
    # tuple (0, 1) maps to (0, 0): its rows are zero
    k = cu.tuples[1].index((0, 1))
    r0, width = cu.blocks[1][k]
    assert all(not any(m1.matrix[r]) for r in range(r0, r0 + width))


def test_induced_maps_of_mutual_refinements_are_inverse(circle):
    L, F, idx = circle
    U = minimal_cover(L, idx)
    V = make_cover(L, L.top, list(U.members) + [idx["{a,b}"]])
    q = 3
    forward = induced_cohomology_map(find_refinement(U, V), F, q)
    back = induced_cohomology_map(find_refinement(V, U), F, q)
    for f, g in zip(forward, back):
        assert f.compose(g) == GroupHom.identity(g.domain)
        assert g.compose(f) == GroupHom.identity(f.domain)


def test_map_into_trivial_target_is_zero():
    X = discrete_space(2)
    L = locale_of_space(X)
    K = constant_presheaf(L, TRIVIAL)
    U = make_cover(L, L.top, [L.index("{x1}"), L.index("{x2}")])
    V = make_cover(L, L.top, [L.top])
    assert all(h.is_zero() for h in induced_cohomology_map(find_refinement(U, V), K))


def test_homotopy_uniqueness_examples(circle):
    L, F, idx = circle
    U = minimal_cover(L, idx)
    V = make_cover(L, L.top, [idx["{a,b,c}"], idx["{a,b,d}"]])
    hc = homotopy_uniqueness_check(U, V, F)
    assert hc.ok and hc.witnesses == len(all_refinement_witnesses(U, V)) == 4
    assert homotopy_uniqueness_check(U, U, F).witnesses == 9
    assert homotopy_uniqueness_check(U, make_cover(L, L.top, [L.top]), F).witnesses == 1


def test_common_refinement_examples():
    Q6 = zmod(6)
    U = make_cover(Q6, Q6.top, [Q6.index("(2)"), Q6.index("(3)")])
    V = make_cover(Q6, Q6.top, [Q6.top])
    W, wu, wv = common_refinement(U, V)
    assert W.labels() == ["(3)", "(2)"]
    assert wu.refined is U and wv.refined is V
    T = make_cover(Q6, Q6.top, [Q6.top])
    assert common_refinement(T, T)[0].members == (Q6.top,)


def test_common_refinement_can_fail_below_top():
    Q = nilpotent_chain()
    a = Q.index("a")
    U = make_cover(Q, a, [a])
    with pytest.raises(ProductNotACover) as ei:
        common_refinement(U, U)
    assert ei.value.witness == "0"


# ---------------------------------------------------------------- element cohomology


def test_element_cohomology_pseudocircle(circle):
    L, F, idx = circle
    res = element_cohomology(L, L.top, F)
    assert res.cover.members == minimal_cover(L, idx).members
    assert [str(G) for G in res.groups[:3]] == ["Z", "Z", "0"]
    assert all(G.is_trivial for G in res.groups[2:])
    assert res.cover_count == len(enumerate_covers(L, L.top))


def test_element_cohomology_discrete_and_bottom():
    F = locally_constant_sheaf(discrete_space(2), Z)
    L = F.base
    res = element_cohomology(L, L.top, F)
    assert res.cover.labels() == ["{x1}", "{x2}"]
    assert res.groups == [Z2, TRIVIAL]
    low = element_cohomology(L, L.bottom, F)
    assert low.cover.members == () and all(G.is_trivial for G in low.groups)


def test_terminal_cover_refines_every_cover(circle):
    L, _, _ = circle
    for u in L.elements:
        tc = terminal_covers(L, u)
        for C in enumerate_covers(L, u):
            assert refines(tc.terminal, C) and refines(tc.largest, C)


# ---------------------------------------------------------------- properties


def _sheaf_and_covers(X, limit=40):
    F = locally_constant_sheaf(X, Z)
    L = F.base
    return F, L, [C for u in L.elements for C in enumerate_covers(L, u)][:limit]


@settings(max_examples=25)
@given(spaces(3))
def test_d_squared_zero_and_h0_is_global_sections(X):
    F, L, covers = _sheaf_and_covers(X)
    for C in covers:
        cx = build_complex(C, F).complex
        for q in range(len(cx.differentials) - 1):
            assert cx.d(q + 1).compose(cx.d(q)).is_zero()
        assert all(cx.group(q).is_trivial for q in range(len(C), len(C) + 2))
        if C.members:
            assert cover_cohomology(C, F, 0).groups[0] == F.value(C.base)


@settings(max_examples=25)
@given(st.sampled_from([zmod(n) for n in (4, 6, 8, 9, 12)]))
def test_d_squared_zero_on_ideal_quantales(Q):
    K = constant_presheaf(Q, FgAbGroup.cyclic(6))
    for C in enumerate_covers(Q, Q.top):
        cx = build_complex(C, K).complex
        for q in range(len(cx.differentials) - 1):
            M = matmul(cx.d(q + 1).matrix, cx.d(q).matrix, cx.group(q).ngens)
            assert all(v % 6 == 0 for row in M for v in row)


@settings(max_examples=25)
@given(spaces(3), st.data())
def test_family_and_underlying_set_mutually_refine(X, data):
    F, L, covers = _sheaf_and_covers(X)
    C = data.draw(st.sampled_from([C for C in covers if C.base != L.bottom]))
    extra = data.draw(st.lists(st.sampled_from(C.members), max_size=2))
    fam = make_cover(L, C.base, list(C.members) + extra)
    assert fam == C
    q = len(C)
    lower = [w for w in L.elements if w != L.bottom and any(L.leq[w][m] for m in C.members)]
    bigger = make_cover(L, C.base, list(C.members) + [data.draw(st.sampled_from(lower))])
    f = induced_cohomology_map(find_refinement(C, bigger), F, q)
    g = induced_cohomology_map(find_refinement(bigger, C), F, q)
    for a, b in zip(f, g):
        assert a.compose(b) == GroupHom.identity(b.domain)


@settings(max_examples=25)
@given(spaces(3))
def test_terminal_and_largest_cover_agree(X):
    F = locally_constant_sheaf(X, Z)
    L = F.base
    for u in L.elements:
        tc = terminal_covers(L, u)
        q = max(len(tc.largest) - 1, 0)
        a = cover_cohomology(tc.terminal, F, q).groups
        b = cover_cohomology(tc.largest, F, q).groups
        assert a == b
