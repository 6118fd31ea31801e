import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegacomm.core import AlgebraError, BoundExceeded, NotAnIdeal, Subset
from omegacomm.corpus import cyclic, d8star, zring
from omegacomm.subobjects import (
    enumerate_ideals,
    enumerate_subalgebras,
    ideal_closure_within,
    is_ideal,
    is_subalgebra,
    join,
    normal_closure,
    normality_via_commutator,
    protosplit_pullback,
    subalgebra_generate,
)

from conftest import built, small_entries
from oracles import all_ideals_bruteforce, brute_is_ideal, brute_subalgebra, least_ideal_containing

TINY = small_entries(8)


@pytest.mark.parametrize("eid", TINY)
def test_enumerate_ideals_matches_every_subset_scan(eid):
    A, _ = built(eid)
    ours = {S.members for S in enumerate_ideals(A)}
    assert ours == set(all_ideals_bruteforce(A))


@pytest.mark.parametrize("eid", TINY)
def test_is_ideal_agrees_with_coset_oracle_on_subalgebras(eid):
    A, _ = built(eid)
    for S in enumerate_subalgebras(A):
        ok, wit = is_ideal(A, S)
        assert ok == brute_is_ideal(A, S.members)
        if not ok:
            assert wit.recompute(A) == wit.value
            assert wit.value not in S


@pytest.mark.parametrize("eid", TINY)
def test_subalgebra_generate_matches_oracle(eid):
    A, _ = built(eid)
    for a in range(A.n):
        assert subalgebra_generate(A, Subset(A, [a])).members == brute_subalgebra(A, [a])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TINY), st.data())
def test_normal_closure_is_least_ideal(eid, data):
    A, _ = built(eid)
    seed = data.draw(st.sets(st.integers(0, A.n - 1), max_size=3))
    ideals = all_ideals_bruteforce(A)
    assert normal_closure(A, Subset(A, seed)).members == least_ideal_containing(ideals, seed | {0})


def test_d8star_conjugation_witness():
    D = d8star()
    s, r = D.element("s"), D.element("r")
    ok, wit = is_ideal(D, Subset(D, [0, s]))
    assert not ok and wit.kind == "conjugation"
    assert D.label(wit.value) == "s+2r"
    x, y = wit.data
    assert y == s
    assert D.sum(D.minus(x), s, x) == D.element("s+2r")
    assert D.sum(D.minus(r), s, r) == D.element("s+2r")


def test_narng_span_is_ideal():
    N, subs = built("narng5")
    assert len(subs["K"]) == 25
    assert is_ideal(N, subs["K"])[0]


def test_ideal_closure_within_needs_containment():
    A = cyclic(8)
    with pytest.raises(AlgebraError):
        ideal_closure_within(A, Subset(A, [1]), Subset(A, [0, 2, 4, 6]))
    assert ideal_closure_within(A, Subset(A, [2]), Subset(A, [0, 2, 4, 6])).members == frozenset({0, 2, 4, 6})


def test_enumerate_ideals_within():
    A = cyclic(12)
    I = Subset(A, range(0, 12, 2))
    got = {S.members for S in enumerate_ideals(A, within=I)}
    assert got == {S.members for S in enumerate_ideals(A) if S <= I}
    with pytest.raises(AlgebraError):
        enumerate_ideals(A, within=Subset(A, [0, 1]))


def test_enumerate_bounds():
    with pytest.raises(BoundExceeded):
        enumerate_ideals(cyclic(20))
    with pytest.raises(BoundExceeded):
        enumerate_subalgebras(cyclic(13))


@pytest.mark.parametrize("eid", small_entries(8))
def test_normality_via_commutator_agrees(eid):
    A, _ = built(eid)
    if not A.is_distributive:
        pytest.skip("commutator words need distributivity")
    for S in enumerate_subalgebras(A):
        assert normality_via_commutator(A, S) == is_ideal(A, S)[0]


def test_join_of_ideals_in_ring():
    A = zring(6)
    J = join(A, Subset(A, [0, 2, 4]), Subset(A, [0, 3]))
    assert J == A.all()
    assert is_subalgebra(A, J)


def test_protosplit_pullback_is_split_and_rejects_non_ideals():
    A = cyclic(4)
    ext = protosplit_pullback(A, Subset(A, [0, 2]))
    assert ext.Y.n == 8 and ext.X.n == 2 and len(ext.kernel) == 2
    D = d8star()
    with pytest.raises(NotAnIdeal):
        protosplit_pullback(D, Subset(D, [0, D.element("s")]))


def test_ternary_ideals_agree_with_coset_oracle():
    A, _ = built("z16ternary")
    subs = enumerate_subalgebras(A, max_size=16)
    assert len(subs) > 1
    for S in subs:
        assert is_ideal(A, S)[0] == brute_is_ideal(A, S.members)
