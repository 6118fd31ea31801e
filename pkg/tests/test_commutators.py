import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegacomm import commutators
from omegacomm.commutators import (
    NotDistributive,
    cooperates,
    elementary_words,
    higgins,
    huq,
    huq_via_lattice_oracle,
    sh_nh_instance_check,
    ternary_higgins,
)
from omegacomm.core import AlgebraError, FiniteAlgebra, Signature, Subset
from omegacomm.corpus import cyclic
from omegacomm.subobjects import enumerate_ideals, enumerate_subalgebras, ideal_closure_within, join, subalgebra_generate

from conftest import built, small_entries
from oracles import brute_cooperate, group_closure, neg, plus


def test_a5_higgins_is_three_cycle_subgroup_and_huq_is_everything():
    A, subs = built("a5")
    res = higgins(A, subs["K"], subs["L"])
    assert len(res.higgins) == 3 and res.higgins == subs["C"]
    assert res.huq == A.all()
    assert not res.higgins_is_ideal


def test_a5_higgins_matches_plain_group_commutator():
    # for groups the words are -k - l + k + l, so the ideal of K v L they generate
    # is their normal closure in K v L
    A, subs = built("a5")
    K, L = subs["K"], subs["L"]
    gens = {plus(A, plus(A, neg(A, k), neg(A, l)), plus(A, k, l)) for k in K for l in L}
    J = group_closure(A, K.members | L.members)
    S = set(gens)
    while True:
        new = {plus(A, plus(A, neg(A, x), s), x) for x in J for s in S} | set(group_closure(A, S))
        if new <= S:
            break
        S |= new
    assert higgins(A, K, L).higgins.members == frozenset(S)


def test_d8star_higgins():
    D, subs = built("d8star")
    res = higgins(D, subs["K"], subs["K"])
    assert res.higgins.labels() == ["0", "s"]
    assert not res.higgins_is_ideal
    assert D.label(res.ideal_witness.value) == "s+2r"


def test_narng5_higgins_and_operation_witness():
    N, subs = built("narng5")
    res = higgins(N, subs["K"], subs["K"])
    assert res.higgins == subs["X1"] and len(res.higgins) == 5
    x, y, z = (N.element(c) for c in "xyz")
    assert int(N.tables["*"][x, z]) == y


def test_z16_ternary_example():
    A, subs = built("z16ternary")
    v = sh_nh_instance_check(A, subs["2Z"], subs["4Z"])
    assert v.higgins.labels() == ["0"]
    assert v.smith_normalization.members == frozenset({0, 8})
    assert v.nh_holds and not v.smith_equals_higgins
    assert v.to_dict()["smithEqualsHiggins"] is False


def test_z16_ternary_words_against_direct_products():
    # every t-product with arguments from 2Z, 4Z and Z, evaluated directly as integers mod 16
    A, subs = built("z16ternary")
    direct = {(a * b * c) % 16 for a in range(0, 16, 2) for b in range(0, 16, 4) for c in range(16)}
    assert direct == {0, 8}
    T = ternary_higgins(A, subs["2Z"], subs["4Z"], A.all())
    assert T.members == frozenset(direct)
    assert join(A, higgins(A, subs["2Z"], subs["4Z"]).higgins, T).members == frozenset({0, 8})


def _small_distributive(limit=8):
    return [e for e in small_entries(limit) if built(e)[0].is_distributive]


@pytest.mark.parametrize("eid", _small_distributive())
def test_huq_matches_lattice_oracle_on_ideal_pairs(eid):
    A, _ = built(eid)
    ideals = enumerate_ideals(A)
    for K, L in itertools.combinations_with_replacement(ideals, 2):
        assert huq(A, K, L) == huq_via_lattice_oracle(A, K, L)


@pytest.mark.parametrize("eid", _small_distributive())
def test_cooperates_matches_oracle(eid):
    A, _ = built(eid)
    subs = enumerate_subalgebras(A)
    for K, L in itertools.combinations_with_replacement(subs, 2):
        c = cooperates(A, K, L)
        assert c.cooperates == brute_cooperate(A, K.members, L.members)
        assert c.cooperates == (c.defect_count == 0)
        for opname, ks, ls in c.defects:
            t = A.tables[opname]
            assert A.plus(int(t[ks]), int(t[ls])) != int(t[tuple(A.plus(a, b) for a, b in zip(ks, ls))])


@pytest.mark.parametrize("eid", _small_distributive())
def test_higgins_trivial_iff_cooperate(eid):
    A, _ = built(eid)
    for K, L in itertools.combinations_with_replacement(enumerate_subalgebras(A), 2):
        assert (len(higgins(A, K, L).higgins) == 1) == cooperates(A, K, L).cooperates


@pytest.mark.parametrize("eid", ["narng2", "narng3", "zring8", "zring9", "ut2f2", "z16ternary"])
def test_multiadditive_shortcut_generates_same_ideal(eid, monkeypatch):
    A, _ = built(eid)
    ideals = enumerate_ideals(A, max_size=32)
    pairs = list(itertools.combinations_with_replacement(ideals, 2))[:40]
    exact = []
    for K, L in pairs:
        exact.append(higgins(A, K, L).higgins)
    monkeypatch.setattr(commutators, "EXHAUSTIVE_WORDS", 0)
    for (K, L), H in zip(pairs, exact):
        words = elementary_words(A, K, L)
        for tag, args, v in words:
            if tag.startswith("op:"):
                op = tag[3:]
                k = A.tables[op].ndim
                ks, ls = args[:k], args[k:]
                t = A.tables[op]
                w = A.plus(A.plus(A.minus(int(t[ks])), A.minus(int(t[ls]))), int(t[tuple(A.plus(a, b) for a, b in zip(ks, ls))]))
                assert w == v
        assert higgins(A, K, L).higgins == H


def test_elementary_word_values_recompute():
    A, subs = built("d8star")
    K = subs["K"]
    for tag, args, v in elementary_words(A, K, K):
        if tag == "group":
            k, l = args
            assert A.plus(A.plus(A.minus(k), A.minus(l)), A.plus(k, l)) == v
        else:
            t = A.tables[tag[3:]]
            k1, k2, l1, l2 = args
            assert A.plus(A.plus(A.minus(int(t[k1, k2])), A.minus(int(t[l1, l2]))), int(t[A.plus(k1, l1), A.plus(k2, l2)])) == v


def test_non_distributive_refused():
    a = np.arange(3)
    mul = ((a[:, None] > 0) & (a[None, :] > 0)).astype(int)
    A = FiniteAlgebra(
        Signature.group(("*", 2)), 3, {"+": (a[:, None] + a[None, :]) % 3, "-": (-a) % 3, "0": 0, "*": mul}
    )
    with pytest.raises(NotDistributive):
        higgins(A, A.all(), A.all())


def test_non_subalgebra_refused():
    A = cyclic(4)
    with pytest.raises(AlgebraError):
        higgins(A, Subset(A, [0, 1]), A.all())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_small_distributive(12)), st.data())
def test_higgins_symmetric_and_inside_meet_for_ideals(eid, data):
    A, _ = built(eid)
    ideals = enumerate_ideals(A)
    K = data.draw(st.sampled_from(ideals))
    L = data.draw(st.sampled_from(ideals))
    H = higgins(A, K, L)
    assert H.higgins == higgins(A, L, K).higgins
    assert H.higgins <= K & L
    assert H.higgins <= H.huq


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_small_distributive(12)), st.data())
def test_higgins_is_ideal_of_join(eid, data):
    A, _ = built(eid)
    subs = enumerate_subalgebras(A)
    K = data.draw(st.sampled_from(subs))
    L = data.draw(st.sampled_from(subs))
    H = higgins(A, K, L).higgins
    J = subalgebra_generate(A, K | L)
    assert H <= J
    assert ideal_closure_within(A, H, J) == H

