import itertools
import math

import numpy as np
import pytest

from omegacomm.audits import (
    NONE_WITHIN_BOUND,
    InvalidEmbedding,
    audit_nh,
    audit_sh,
    char_commutator_check,
    characteristic_check,
    check_remark_prcom,
    classify_ci,
    default_bound,
    holomorph_embedding,
)
from omegacomm.core import AlgebraError, BoundExceeded, FiniteAlgebra, Hom, Signature, Subset, induced_subalgebra
from omegacomm.corpus import cyclic, dihedral, zring
from omegacomm.subobjects import enumerate_ideals, is_ideal

from conftest import built, small_entries
from oracles import brute_is_ideal

CI7 = ["CI1", "CI2", "CI3", "CI4", "CI5", "CI6", "CI7"]


def test_default_bounds():
    assert default_bound(cyclic(4)) == 16
    assert default_bound(zring(4)) == 12


@pytest.mark.parametrize("eid", small_entries(12, kinds={"group", "ring"}))
def test_audit_nh_clean_on_groups_and_rings(eid):
    A, _ = built(eid)
    rep = audit_nh(A)
    n = len(enumerate_ideals(A))
    assert rep.ideal_pairs_checked == n * (n + 1) // 2
    assert rep.ok and len(rep.confirmations) == rep.ideal_pairs_checked
    for _, _, H in rep.confirmations:
        assert brute_is_ideal(A, H.members)


def test_audit_nh_d8star_violation_reverifies():
    D, _ = built("d8star")
    rep = audit_nh(D)
    assert len(rep.nh_violations) >= 1
    assert rep.reverify()
    d = rep.to_dict()
    assert d["violationCount"] == len(rep.nh_violations)
    assert d["nhViolations"][0]["escaping"] == "s+2r"
    assert "violations: 1" in rep.to_text()


def _multiples_of_gcd(values, m):
    g = m
    for v in values:
        g = math.gcd(g, v)
    return frozenset(range(0, m, g))


def test_audit_sh_z16_ternary_against_integer_products():
    # in Z/16 with t(a, b, c) = abc every ideal is dZ, so both commutators are
    # the multiples of the gcd of their generating products
    A, _ = built("z16ternary")
    rep = audit_sh(A, max_size=16)
    assert rep.reverify()
    want = []
    for K, L in itertools.combinations_with_replacement(enumerate_ideals(A, max_size=16), 2):
        ks, ls, every = K.sorted(), L.sorted(), range(16)
        smith = _multiples_of_gcd((k * l * a for k in ks for l in ls for a in every), 16)
        # mixed terms of t(k + l): each slot from K or L, both used
        mixed = (
            a * b * c
            for pattern in itertools.product((ks, ls), repeat=3)
            if any(p is ks for p in pattern) and any(p is ls for p in pattern)
            for a, b, c in itertools.product(*pattern)
        )
        hq = _multiples_of_gcd(mixed, 16)
        if hq != smith:
            want.append((K.members, L.members, hq, smith))
    got = [(K.members, L.members, H.members, S.members) for K, L, H, S in rep.sh_violations]
    assert sorted(got, key=str) == sorted(want, key=str)
    assert len(got) == 2
    assert audit_nh(A, max_size=16).ok


def test_audit_sh_narng5_clean():
    A, _ = built("narng5")
    rep = audit_sh(A, max_size=125)
    assert rep.ideal_pairs_checked > 0
    assert rep.ok


def test_audit_bound():
    A, _ = built("narng3")
    with pytest.raises(BoundExceeded):
        audit_nh(A)


@pytest.mark.parametrize("eid", small_entries(12, kinds={"group"}))
def test_audit_sh_clean_on_groups(eid):
    A, _ = built(eid)
    assert audit_sh(A).ok


def test_reverify_detects_tampering():
    D, _ = built("d8star")
    rep = audit_nh(D)
    K, L, w = rep.nh_violations[0]
    rep.nh_violations[0] = (K, L, type(w)(w.kind, w.data, 0))
    assert not rep.reverify()


def test_classify_ci_d8star_fails_only_ci7():
    D, _ = built("d8star")
    rep = classify_ci(D)
    failed = [a for a in rep.failed() if a in CI7]
    assert failed == ["CI7"]
    x, y, z = rep.axioms["CI7"].witness[1:]
    t = D.tables["*"]
    assert D.plus(x, int(t[y, z])) != D.plus(int(t[y, z]), x)


def test_classify_ci_narng5_only_ci8_missing():
    N, _ = built("narng5")
    rep = classify_ci(N, ci8_depth=2)
    assert rep.failed() == ["CI8"]
    assert set(rep.ci8_witnesses.values()) == {NONE_WITHIN_BOUND}
    assert NONE_WITHIN_BOUND in rep.axioms["CI8"].detail


@pytest.mark.parametrize("eid", ["zring4", "zring6", "gf4", "ut2f2"])
def test_classify_ci_rings_pass(eid):
    A, _ = built(eid)
    rep = classify_ci(A)
    assert rep.all_pass, rep.to_text()


def test_ci8_witness_holds_exhaustively_on_zring4():
    # rings are associative, so x*(y*z) alone is a valid CI8 word
    A, _ = built("zring4")
    rep = classify_ci(A)
    assert rep.ci8_witnesses["(*,*)"] != NONE_WITHIN_BOUND


def test_ci3_fails_on_noncommutative_ring_without_opposite():
    A, _ = built("ut2f2")
    sig = Signature.group(("*", 2))
    B = FiniteAlgebra(sig, A.n, {k: A.tables[k] for k in ("+", "-", "0", "*")}, name="ut2f2-no-op")
    rep = classify_ci(B)
    assert "CI3" in rep.failed()


def test_classify_ci_rejects_ternary():
    A, _ = built("z16ternary")
    with pytest.raises(AlgebraError):
        classify_ci(A)


def test_prcom_holds_and_is_skipped_without_ci5():
    for eid in ("zring6", "d8star", "narng2"):
        res = check_remark_prcom(built(eid)[0])
        assert res.skipped is None and res.report.ok
    a = np.arange(3)
    mul = ((a[:, None] > 0) & (a[None, :] > 0)).astype(int)
    bad = FiniteAlgebra(
        Signature.group(("*", 2)), 3, {"+": (a[:, None] + a[None, :]) % 3, "-": (-a) % 3, "0": 0, "*": mul}
    )
    res = check_remark_prcom(bad)
    assert res.report is None and "CI5" in res.skipped


def test_characteristic_klein_subgroups_are_not_characteristic():
    G, _ = built("z2xz2")
    H, h = holomorph_embedding(G)
    for a in range(1, 4):
        rep = characteristic_check(G, Subset(G, [0, a]), [(H, h)])
        assert not rep.aut_invariant
        phi = rep.moved_by
        assert {phi[0], phi[a]} != {0, a}
        assert not rep.per_embedding[0].normal
        assert not rep.characteristic


def test_characteristic_subgroup_of_cyclic_group():
    G = cyclic(8)
    H, h = holomorph_embedding(G)
    assert H.n == 32
    rep = characteristic_check(G, Subset(G, [0, 2, 4, 6]), [(H, h)])
    assert rep.characteristic
    assert rep.to_dict()["characteristic"] is True


@pytest.mark.parametrize("eid", ["z4", "z2xz2", "dih6", "q8"])
def test_automorphism_invariance_equals_holomorph_normality(eid):
    # in a group, characteristic subgroups are exactly those normal in the holomorph
    G, _ = built(eid)
    H, h = holomorph_embedding(G)
    for S in enumerate_ideals(G):
        rep = characteristic_check(G, S, [(H, h)])
        assert rep.aut_invariant == rep.per_embedding[0].normal == brute_is_ideal(H, h.image(S).members)


def test_invalid_embedding_rejected():
    G = cyclic(4)
    D = dihedral(8)
    with pytest.raises(InvalidEmbedding):
        characteristic_check(G, G.all(), [(D, Hom(G, D, [0, 0, 0, 0]))])
    # Z/2 onto {0, s} is injective and a hom, but its image is not normal
    Z2 = cyclic(2)
    with pytest.raises(InvalidEmbedding):
        characteristic_check(Z2, Z2.all(), [(D, Hom(Z2, D, [0, D.element("s")]))])


def test_char_commutator_expected_failure_in_d8star():
    D, subs = built("d8star")
    Ka, inc = induced_subalgebra(D, subs["K"])
    rep = char_commutator_check(Ka, Ka.all(), Ka.all(), [(D, inc)])
    assert inc.image(rep.huq).labels() == ["0", "s"]
    assert not rep.passed and rep.expected_failure
    assert rep.nh_instance == [False]


def test_char_commutator_passes_in_groups():
    G = cyclic(8)
    H, h = holomorph_embedding(G)
    K = Subset(G, [0, 2, 4, 6])
    rep = char_commutator_check(G, K, G.all(), [(H, h)])
    assert rep.passed and not rep.expected_failure
