import pytest

from omegacomm import corpus
from omegacomm.core import validate_distributivity, validate_group_laws
from omegacomm.subobjects import enumerate_ideals, is_ideal

from conftest import built
from oracles import group_closure

SIZES = {
    "z1": 1, "z16": 16, "z2xz2xz2xz2": 16, "dih12": 12, "q8": 8, "a4": 12, "s4": 24, "a5": 60,
    "gf4": 4, "ut2f2": 8, "d8star": 8, "narng5": 125, "z32ternary": 32,
}


@pytest.mark.parametrize("eid,n", sorted(SIZES.items()))
def test_sizes(eid, n):
    assert built(eid)[0].n == n


@pytest.mark.parametrize("eid", corpus.corpus_ids())
def test_every_entry_is_a_distributive_omega_group(eid):
    A, subs = built(eid)
    assert validate_group_laws(A).ok
    assert validate_distributivity(A).ok
    for S in subs.values():
        assert S.algebra is A and 0 in S


def test_ids_unique_and_kinds():
    es = corpus.build_corpus()
    assert len({e.id for e in es}) == len(es)
    assert {e.kind for e in es} == {"group", "ring", "other"}
    with pytest.raises(KeyError):
        corpus.get("nope")


def test_a5_is_simple():
    A, _ = built("a5")
    assert [len(I) for I in enumerate_ideals(A, max_size=60)] == [1, 60]


def test_a5_named_subgroups():
    A, subs = built("a5")
    assert len(subs["K"]) == 2 and len(subs["L"]) == 2
    assert subs["C"].members == group_closure(A, [A.element("(345)")])


def test_d8star_deterministic_and_product_table():
    a = corpus.d8star()
    b = corpus.d8star()
    assert (a.tables["*"] == b.tables["*"]).all()
    r, s = a.element("r"), a.element("s")
    assert int(a.tables["*"][r, r]) == s
    D, subs = built("d8star")
    assert is_ideal(D, subs["K"])[0]
    assert not is_ideal(D, subs["S"])[0]


def test_narng_product_values():
    N, subs = built("narng3")
    x, y, z = (N.element(c) for c in "xyz")
    t = N.tables["*"]
    assert int(t[x, z]) == y
    assert len(subs["K"]) == 9 and len(subs["X1"]) == 3


def test_holomorph_order():
    G, _ = built("dih6")
    H, ids = corpus.holomorph(G)
    assert H.n == 36 and len(set(ids.tolist())) == 6


def test_gf4_is_a_field():
    F, _ = built("gf4")
    t = F.tables["*"]
    for a in range(1, 4):
        assert any(F.label(int(t[a, b])) == "1" for b in range(1, 4))
