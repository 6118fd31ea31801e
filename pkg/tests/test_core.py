import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegacomm.core import (
    AlgebraError,
    AlgebraValidationError,
    FiniteAlgebra,
    Hom,
    Operation,
    Signature,
    SignatureError,
    Subset,
    check_hom,
    enumerate_automorphisms,
    eval_op,
    induced_subalgebra,
    kernel,
    product,
    quotient_by_ideal,
    subproduct,
    validate_distributivity,
    validate_group_laws,
)
from omegacomm.corpus import cyclic, d8star, dihedral, narng, ternary_cyclic, zring

from oracles import brute_automorphisms


def test_signature_needs_group_operations():
    with pytest.raises(SignatureError):
        Signature([Operation("+", 2, "group-plus"), Operation("0", 0, "group-zero")])


def test_signature_rejects_arity_four():
    with pytest.raises(SignatureError):
        Signature.group(("q", 4))


def test_signature_rejects_duplicate_names():
    with pytest.raises(SignatureError):
        Signature.group(("*", 2), ("*", 1))


def test_z4_passes_group_laws():
    rep = validate_group_laws(cyclic(4))
    assert rep.ok
    assert rep.passed_axioms == ["assoc", "identity", "inverse"]


def test_d8_presentation_relations_hold():
    D = dihedral(8)
    r, s = D.element("r"), D.element("s")
    assert D.sum(r, r, r, r) == 0
    assert D.sum(s, s) == 0
    assert D.sum(s, r, s) == D.element("3r")


def test_nonassociative_table_reports_witness():
    # x + y = x - y mod 3 is not associative
    a = np.arange(3)
    with pytest.raises(AlgebraValidationError) as exc:
        FiniteAlgebra(Signature.group(), 3, {"+": (a[:, None] - a[None, :]) % 3, "-": (-a) % 3, "0": 0})
    rep = exc.value.report
    assert rep.failed("assoc")
    x, y, z = rep.witness("assoc")
    t = (a[:, None] - a[None, :]) % 3
    assert t[t[x, y], z] != t[x, t[y, z]]


def test_out_of_range_entry_rejected():
    with pytest.raises(AlgebraValidationError):
        FiniteAlgebra(Signature.group(), 2, {"+": [[0, 1], [1, 2]], "-": [0, 1], "0": 0})


def test_distributivity_on_corpus_examples():
    assert validate_distributivity(d8star()).ok
    assert validate_distributivity(narng(5)).ok
    rep = validate_distributivity(ternary_cyclic(4))
    assert rep.passed_axioms == ["distrib:t:1", "distrib:t:2", "distrib:t:3"]


def test_distributivity_failure_witness():
    # x * y = 1 whenever both are nonzero, on Z/3: not distributive
    a = np.arange(3)
    mul = ((a[:, None] > 0) & (a[None, :] > 0)).astype(int)
    A = FiniteAlgebra(
        Signature.group(("*", 2)), 3,
        {"+": (a[:, None] + a[None, :]) % 3, "-": (-a) % 3, "0": 0, "*": mul},
    )
    rep = validate_distributivity(A)
    assert rep.failed("distrib:*:1") and rep.failed("distrib:*:2")
    y, x, z = rep.witness("distrib:*:1")  # slot 1 holds y, then x, then z
    assert mul[(y + z) % 3, x] != (mul[y, x] + mul[z, x]) % 3


def test_eval_op_examples():
    D = d8star()
    assert D.label(eval_op(D, "*", ["r", "r"])) == "s"
    N = narng(5)
    assert N.label(eval_op(N, "*", ["x", "z"])) == "y"
    with pytest.raises(AlgebraError):
        eval_op(D, "*", ["r"])


def test_product_projections_are_homs():
    P, p1, p2 = product(cyclic(2), cyclic(3))
    assert P.n == 6
    assert check_hom(p1).ok and check_hom(p2).ok
    assert validate_group_laws(P).ok


def test_subproduct_matches_full_product():
    A = zring(4)
    P, _, _ = product(A, A)
    pairs = [(a, b) for a in range(4) for b in range(4) if (a - b) % 2 == 0]
    S, q1, q2 = subproduct(A, A, pairs)
    for op in A.signature.ops:
        if op.arity != 2:
            continue
        for i, j in itertools.product(range(S.n), repeat=2):
            v = S.tables[op.name][i, j]
            full = P.tables[op.name][q1(i) * 4 + q2(i), q1(j) * 4 + q2(j)]
            assert (q1(v), q2(v)) == (int(full) // 4, int(full) % 4)


def test_quotient_and_kernel():
    A = cyclic(12)
    I = Subset(A, range(0, 12, 3))
    Q, q = quotient_by_ideal(A, I)
    assert Q.n == 3
    assert check_hom(q).ok
    assert kernel(q) == I


def test_induced_subalgebra_inclusion_is_hom():
    A = zring(8)
    B, inc = induced_subalgebra(A, Subset(A, [0, 2, 4, 6]))
    assert B.n == 4 and check_hom(inc).ok and inc.is_injective()


def test_hom_rejects_wrong_length():
    A = cyclic(3)
    with pytest.raises(AlgebraError):
        Hom(A, A, [0, 1])


def test_automorphisms_of_d8star_match_brute_force():
    D = d8star()
    ours = sorted(tuple(int(v) for v in h.map) for h in enumerate_automorphisms(D))
    assert ours == sorted(brute_automorphisms(D))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8])
def test_automorphism_count_of_cyclic_groups(m):
    phi = sum(1 for k in range(1, m + 1) if np.gcd(k, m) == 1)
    assert len(enumerate_automorphisms(cyclic(m))) == phi


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=9), st.data())
def test_random_tables_fail_validation_with_true_witness(n, data):
    # a relabelled copy of Z/n is a group; a random edit usually breaks it
    perm = np.array(data.draw(st.permutations(list(range(1, n)))), dtype=int)
    perm = np.concatenate([[0], perm])
    inv = np.argsort(perm)
    add = perm[(inv[:, None] + inv[None, :]) % n]
    neg = perm[(-inv) % n]
    assert validate_group_laws(FiniteAlgebra(Signature.group(), n, {"+": add, "-": neg, "0": 0})).ok
    i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1))
    bad = add.copy()
    bad[i, j] = v
    A = FiniteAlgebra(Signature.group(), n, {"+": bad, "-": neg, "0": 0}, check_laws=False)
    rep = validate_group_laws(A)
    if v == add[i, j]:
        assert rep.ok
    else:
        assert not rep.ok
        tag, w = rep.failures[0]
        if tag == "assoc":
            x, y, z = w
            assert bad[bad[x, y], z] != bad[x, bad[y, z]]
        elif tag == "identity":
            (x,) = w
            assert bad[0, x] != x or bad[x, 0] != x
        else:
            (x,) = w
            assert bad[neg[x], x] != 0 or bad[x, neg[x]] != 0
