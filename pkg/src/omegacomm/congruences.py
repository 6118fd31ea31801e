"""Congruences, the ideal correspondence, and the Smith commutator.

Congruences are stored as block-id arrays in canonical form: every element
maps to the least member of its block.
"""
from __future__ import annotations

import itertools

import numpy as np

from .core import (
    AlgebraError,
    BoundExceeded,
    FiniteAlgebra,
    NotAnIdeal,
    Subset,
    coset_ids,
    product,
    subproduct,
)
from .subobjects import _closure, is_ideal, normal_closure


def _canonical(labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    least = {}
    out = np.empty_like(labels)
    for i, b in enumerate(labels.tolist()):
        out[i] = least.setdefault(b, i)
    return out


class Congruence:
    def __init__(self, algebra: FiniteAlgebra, partition):
        self.algebra = algebra
        p = _canonical(partition)
        if p.shape != (algebra.n,):
            raise AlgebraError("partition length must equal the carrier size")
        p.setflags(write=False)
        self.partition = p

    def related(self, a: int, b: int) -> bool:
        return self.partition[a] == self.partition[b]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, b in enumerate(self.partition.tolist()):
            out.setdefault(b, []).append(i)
        return list(out.values())

    def pairs(self) -> list[tuple[int, int]]:
        p = self.partition
        return [(int(a), int(b)) for a, b in np.argwhere(p[:, None] == p[None, :])]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Congruence)
            and other.algebra is self.algebra
            and np.array_equal(self.partition, other.partition)
        )

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.partition.tobytes()))

    def __le__(self, other: "Congruence") -> bool:
        """Refinement: every block of self lies inside a block of other."""
        p, q = self.partition, other.partition
        return bool(np.all(q == q[p]))

    def meet(self, other: "Congruence") -> "Congruence":
        n = self.algebra.n
        return Congruence(self.algebra, self.partition.astype(np.int64) * n + other.partition)

    def __repr__(self) -> str:
        A = self.algebra
        return "Congruence[" + " | ".join(" ".join(A.label(a) for a in b) for b in self.blocks()) + "]"

    def compatibility_witness(self):
        """First ``(op, args, slot)`` where replacing ``args[slot]`` by a related element changes the block."""
        A = self.algebra
        p = self.partition
        for op in A.signature.ops:
            if op.arity == 0:
                continue
            tab = A.tables[op.name]
            lhs = p[tab]
            for j in range(op.arity):
                idx = [np.arange(A.n)] * op.arity
                idx[j] = p
                rhs = p[tab[np.ix_(*idx)]]
                bad = lhs != rhs
                if bad.any():
                    return op.name, tuple(int(i) for i in np.argwhere(bad)[0]), j
        return None

    def is_compatible(self) -> bool:
        return self.compatibility_witness() is None


def discrete(A: FiniteAlgebra) -> Congruence:
    return Congruence(A, np.arange(A.n))


def full(A: FiniteAlgebra) -> Congruence:
    return Congruence(A, np.zeros(A.n, dtype=np.int64))


def congruence_from_ideal(A: FiniteAlgebra, I: Subset) -> Congruence:
    ok, wit = is_ideal(A, I)
    if not ok:
        raise NotAnIdeal(f"{I!r} is not an ideal of {A.name}", wit)
    c = Congruence(A, coset_ids(A, I))
    w = c.compatibility_witness()
    if w is not None:
        raise AssertionError(f"coset partition of an ideal is not compatible at {w}")
    return c


def normalization(c: Congruence) -> Subset:
    """The block of 0."""
    return Subset.from_mask(c.algebra, c.partition == c.partition[0])


def congruence_generate(A: FiniteAlgebra, pairs) -> Congruence:
    """Least congruence containing ``pairs``.

    In an Omega-group a congruence is determined by its 0-block, so this is the
    congruence of the ideal generated by the differences ``-u + v``.
    """
    diffs = [A.plus(A.minus(int(u)), int(v)) for u, v in pairs]
    return congruence_from_ideal(A, normal_closure(A, Subset(A, diffs)))


def congruence_generate_malcev(A: FiniteAlgebra, pairs, max_size: int = 16) -> Congruence:
    """Least congruence containing ``pairs`` as a reflexive subalgebra of ``A x A``.

    With the Mal'cev term ``x - y + z`` every reflexive subalgebra of the square
    is a congruence; the result is checked to be one.
    """
    if A.n > max_size:
        raise BoundExceeded(f"square of {A.n} elements exceeds the bound {max_size}")
    P, p1, p2 = product(A, A)
    n = A.n
    seed = np.zeros(P.n, dtype=bool)
    seed[np.arange(n) * n + np.arange(n)] = True
    for u, v in pairs:
        seed[int(u) * n + int(v)] = True
    rel = _closure(P, seed)
    a, b = p1.map[rel], p2.map[rel]
    relation = np.zeros((n, n), dtype=bool)
    relation[a, b] = True
    blocks = np.argmax(relation, axis=1)
    c = Congruence(A, blocks)
    same = c.partition[:, None] == c.partition[None, :]
    if not np.array_equal(same, relation):
        raise AssertionError("reflexive subalgebra of the square is not an equivalence relation")
    if not c.is_compatible():
        raise AssertionError("reflexive subalgebra of the square is not compatible")
    return c


def relation_algebra(A: FiniteAlgebra, alpha: Congruence):
    """The subalgebra ``A(alpha)`` of ``A x A`` on related pairs, with both projections."""
    return subproduct(A, A, alpha.pairs(), name=f"{A.name}(alpha)")


def smith_commutator(A: FiniteAlgebra, alpha: Congruence, beta: Congruence, max_size: int = 20) -> Congruence:
    """Smith commutator via the Delta construction on ``A(alpha)``.

    Delta is the congruence of ``A(alpha)`` generated by the pairs
    ``((a, a), (b, b))`` with ``a beta b``; the commutator relates ``a`` and
    ``b`` when ``(a, a)`` and ``(a, b)`` are Delta-related.
    """
    if A.n > max_size:
        raise BoundExceeded(f"Smith commutator limited to {max_size} elements, got {A.n}")
    if alpha.algebra is not A or beta.algebra is not A:
        raise AlgebraError("congruences of a different algebra")
    Aa, p1, p2 = relation_algebra(A, alpha)
    index = {(int(x), int(y)): i for i, (x, y) in enumerate(zip(p1.map, p2.map))}
    gen = [(index[(a, a)], index[(b, b)]) for a, b in beta.pairs() if a < b]
    delta = congruence_generate(Aa, gen)
    n = A.n
    relation = np.zeros((n, n), dtype=bool)
    for (a, b), i in index.items():
        if delta.related(index[(a, a)], i):
            relation[a, b] = True
    c = Congruence(A, np.argmax(relation, axis=1))
    if not np.array_equal(c.partition[:, None] == c.partition[None, :], relation):
        raise AssertionError("Smith commutator relation is not an equivalence")
    if not c.is_compatible():
        raise AssertionError("Smith commutator relation is not compatible")
    if not c <= alpha.meet(beta):
        raise AssertionError("Smith commutator is not below the meet")
    return c


def _group_span(add: np.ndarray, mask: np.ndarray, v: int) -> np.ndarray:
    """Subgroup generated by the subgroup ``mask`` and ``v`` in an abelian group."""
    out = mask.copy()
    ids = np.flatnonzero(mask)
    step = v
    while not out[step]:
        out[add[ids, step]] = True
        step = int(add[step, v])
    return out


def _abelian_generators(A: FiniteAlgebra, members: np.ndarray) -> list[int]:
    mask = np.zeros(A.n, dtype=bool)
    mask[0] = True
    gens = []
    for a in np.flatnonzero(members):
        if not mask[a]:
            gens.append(int(a))
            mask = _group_span(A.add, mask, int(a))
    return gens


def smith_normalization_linear(A: FiniteAlgebra, K: Subset, L: Subset) -> Subset:
    """Smith normalization for abelian algebras whose operations all distribute.

    Works on pairs inside ``A x A`` without tabulating ``A(alpha)``: Delta is the
    ideal of ``A(alpha)`` generated by the pairs ``(l, l)``, and multi-additivity
    lets the ideal closure use group generators of ``A(alpha)`` only. The result
    is ``{c : (0, c) in Delta}``.
    """
    if not (A.is_abelian and A.is_distributive):
        raise AlgebraError("the linear Smith route needs an abelian algebra with distributive operations")
    for S in (K, L):
        ok, wit = is_ideal(A, S)
        if not ok:
            raise NotAnIdeal(f"{S!r} is not an ideal of {A.name}", wit)
    n = A.n
    # pair (u, v) is encoded as u * n + v; addition is componentwise
    pa = np.arange(n * n) // n
    pb = np.arange(n * n) % n
    padd = (A.add[pa[:, None], pa[None, :]].astype(np.int64) * n + A.add[pb[:, None], pb[None, :]]) \
        if n * n <= 4096 else None

    def pair_add(x: int, y: int) -> int:
        return int(A.add[x // n, y // n]) * n + int(A.add[x % n, y % n])

    def span(mask: np.ndarray, v: int) -> np.ndarray:
        out = mask.copy()
        ids = np.flatnonzero(mask)
        step = v
        while not out[step]:
            if padd is not None:
                out[padd[ids, step]] = True
            else:
                out[A.add[ids // n, step // n].astype(np.int64) * n + A.add[ids % n, step % n]] = True
            step = pair_add(step, v)
        return out

    amb = [a * n + a for a in _abelian_generators(A, np.ones(n, dtype=bool))]
    amb += [k for k in _abelian_generators(A, K.mask)]  # (0, k) has code k
    delta = np.zeros(n * n, dtype=bool)
    delta[0] = True
    gens: list[int] = []
    work = [l * n + l for l in _abelian_generators(A, L.mask)]
    ops = list(A.omega)
    while work:
        d = work.pop()
        if delta[d]:
            continue
        delta = span(delta, d)
        gens.append(d)
        du, dv = d // n, d % n
        for op in ops:
            tab = A.tables[op.name]
            for slot in range(op.arity):
                for others in itertools.product(amb, repeat=op.arity - 1):
                    args_u = [o // n for o in others]
                    args_v = [o % n for o in others]
                    args_u.insert(slot, du)
                    args_v.insert(slot, dv)
                    v = int(tab[tuple(args_u)]) * n + int(tab[tuple(args_v)])
                    if not delta[v]:
                        work.append(v)
    return Subset.from_mask(A, delta[:n])


def smith_normalization(A: FiniteAlgebra, K: Subset, L: Subset, max_size: int = 20, method: str = "auto") -> Subset:
    """0-block of the Smith commutator of the congruences of two ideals.

    ``method`` is ``table`` (Delta construction on the tabulated ``A(alpha)``),
    ``linear`` (pair-space closure, abelian distributive algebras only) or
    ``auto``: the table route up to ``max_size`` elements, else the linear one
    when it applies.
    """
    if method == "auto":
        method = "table" if A.n <= max_size or not (A.is_abelian and A.is_distributive) else "linear"
    if method == "linear":
        return smith_normalization_linear(A, K, L)
    if method != "table":
        raise AlgebraError(f"unknown Smith method {method!r}")
    return normalization(
        smith_commutator(A, congruence_from_ideal(A, K), congruence_from_ideal(A, L), max_size=max_size)
    )
