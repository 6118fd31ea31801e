"""Subalgebras, ideals and normal closures.

Closures are semi-naive fixpoints over boolean masks: each round only
evaluates tuples that involve at least one element added in the previous round.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AlgebraError,
    BoundExceeded,
    FiniteAlgebra,
    Hom,
    NotAnIdeal,
    Subset,
    coset_ids,
    induced_subalgebra,
    subproduct,
)


@dataclass(frozen=True)
class IdealWitness:
    """Why a subset is not an ideal.

    kind ``conjugation``: data ``(x, s)`` with ``-x + s + x`` escaping.
    kind ``operation``: data ``(op, args)``, one argument from the subset.
    kind ``operation-shift``: data ``(op, slot, args, s)``, for slots where the
    operation does not distribute; the escaping value is ``-op(args) + op(args')``
    with ``args'`` having ``args[slot] + s`` in that slot.
    """

    kind: str
    data: tuple
    value: int

    def describe(self, A: FiniteAlgebra) -> str:
        L = A.label
        if self.kind == "conjugation":
            x, s = self.data
            return f"-{L(x)} + {L(s)} + {L(x)} = {L(self.value)}"
        if self.kind == "operation":
            op, args = self.data
            return f"{op}{A.fmt_tuple(args)} = {L(self.value)}"
        op, slot, args, s = self.data
        return f"-{op}{A.fmt_tuple(args)} + {op}(... slot {slot + 1} shifted by {L(s)}) = {L(self.value)}"

    def recompute(self, A: FiniteAlgebra) -> int:
        if self.kind == "conjugation":
            x, s = self.data
            return A.conj(x, s)
        if self.kind == "operation":
            op, args = self.data
            return int(A.tables[op][tuple(args)])
        op, slot, args, s = self.data
        shifted = list(args)
        shifted[slot] = A.plus(shifted[slot], s)
        tab = A.tables[op]
        return A.plus(A.minus(int(tab[tuple(args)])), int(tab[tuple(shifted)]))


def _op_images(A: FiniteAlgebra, op, slot: int, front: np.ndarray, amb: np.ndarray, out: np.ndarray):
    """Mark every image of ``op`` with a frontier element in ``slot`` and ambient elsewhere."""
    tab = A.tables[op.name]
    if A.distributive_slots[op.name][slot]:
        idx = [amb] * op.arity
        idx[slot] = front
        out[tab[np.ix_(*idx)].ravel()] = True
        return
    add, neg = A.add, A.neg
    base_idx = np.ix_(*([amb] * op.arity))
    base = neg[tab[base_idx]]
    for s in front:
        idx = [amb] * op.arity
        idx[slot] = add[amb, s]
        out[add[base, tab[np.ix_(*idx)]].ravel()] = True


def _closure(A: FiniteAlgebra, seed: np.ndarray, ambient: np.ndarray | None = None) -> np.ndarray:
    """Least subalgebra containing ``seed``; if ``ambient`` is given, least ideal of it."""
    n = A.n
    members = np.asarray(seed, dtype=bool).copy()
    members[0] = True
    frontier = members.copy()
    ops = [op for op in A.signature.ops if op.arity > 0]
    add, neg = A.add, A.neg
    amb = np.flatnonzero(ambient) if ambient is not None else None
    while frontier.any():
        new = np.zeros(n, dtype=bool)
        f_ids = np.flatnonzero(frontier)
        m_ids = np.flatnonzero(members)
        old_ids = np.flatnonzero(members & ~frontier)
        for op in ops:
            tab = A.tables[op.name]
            k = op.arity
            for j in range(k):
                idx = [old_ids] * j + [f_ids] + [m_ids] * (k - j - 1)
                if any(len(x) == 0 for x in idx):
                    continue
                new[tab[np.ix_(*idx)].ravel()] = True
        if amb is not None:
            new[add[add[neg[amb][:, None], f_ids[None, :]], amb[:, None]].ravel()] = True
            for op in A.omega:
                for j in range(op.arity):
                    _op_images(A, op, j, f_ids, amb, new)
        new &= ~members
        members |= new
        frontier = new
    return members


def subalgebra_generate(A: FiniteAlgebra, gens: Subset) -> Subset:
    return Subset.from_mask(A, _closure(A, gens.mask))


def ideal_closure_within(A: FiniteAlgebra, S: Subset, ambient: Subset) -> Subset:
    """Least ideal of the subalgebra ``ambient`` containing ``S``."""
    if not S <= ambient:
        raise AlgebraError("generators must lie inside the ambient subalgebra")
    return Subset.from_mask(A, _closure(A, S.mask, ambient.mask))


def normal_closure(A: FiniteAlgebra, S: Subset) -> Subset:
    return Subset.from_mask(A, _closure(A, S.mask, np.ones(A.n, dtype=bool)))


def is_subalgebra(A: FiniteAlgebra, S: Subset) -> bool:
    return 0 in S and subalgebra_generate(A, S) == S


def is_ideal(A: FiniteAlgebra, S: Subset) -> tuple[bool, IdealWitness | None]:
    """Ideal test with the first violation as witness.

    Checks closure under conjugation and, per extra operation and slot, either
    ``op(.., s, ..) in S`` (slot distributes over +) or the shifted form
    ``-op(xs) + op(xs with x_j + s) in S`` (it does not).
    """
    if not is_subalgebra(A, S):
        raise AlgebraError(f"{S!r} is not a subalgebra of {A.name}")
    add, neg = A.add, A.neg
    ids = S.ids
    mask = S.mask
    allx = np.arange(A.n)
    conj = add[add[neg[:, None], ids[None, :]], allx[:, None]]  # [x, s]
    bad = ~mask[conj]
    if bad.any():
        x, si = np.argwhere(bad)[0]
        return False, IdealWitness("conjugation", (int(x), int(ids[si])), int(conj[x, si]))
    for op in A.omega:
        tab = A.tables[op.name]
        for j in range(op.arity):
            if A.distributive_slots[op.name][j]:
                idx = [allx] * op.arity
                idx[j] = ids
                vals = tab[np.ix_(*idx)]
                bad = ~mask[vals]
                if bad.any():
                    pos = np.argwhere(bad)[0]
                    args = [int(p) for p in pos]
                    args[j] = int(ids[pos[j]])
                    return False, IdealWitness("operation", (op.name, tuple(args)), int(vals[tuple(pos)]))
            else:
                base = neg[tab]
                for s in ids:
                    idx = [allx] * op.arity
                    idx[j] = add[allx, s]
                    vals = add[base, tab[np.ix_(*idx)]]
                    bad = ~mask[vals]
                    if bad.any():
                        pos = tuple(int(p) for p in np.argwhere(bad)[0])
                        return False, IdealWitness(
                            "operation-shift", (op.name, j, pos, int(s)), int(vals[pos])
                        )
    return True, None


def join(A: FiniteAlgebra, S: Subset, T: Subset) -> Subset:
    J = subalgebra_generate(A, S | T)
    if len(S) and len(T) and is_subalgebra(A, S) and is_subalgebra(A, T):
        if is_ideal(A, S)[0] and is_ideal(A, T)[0]:
            assert is_ideal(A, J)[0], "join of two ideals is not an ideal"
    return J


def normality_via_commutator(A: FiniteAlgebra, S: Subset) -> bool:
    """``S`` is an ideal iff its Higgins commutator with the whole algebra lies in it."""
    from .commutators import higgins

    return higgins(A, S, A.all()).higgins <= S


def enumerate_subalgebras(A: FiniteAlgebra, max_size: int = 12, start: Subset | None = None) -> list[Subset]:
    """All subalgebras (containing ``start`` if given) by one-generator-at-a-time BFS."""
    if A.n > max_size:
        raise BoundExceeded(f"subalgebra enumeration limited to {max_size} elements, got {A.n}")
    first = subalgebra_generate(A, start if start is not None else A.zero_subset())
    seen = {first.members: first}
    queue = [first]
    while queue:
        S = queue.pop()
        for a in range(A.n):
            if a in S:
                continue
            T = Subset.from_mask(A, _closure(A, S.mask | (np.arange(A.n) == a)))
            if T.members not in seen:
                seen[T.members] = T
                queue.append(T)
    return sorted(seen.values(), key=Subset.sort_key)


def enumerate_ideals(A: FiniteAlgebra, max_size: int = 16, within: Subset | None = None) -> list[Subset]:
    """All ideals (contained in the ideal ``within`` if given), by joining principal normal closures.

    The size bound applies to ``within`` when it is given, else to ``A``.
    """
    space = within.ids if within is not None else np.arange(A.n)
    if len(space) > max_size:
        raise BoundExceeded(f"ideal enumeration limited to {max_size} elements, got {len(space)}")
    full = np.ones(A.n, dtype=bool)
    first = A.zero_subset()
    seen = {first.members: first}
    queue = [first]
    while queue:
        S = queue.pop()
        for a in space:
            if a in S:
                continue
            T = Subset.from_mask(A, _closure(A, S.mask | (np.arange(A.n) == a), full))
            if T.members not in seen:
                seen[T.members] = T
                queue.append(T)
    if within is not None and not all(T <= within for T in seen.values()):
        raise AlgebraError(f"{within!r} is not an ideal of {A.name}")
    return sorted(seen.values(), key=Subset.sort_key)


def protosplit_pullback(A: FiniteAlgebra, X: Subset):
    """The split extension ``X -> A x_{A/X} A <=> A`` (section diagonal, retraction second projection)."""
    from .points import make_split_extension

    ok, wit = is_ideal(A, X)
    if not ok:
        raise NotAnIdeal(f"{X!r} is not an ideal of {A.name}", wit)
    block = coset_ids(A, X)
    pairs = [(a, b) for a in range(A.n) for b in range(A.n) if block[a] == block[b]]
    P, p1, p2 = subproduct(A, A, pairs, name=f"{A.name}x_q{A.name}")
    Xalg, xinc = induced_subalgebra(A, X, name=f"{A.name}|X")
    lookup = {pr: i for i, pr in enumerate(pairs)}
    emb = [lookup[(int(xinc(i)), 0)] for i in range(Xalg.n)]
    diag = [lookup[(a, a)] for a in range(A.n)]
    return make_split_extension(Hom(Xalg, P, emb), p2, Hom(A, P, diag))
