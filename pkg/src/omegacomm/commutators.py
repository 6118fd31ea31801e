"""Higgins, Huq and ternary commutators of subalgebras of a finite Omega-group.

The Higgins commutator of K and L is the ideal of the join K v L generated by
the elementary commutator words ``-w(k) - w(l) + w(k + l)``, where ``w`` is the
identity or a single operation applied to tuples ``k`` in K^n and ``l`` in L^n.
That description is only valid for distributive Omega-groups, so every entry
point here refuses algebras whose extra operations do not distribute.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .congruences import smith_normalization
from .core import AlgebraError, BoundExceeded, FiniteAlgebra, Subset, quotient_by_ideal
from .subobjects import (
    IdealWitness,
    enumerate_subalgebras,
    ideal_closure_within,
    is_ideal,
    is_subalgebra,
    join,
    normal_closure,
    subalgebra_generate,
)

# largest number of word instances evaluated by one call
WORD_LIMIT = 1 << 28
# above this many instances, abelian distributive algebras use the mixed-term generators
EXHAUSTIVE_WORDS = 1 << 22
_CHUNK = 1 << 22


class NotDistributive(AlgebraError):
    pass


class TernaryRecipeIncomplete(AlgebraError):
    """The ternary word recipe disagreed with the Smith decomposition on this input."""

    def __init__(self, message: str, ternary: Subset, higgins: Subset, smith: Subset):
        super().__init__(message)
        self.ternary = ternary
        self.higgins = higgins
        self.smith = smith


@dataclass
class CommutatorResult:
    higgins: Subset
    generators: list[tuple[str, tuple, int]]
    huq: Subset
    higgins_is_ideal: bool
    ideal_witness: IdealWitness | None = None

    def to_dict(self) -> dict:
        A = self.higgins.algebra
        return {
            "higgins": self.higgins.labels(),
            "huq": self.huq.labels(),
            "higginsIsIdeal": self.higgins_is_ideal,
            "idealWitness": None if self.ideal_witness is None else self.ideal_witness.describe(A),
            "generators": [
                {"word": tag, "args": [A.label(a) for a in args], "value": A.label(v)}
                for tag, args, v in self.generators
            ],
        }


def _require(A: FiniteAlgebra, *subsets: Subset):
    for S in subsets:
        if S.algebra is not A:
            raise AlgebraError("subset belongs to a different algebra")
        if not is_subalgebra(A, S):
            raise AlgebraError(f"{S!r} is not a subalgebra of {A.name}")
    if not A.is_distributive:
        bad = [(op, j + 1) for op, slots in A.distributive_slots.items() for j, ok in enumerate(slots) if not ok]
        raise NotDistributive(
            f"{A.name}: operations must distribute over + for the word description; failing (op, slot): {bad}"
        )


def _tuples(ids: np.ndarray, n: int) -> np.ndarray:
    if n == 1:
        return ids.reshape(-1, 1).astype(np.int64)
    grids = np.meshgrid(*([ids] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


class _Collector:
    """Keeps the first word instance seen for each distinct value."""

    def __init__(self, n: int):
        self.seen = np.zeros(n, dtype=bool)
        self.words: list[tuple[str, tuple, int]] = []

    def add(self, tag: str, values: np.ndarray, args_of):
        flat = values.ravel()
        uniq, first = np.unique(flat, return_index=True)
        for v, i in zip(uniq, first):
            if not self.seen[v]:
                self.seen[v] = True
                self.words.append((tag, args_of(int(i)), int(v)))


def elementary_words(A: FiniteAlgebra, K: Subset, L: Subset) -> list[tuple[str, tuple, int]]:
    """Elementary commutator words of K and L, one representative per distinct value.

    Each entry is ``(tag, args, value)``: tag ``group`` for ``-k - l + k + l``
    with args ``(k, l)``, tag ``op:<name>`` with args ``(k_1..k_n, l_1..l_n)``.
    Every tuple is evaluated and only the first (lexicographic) instance of
    each value is kept, except for very large abelian distributive inputs,
    where the mixed terms of the expansion are used instead (they generate
    the same ideal).
    """
    _require(A, K, L)
    add, neg = A.add, A.neg
    out = _Collector(A.n)
    kid, lid = K.ids, L.ids
    vals = add[add[neg[kid][:, None], neg[lid][None, :]], add[kid[:, None], lid[None, :]]]
    out.add("group", vals, lambda i: (int(kid[i // len(lid)]), int(lid[i % len(lid)])))
    for op in A.omega:
        tab = A.tables[op.name]
        kt, lt = _tuples(kid, op.arity), _tuples(lid, op.arity)
        nk, nl = len(kt), len(lt)
        if nk * nl > EXHAUSTIVE_WORDS and A.is_abelian and A.is_distributive:
            _multiadditive_words(A, op, kid, lid, out)
            continue
        if nk * nl > WORD_LIMIT:
            raise BoundExceeded(f"{nk * nl} word instances for {op.name!r} exceed {WORD_LIMIT}")
        wk = tab[tuple(kt.T)]
        wl = tab[tuple(lt.T)]
        rows = max(1, _CHUNK // nl)
        for start in range(0, nk, rows):
            kc = kt[start:start + rows]
            sums = tuple(add[kc[:, j][:, None], lt[:, j][None, :]] for j in range(op.arity))
            wkl = tab[sums]
            v = add[add[neg[wk[start:start + rows]][:, None], neg[wl][None, :]], wkl]
            out.add(
                f"op:{op.name}",
                v,
                lambda i, s=start: tuple(int(a) for a in kt[s + i // nl]) + tuple(int(a) for a in lt[i % nl]),
            )
    return out.words


def _multiadditive_words(A: FiniteAlgebra, op, kid: np.ndarray, lid: np.ndarray, out: _Collector):
    """Words of a multi-additive operation on an abelian group, one mixed pattern at a time.

    Expanding ``w(k + l)`` leaves the sum of the terms with arguments drawn
    from both K and L. Each such term is itself a word (set the other
    arguments to 0), so these terms generate the same ideal as all words.
    """
    tab = A.tables[op.name]
    for pattern in itertools.product("KL", repeat=op.arity):
        if len(set(pattern)) < 2:
            continue
        idx = [kid if p == "K" else lid for p in pattern]
        vals = tab[np.ix_(*idx)]
        shape = vals.shape

        def args_of(i, idx=idx, shape=shape, pattern=pattern):
            pos = np.unravel_index(i, shape)
            ks = [int(x[j]) if p == "K" else 0 for x, j, p in zip(idx, pos, pattern)]
            ls = [int(x[j]) if p == "L" else 0 for x, j, p in zip(idx, pos, pattern)]
            return tuple(ks) + tuple(ls)

        out.add(f"op:{op.name}", vals, args_of)


def higgins(A: FiniteAlgebra, K: Subset, L: Subset) -> CommutatorResult:
    """Higgins commutator (ideal closure inside K v L) plus its normal closure in A."""
    words = elementary_words(A, K, L)
    J = subalgebra_generate(A, K | L)
    gens = Subset(A, (v for _, _, v in words))
    H = ideal_closure_within(A, gens, J)
    ok, wit = is_ideal(A, H)
    huq = H if ok else normal_closure(A, H)
    return CommutatorResult(H, words, huq, ok, wit)


def huq(A: FiniteAlgebra, K: Subset, L: Subset) -> Subset:
    return higgins(A, K, L).huq


@dataclass
class Cooperation:
    cooperates: bool
    defects: list[tuple[str, tuple, tuple]] = field(default_factory=list)
    defect_count: int = 0


def cooperates(A: FiniteAlgebra, K: Subset, L: Subset, max_defects: int = 100) -> Cooperation:
    """Whether ``(k, l) -> k + l`` is a homomorphism ``K x L -> A``.

    A defect ``(op, ks, ls)`` is a tuple where ``op(ks) + op(ls) != op(ks + ls)``.
    """
    for S in (K, L):
        if not is_subalgebra(A, S):
            raise AlgebraError(f"{S!r} is not a subalgebra of {A.name}")
    add = A.add
    kid, lid = K.ids, L.ids
    result = Cooperation(True)
    for op in A.signature.ops:
        if op.arity == 0:
            continue
        tab = A.tables[op.name]
        kt, lt = _tuples(kid, op.arity), _tuples(lid, op.arity)
        nl = len(lt)
        if len(kt) * nl > WORD_LIMIT:
            raise BoundExceeded(f"cooperation check for {op.name!r} too large")
        wk, wl = tab[tuple(kt.T)], tab[tuple(lt.T)]
        rows = max(1, _CHUNK // nl)
        for start in range(0, len(kt), rows):
            kc = kt[start:start + rows]
            sums = tuple(add[kc[:, j][:, None], lt[:, j][None, :]] for j in range(op.arity))
            bad = add[wk[start:start + rows][:, None], wl[None, :]] != tab[sums]
            count = int(bad.sum())
            if count:
                result.cooperates = False
                result.defect_count += count
                for r, c in np.argwhere(bad):
                    if len(result.defects) >= max_defects:
                        break
                    result.defects.append(
                        (op.name, tuple(int(a) for a in kc[r]), tuple(int(a) for a in lt[c]))
                    )
    return result


def huq_via_lattice_oracle(A: FiniteAlgebra, K: Subset, L: Subset, max_size: int = 12) -> Subset:
    """Smallest ideal N with the images of K and L cooperating in A/N, by enumeration.

    Ideals are found by filtering all subalgebras, so this route shares no
    code with the normal-closure computation it is used to check.
    """
    ideals = [S for S in enumerate_subalgebras(A, max_size=max_size) if is_ideal(A, S)[0]]
    good = []
    for N in ideals:
        Q, q = quotient_by_ideal(A, N)
        if cooperates(Q, q.image(K), q.image(L)).cooperates:
            good.append(N)
    meet = A.all()
    for N in good:
        meet = meet & N
    if meet not in good:
        raise AssertionError("qualifying ideals are not closed under intersection; no smallest one")
    return meet


# --- ternary --------------------------------------------------------------

def _second_deviation(A, tab, P, Q, R, tag, out: _Collector, limit: int):
    """Values of ``-c2(a,b) - c2(a,c) + c2(a, b+c)``, ``c2(a,x) = -w(a) - w(x) + w(a+x)``."""
    add, neg = A.add, A.neg
    arity = P.shape[1]

    def W(arr):
        return tab[tuple(arr[..., j] for j in range(arity))] if tab is not None else arr[..., 0]

    na, nb, nc = len(P), len(Q), len(R)
    if na * nb * nc > limit:
        raise BoundExceeded(f"{na * nb * nc} ternary word instances exceed {limit}")
    wP, wQ, wR = W(P), W(Q), W(R)
    QR = np.stack([add[Q[:, j][:, None], R[:, j][None, :]] for j in range(arity)], axis=-1)
    wQR = W(QR)
    rows = max(1, (_CHUNK >> 2) // max(1, nb * nc))
    for start in range(0, na, rows):
        a = P[start:start + rows]
        wa = wP[start:start + rows][:, None]
        ab = np.stack([add[a[:, j][:, None], Q[:, j][None, :]] for j in range(arity)], axis=-1)
        ac = np.stack([add[a[:, j][:, None], R[:, j][None, :]] for j in range(arity)], axis=-1)
        c2ab = add[add[neg[wa], neg[wQ][None, :]], W(ab)]
        c2ac = add[add[neg[wa], neg[wR][None, :]], W(ac)]
        abc = np.stack(
            [add[a[:, j][:, None, None], QR[None, :, :, j]] for j in range(arity)], axis=-1
        )
        c2abc = add[add[neg[wa][:, :, None], neg[wQR][None, :, :]], W(abc)]
        c3 = add[add[neg[c2ab][:, :, None], neg[c2ac][:, None, :]], c2abc]

        def args_of(i, s=start):
            ia, rest = divmod(i, nb * nc)
            ib, ic = divmod(rest, nc)
            return tuple(int(x) for x in P[s + ia]) + tuple(int(x) for x in Q[ib]) + tuple(int(x) for x in R[ic])

        out.add(tag, c3, args_of)


def ternary_words(A: FiniteAlgebra, K: Subset, L: Subset, M: Subset, limit: int = WORD_LIMIT):
    """Generator words for the ternary commutator; see :func:`ternary_higgins`."""
    _require(A, K, L, M)
    add, neg = A.add, A.neg
    out = _Collector(A.n)
    roles = {"K": K.ids, "L": L.ids, "M": M.ids}
    assignments = list(itertools.permutations("KLM"))
    # the second deviation is symmetric in its arguments when + commutes
    deviation_assignments = [("K", "L", "M")] if A.is_abelian else assignments

    def comm(x, y):
        return add[add[neg[x], neg[y]], add[x, y]]

    for p, q, r in assignments:
        a, b, c = roles[p], roles[q], roles[r]
        inner = comm(a[:, None], b[None, :])
        vals = comm(inner[:, :, None], c[None, None, :])
        nb, nc = len(b), len(c)
        out.add(
            f"nested[{p}{q}{r}]", vals,
            lambda i, a=a, b=b, c=c, nb=nb, nc=nc: (int(a[i // (nb * nc)]), int(b[(i // nc) % nb]), int(c[i % nc])),
        )
    for p, q, r in deviation_assignments:
        _second_deviation(
            A, None, _tuples(roles[p], 1), _tuples(roles[q], 1), _tuples(roles[r], 1),
            f"dev2:group[{p}{q}{r}]", out, limit,
        )
    for op in A.omega:
        tab = A.tables[op.name]
        if op.arity >= 3:
            for slots in itertools.product("KLM", repeat=op.arity):
                if set(slots) != {"K", "L", "M"}:
                    continue
                idx = [roles[s] for s in slots]
                vals = tab[np.ix_(*idx)]
                shape = [len(x) for x in idx]
                out.add(
                    f"mixed:{op.name}[{''.join(slots)}]", vals,
                    lambda i, idx=idx, shape=shape: tuple(
                        int(x[j]) for x, j in zip(idx, np.unravel_index(i, shape))
                    ),
                )
        for p, q, r in deviation_assignments:
            _second_deviation(
                A, tab, _tuples(roles[p], op.arity), _tuples(roles[q], op.arity), _tuples(roles[r], op.arity),
                f"dev2:{op.name}[{p}{q}{r}]", out, limit,
            )
    return out.words


def ternary_higgins(
    A: FiniteAlgebra, K: Subset, L: Subset, M: Subset, cross_check: bool = True, limit: int = WORD_LIMIT
) -> Subset:
    """Ternary commutator from deviation words, closed as an ideal of K v L v M.

    Generators: nested group commutators ``[[a, b], c]`` for every assignment
    of K, L, M to the three positions; values of operations of arity >= 3 whose
    arguments draw from all three subsets; and second deviations of the
    identity word and of every operation. The recipe has no completeness proof,
    so whenever K and L are ideals and M is the whole algebra the result is
    checked against the Smith normalization (which must equal the join with
    the binary Higgins commutator) and a mismatch raises
    :class:`TernaryRecipeIncomplete`.
    """
    words = ternary_words(A, K, L, M, limit)
    J = subalgebra_generate(A, K | L | M)
    T = ideal_closure_within(A, Subset(A, (v for _, _, v in words)), J)
    if cross_check and M == A.all() and is_ideal(A, K)[0] and is_ideal(A, L)[0]:
        H = higgins(A, K, L).higgins
        S = smith_normalization(A, K, L)
        joined = join(A, H, T)
        if joined != S:
            raise TernaryRecipeIncomplete(
                f"join of Higgins {H!r} and ternary {T!r} is {joined!r}, Smith normalization is {S!r}",
                T, H, S,
            )
    return T


@dataclass
class InstanceVerdict:
    higgins: Subset
    huq: Subset
    smith_normalization: Subset
    nh_holds: bool
    sh_huq_equals_smith: bool
    smith_equals_higgins: bool
    ideal_witness: IdealWitness | None = None

    def to_dict(self) -> dict:
        A = self.higgins.algebra
        return {
            "higgins": self.higgins.labels(),
            "huq": self.huq.labels(),
            "smithNormalization": self.smith_normalization.labels(),
            "nhHolds": self.nh_holds,
            "shHuqEqualsSmith": self.sh_huq_equals_smith,
            "smithEqualsHiggins": self.smith_equals_higgins,
            "idealWitness": None if self.ideal_witness is None else self.ideal_witness.describe(A),
        }


def sh_nh_instance_check(A: FiniteAlgebra, K: Subset, L: Subset, smith_max: int = 20) -> InstanceVerdict:
    """(NH) and (SH) on one pair of ideals.

    Both hold for the pair exactly when the Smith normalization equals the
    Higgins commutator, since the former is the join of the Higgins commutator
    and the ternary commutator ``[K, L, A]``.
    """
    for S in (K, L):
        ok, wit = is_ideal(A, S)
        if not ok:
            raise AlgebraError(f"{S!r} is not an ideal of {A.name}: {wit.describe(A)}")
    res = higgins(A, K, L)
    S = smith_normalization(A, K, L, max_size=smith_max)
    return InstanceVerdict(
        res.higgins, res.huq, S, res.higgins_is_ideal, res.huq == S, res.higgins == S, res.ideal_witness
    )
