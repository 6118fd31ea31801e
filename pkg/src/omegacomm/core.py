"""Finite Omega-groups presented by operation tables.

Elements are dense integer ids ``0..n-1`` and id 0 is always the constant.
Tables are numpy arrays of shape ``(n,) * arity``; index order is argument order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PLUS, NEG, ZERO, OMEGA = "group-plus", "group-neg", "group-zero", "omega-prime"

# dense tuple enumeration above this many entries is refused
DEFAULT_TABLE_LIMIT = 1 << 26


class AlgebraError(Exception):
    """Base class for errors raised by this package."""


class SignatureError(AlgebraError):
    pass


class BoundExceeded(AlgebraError):
    pass


class AlgebraValidationError(AlgebraError):
    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


class NotAnIdeal(AlgebraError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    kind: str = OMEGA


class Signature:
    def __init__(self, ops: Iterable[Operation]):
        self.ops: tuple[Operation, ...] = tuple(ops)
        names = [op.name for op in self.ops]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate operation names in {names}")
        expected = {PLUS: 2, NEG: 1, ZERO: 0}
        for kind, arity in expected.items():
            found = [op for op in self.ops if op.kind == kind]
            if len(found) != 1:
                raise SignatureError(f"need exactly one {kind} operation, got {len(found)}")
            if found[0].arity != arity:
                raise SignatureError(f"{kind} operation must have arity {arity}")
        for op in self.ops:
            if op.kind == OMEGA and op.arity not in (1, 2, 3):
                raise SignatureError(f"extra operation {op.name!r} has arity {op.arity}; allowed 1, 2, 3")
            if op.kind not in (PLUS, NEG, ZERO, OMEGA):
                raise SignatureError(f"unknown operation kind {op.kind!r}")
        self._by_name = {op.name: op for op in self.ops}

    @classmethod
    def group(cls, *extra: tuple[str, int]) -> "Signature":
        ops = [Operation("+", 2, PLUS), Operation("-", 1, NEG), Operation("0", 0, ZERO)]
        ops += [Operation(name, arity) for name, arity in extra]
        return cls(ops)

    def __getitem__(self, name: str) -> Operation:
        try:
            return self._by_name[name]
        except KeyError:
            raise SignatureError(f"unknown operation {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) and self.ops == other.ops

    def __hash__(self) -> int:
        return hash(self.ops)

    def __repr__(self) -> str:
        return "Signature(" + ", ".join(f"{o.name}/{o.arity}" for o in self.ops) + ")"

    @property
    def plus(self) -> Operation:
        return next(op for op in self.ops if op.kind == PLUS)

    @property
    def neg(self) -> Operation:
        return next(op for op in self.ops if op.kind == NEG)

    @property
    def zero(self) -> Operation:
        return next(op for op in self.ops if op.kind == ZERO)

    @property
    def omega(self) -> tuple[Operation, ...]:
        return tuple(op for op in self.ops if op.kind == OMEGA)

    @property
    def max_arity(self) -> int:
        return max(op.arity for op in self.ops)


def _dtype_for(n: int):
    return np.int16 if n < 2**15 else np.int32


@dataclass
class ValidationReport:
    passed_axioms: list[str] = field(default_factory=list)
    failures: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, tag: str) -> bool:
        return any(t == tag for t, _ in self.failures)

    def witness(self, tag: str):
        for t, w in self.failures:
            if t == tag:
                return w
        return None

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.passed_axioms + other.passed_axioms, self.failures + other.failures)

    def to_dict(self) -> dict:
        return {
            "passed": list(self.passed_axioms),
            "failures": [{"axiom": t, "witness": [int(v) for v in w]} for t, w in self.failures],
        }


class FiniteAlgebra:
    """An Omega-group on ``{0..n-1}``.

    ``tables`` maps each operation name to an integer array of shape ``(n,)*arity``.
    The constant's table is the scalar 0. Unless ``check_laws`` is false the
    group laws are validated and a failure raises :class:`AlgebraValidationError`.
    ``distributive_hint`` lets constructors of derived algebras (products,
    subalgebras, quotients) pass on distributivity that is inherited from the
    parent instead of re-checking it exhaustively.
    """

    def __init__(
        self,
        signature: Signature,
        size: int,
        tables: dict[str, Sequence],
        names: Sequence[str] | None = None,
        name: str = "algebra",
        check_laws: bool = True,
        distributive_hint: dict[str, tuple[bool, ...]] | None = None,
    ):
        if size < 1:
            raise AlgebraValidationError("an algebra needs at least one element")
        self.signature = signature
        self.n = int(size)
        self.name = name
        dtype = _dtype_for(self.n)
        self.tables: dict[str, np.ndarray] = {}
        for op in signature.ops:
            if op.name not in tables:
                raise AlgebraValidationError(f"missing table for operation {op.name!r}")
            arr = np.asarray(tables[op.name])
            if op.kind == ZERO:
                if arr.size != 1 or int(arr.reshape(-1)[0]) != 0:
                    raise AlgebraValidationError("the constant must be element 0")
                arr = np.zeros((), dtype=dtype)
            else:
                arr = arr.reshape((self.n,) * op.arity)
                if arr.size and (arr.min() < 0 or arr.max() >= self.n):
                    bad = np.argwhere((arr < 0) | (arr >= self.n))[0]
                    raise AlgebraValidationError(
                        f"table {op.name!r} entry at {tuple(int(i) for i in bad)} out of range"
                    )
                arr = arr.astype(dtype, copy=True)
            arr.setflags(write=False)
            self.tables[op.name] = arr
        extra = set(tables) - {op.name for op in signature.ops}
        if extra:
            raise AlgebraValidationError(f"tables for unknown operations: {sorted(extra)}")
        if names is not None:
            names = [str(s) for s in names]
            if len(names) != self.n or len(set(names)) != self.n:
                raise AlgebraValidationError("element names must be n distinct strings")
        self.names: list[str] | None = list(names) if names is not None else None
        self._distributive_hint = dict(distributive_hint or {})
        if check_laws:
            report = validate_group_laws(self)
            if not report.ok:
                tag, wit = report.failures[0]
                raise AlgebraValidationError(
                    f"{name}: group law {tag!r} fails at {self.fmt_tuple(wit)}", report
                )

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name!r}, n={self.n}, {self.signature!r})"

    def __len__(self) -> int:
        return self.n

    @property
    def add(self) -> np.ndarray:
        return self.tables[self.signature.plus.name]

    @property
    def neg(self) -> np.ndarray:
        return self.tables[self.signature.neg.name]

    @property
    def omega(self) -> tuple[Operation, ...]:
        return self.signature.omega

    def table(self, op: str | Operation) -> np.ndarray:
        name = op.name if isinstance(op, Operation) else op
        self.signature[name]
        return self.tables[name]

    def label(self, a: int) -> str:
        return self.names[a] if self.names is not None else str(int(a))

    def fmt_tuple(self, t) -> str:
        return "(" + ", ".join(self.label(int(a)) for a in t) + ")"

    def element(self, token: str | int) -> int:
        if isinstance(token, (int, np.integer)):
            a = int(token)
        elif self.names is not None and token in self.names:
            return self.names.index(token)
        else:
            try:
                a = int(token)
            except ValueError:
                raise AlgebraError(f"unknown element {token!r} in {self.name}") from None
        if not 0 <= a < self.n:
            raise AlgebraError(f"element id {a} out of range for {self.name} (n={self.n})")
        return a

    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def minus(self, a: int) -> int:
        return int(self.neg[a])

    def sum(self, *xs: int) -> int:
        acc = 0
        for x in xs:
            acc = int(self.add[acc, x])
        return acc

    def conj(self, x: int, s: int) -> int:
        """-x + s + x"""
        return int(self.add[self.add[self.neg[x], s], x])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.add, self.add.T))

    @cached_property
    def distributive_slots(self) -> dict[str, tuple[bool, ...]]:
        """Per extra operation, whether it distributes over + in each argument slot."""
        out = {}
        for op in self.omega:
            if op.name in self._distributive_hint:
                out[op.name] = tuple(self._distributive_hint[op.name])
            else:
                out[op.name] = tuple(
                    _distributivity_witness(self, op, j) is None for j in range(op.arity)
                )
        return out

    @cached_property
    def is_distributive(self) -> bool:
        return all(all(v) for v in self.distributive_slots.values())

    def all(self) -> "Subset":
        return Subset(self, range(self.n))

    def zero_subset(self) -> "Subset":
        return Subset(self, (0,))

    def subset(self, elements: Iterable) -> "Subset":
        return Subset(self, (self.element(e) for e in elements))


class Subset:
    """A subset of an algebra's carrier. Immutable; compares by members and algebra identity."""

    __slots__ = ("algebra", "members", "_mask")

    def __init__(self, algebra: FiniteAlgebra, members: Iterable[int]):
        self.algebra = algebra
        ms = frozenset(int(m) for m in members)
        for m in ms:
            if not 0 <= m < algebra.n:
                raise AlgebraError(f"element {m} outside carrier of size {algebra.n}")
        self.members = ms
        self._mask = None

    @classmethod
    def from_mask(cls, algebra: FiniteAlgebra, mask: np.ndarray) -> "Subset":
        s = cls(algebra, np.flatnonzero(mask).tolist())
        s._mask = np.asarray(mask, dtype=bool).copy()
        s._mask.setflags(write=False)
        return s

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.algebra.n, dtype=bool)
            m[list(self.members)] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    @property
    def ids(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a) -> bool:
        return int(a) in self.members

    def _check(self, other: "Subset"):
        if other.algebra is not self.algebra:
            raise AlgebraError("subsets of different algebras")

    def __eq__(self, other) -> bool:
        return isinstance(other, Subset) and other.algebra is self.algebra and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.members))

    def __le__(self, other: "Subset") -> bool:
        self._check(other)
        return self.members <= other.members

    def __lt__(self, other: "Subset") -> bool:
        self._check(other)
        return self.members < other.members

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.algebra, self.members | other.members)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.algebra, self.members & other.members)

    def labels(self) -> list[str]:
        return [self.algebra.label(a) for a in self.sorted()]

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"

    def sort_key(self) -> tuple:
        return (len(self.members), tuple(self.sorted()))


@dataclass(frozen=True, eq=False)
class Hom:
    dom: FiniteAlgebra
    cod: FiniteAlgebra
    map: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.map, dtype=np.int64).reshape(-1)
        if arr.shape[0] != self.dom.n:
            raise AlgebraError(f"map has {arr.shape[0]} entries but the domain has {self.dom.n} elements")
        if arr.size and (arr.min() < 0 or arr.max() >= self.cod.n):
            raise AlgebraError("map value outside the codomain")
        arr.setflags(write=False)
        object.__setattr__(self, "map", arr)

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def image(self, s: Subset | None = None) -> Subset:
        src = s.ids if s is not None else np.arange(self.dom.n)
        return Subset(self.cod, self.map[src].tolist())

    def preimage(self, t: Subset) -> Subset:
        return Subset.from_mask(self.dom, t.mask[self.map])

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.dom.n

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.cod.n

    def compose(self, other: "Hom") -> "Hom":
        """self after other."""
        if other.cod is not self.dom:
            raise AlgebraError("composition of non-composable maps")
        return Hom(other.dom, self.cod, self.map[other.map])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hom)
            and other.dom is self.dom
            and other.cod is self.cod
            and np.array_equal(self.map, other.map)
        )

    def __hash__(self) -> int:
        return hash((id(self.dom), id(self.cod), self.map.tobytes()))


def identity_hom(A: FiniteAlgebra) -> Hom:
    return Hom(A, A, np.arange(A.n))


# --- validation -------------------------------------------------------------

def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def validate_group_laws(A: FiniteAlgebra) -> ValidationReport:
    """Associativity, two-sided identity and inverses of ``+``, ``-``, ``0``.

    Failures carry the lexicographically first witness tuple.
    """
    rep = ValidationReport()
    add, neg = A.add, A.neg
    left = add[add, :]  # (a+b)+c as [a,b,c]
    right = add[:, add]  # a+(b+c) as [a,b,c]
    w = _first(left != right)
    if w is None:
        rep.passed_axioms.append("assoc")
    else:
        rep.failures.append(("assoc", w))
    ident = (add[0, :] != np.arange(A.n)) | (add[:, 0] != np.arange(A.n))
    w = _first(ident)
    if w is None:
        rep.passed_axioms.append("identity")
    else:
        rep.failures.append(("identity", w))
    ids = np.arange(A.n)
    inv = (add[neg, ids] != 0) | (add[ids, neg] != 0)
    w = _first(inv)
    if w is None:
        rep.passed_axioms.append("inverse")
    else:
        rep.failures.append(("inverse", w))
    return rep


def _distributivity_witness(A: FiniteAlgebra, op: Operation, slot: int):
    """First (others..., y, z) with op(.., y+z, ..) != op(.., y, ..) + op(.., z, ..), else None.

    The witness lists the full argument tuple with ``y`` in ``slot`` followed by ``z``.
    """
    tab = A.table(op)
    add = A.add
    n = A.n
    t = np.moveaxis(tab, slot, -1)  # others..., slot
    others = op.arity - 1
    # lhs[o..., y, z] = t[o..., y+z]; rhs = t[o..., y] + t[o..., z]
    chunk_rows = max(1, (1 << 22) // max(1, n * n))
    flat = t.reshape(-1, n)
    for start in range(0, flat.shape[0], chunk_rows):
        block = flat[start:start + chunk_rows]
        lhs = block[:, add]
        rhs = add[block[:, :, None], block[:, None, :]]
        bad = lhs != rhs
        if bad.any():
            r, y, z = (int(v) for v in np.argwhere(bad)[0])
            o = np.unravel_index(start + r, (n,) * others) if others else ()
            args = list(int(v) for v in o)
            args.insert(slot, y)
            return tuple(args) + (z,)
    return None


def validate_distributivity(A: FiniteAlgebra) -> ValidationReport:
    """Check every extra operation distributes over ``+`` in every slot.

    Tags are ``distrib:<op>:<slot>`` with 1-based slots.
    """
    rep = ValidationReport()
    for op in A.omega:
        for j in range(op.arity):
            tag = f"distrib:{op.name}:{j + 1}"
            w = _distributivity_witness(A, op, j)
            if w is None:
                rep.passed_axioms.append(tag)
            else:
                rep.failures.append((tag, w))
    return rep


def eval_op(A: FiniteAlgebra, op: str, args: Sequence) -> int:
    o = A.signature[op]
    if len(args) != o.arity:
        raise AlgebraError(f"operation {op!r} has arity {o.arity}, got {len(args)} arguments")
    ids = tuple(A.element(a) for a in args)
    return int(A.tables[op][ids])


def check_hom(h: Hom) -> ValidationReport:
    """Exhaustively check that ``h`` preserves every operation.

    Witnesses are argument tuples (in the domain) where preservation fails.
    """
    if h.dom.signature != h.cod.signature:
        raise SignatureError("domain and codomain signatures differ")
    rep = ValidationReport()
    m = h.map
    for op in h.dom.signature.ops:
        tag = f"preserves:{op.name}"
        tab_d, tab_c = h.dom.tables[op.name], h.cod.tables[op.name]
        if op.arity == 0:
            ok = m[int(tab_d)] == int(tab_c)
            if ok:
                rep.passed_axioms.append(tag)
            else:
                rep.failures.append((tag, ()))
            continue
        lhs = m[tab_d]
        rhs = tab_c[np.ix_(*([m] * op.arity))]
        w = _first(lhs != rhs)
        if w is None:
            rep.passed_axioms.append(tag)
        else:
            rep.failures.append((tag, w))
    return rep


# --- constructions ----------------------------------------------------------

def _inherit_hint(*algebras: FiniteAlgebra) -> dict[str, tuple[bool, ...]]:
    sig = algebras[0].signature
    out = {}
    for op in sig.omega:
        slots = [a.distributive_slots[op.name] for a in algebras]
        out[op.name] = tuple(all(s[j] for s in slots) for j in range(op.arity))
    return out


def product(A: FiniteAlgebra, B: FiniteAlgebra) -> tuple[FiniteAlgebra, Hom, Hom]:
    """Direct product with its two projections. Pair ``(a, b)`` has id ``a * |B| + b``."""
    if A.signature != B.signature:
        raise SignatureError("product of algebras with different signatures")
    nA, nB = A.n, B.n
    tables = {}
    for op in A.signature.ops:
        if op.arity == 0:
            tables[op.name] = 0
            continue
        ta = A.tables[op.name].astype(np.int64)
        tb = B.tables[op.name].astype(np.int64)
        k = op.arity
        # axes (a1, b1, a2, b2, ...) -> interleave
        ea = ta.reshape(sum(((nA, 1) for _ in range(k)), ()))
        eb = tb.reshape(sum(((1, nB) for _ in range(k)), ()))
        tables[op.name] = (ea * nB + eb).reshape((nA * nB,) * k)
    names = None
    if A.names is not None or B.names is not None:
        names = [f"({A.label(a)},{B.label(b)})" for a in range(nA) for b in range(nB)]
    P = FiniteAlgebra(
        A.signature, nA * nB, tables, names=names, name=f"{A.name}x{B.name}",
        check_laws=False, distributive_hint=_inherit_hint(A, B),
    )
    ids = np.arange(nA * nB)
    return P, Hom(P, A, ids // nB), Hom(P, B, ids % nB)


def pair_hom(f: Hom, g: Hom, P: FiniteAlgebra) -> Hom:
    """The map ``<f, g>`` into a product ``P`` built by :func:`product` of f.cod and g.cod."""
    if f.dom is not g.dom:
        raise AlgebraError("pairing needs a common domain")
    return Hom(f.dom, P, f.map * g.cod.n + g.map)


def induced_subalgebra(A: FiniteAlgebra, S: Subset, name: str | None = None) -> tuple[FiniteAlgebra, Hom]:
    """The subalgebra on ``S`` (renumbered in increasing order) with its inclusion."""
    ids = S.ids
    if ids.size == 0 or ids[0] != 0:
        raise AlgebraError("a subalgebra must contain 0")
    pos = np.full(A.n, -1, dtype=np.int64)
    pos[ids] = np.arange(len(ids))
    tables = {}
    for op in A.signature.ops:
        if op.arity == 0:
            tables[op.name] = 0
            continue
        sub = A.tables[op.name][np.ix_(*([ids] * op.arity))]
        mapped = pos[sub]
        if (mapped < 0).any():
            w = tuple(int(ids[i]) for i in np.argwhere(mapped < 0)[0])
            raise AlgebraError(f"subset not closed under {op.name!r} at {A.fmt_tuple(w)}")
        tables[op.name] = mapped
    names = [A.label(int(a)) for a in ids] if A.names is not None else None
    B = FiniteAlgebra(
        A.signature, len(ids), tables, names=names, name=name or f"sub({A.name})",
        check_laws=False, distributive_hint=A.distributive_slots,
    )
    return B, Hom(B, A, ids)


def quotient_by_ideal(A: FiniteAlgebra, I: Subset, name: str | None = None) -> tuple[FiniteAlgebra, Hom]:
    """Quotient by an ideal; cosets are numbered by least member, so 0 stays 0."""
    from .subobjects import is_ideal

    ok, wit = is_ideal(A, I)
    if not ok:
        raise NotAnIdeal(f"{I!r} is not an ideal of {A.name}: {wit}", wit)
    block = coset_ids(A, I)
    reps = np.flatnonzero(block == np.arange(A.n))  # least member of each coset
    canon = np.full(A.n, -1, dtype=np.int64)
    canon[reps] = np.arange(len(reps))
    q = canon[block]
    m = len(reps)
    tables = {}
    for op in A.signature.ops:
        if op.arity == 0:
            tables[op.name] = 0
            continue
        full = q[A.tables[op.name]]
        # well-definedness: the value depends only on the cosets of the arguments
        t = np.full((m,) * op.arity, -1, dtype=np.int64)
        idx = tuple(np.meshgrid(*([q] * op.arity), indexing="ij"))
        t[idx] = full
        check = t[idx]
        if not np.array_equal(check, full):
            raise AssertionError(f"operation {op.name!r} not well defined on cosets of an ideal")
        tables[op.name] = t
    names = None
    if A.names is not None:
        names = [A.label(int(r)) + "+I" if len(I) > 1 else A.label(int(r)) for r in reps]
    Q = FiniteAlgebra(
        A.signature, m, tables, names=names, name=name or f"{A.name}/I",
        check_laws=False, distributive_hint=A.distributive_slots,
    )
    return Q, Hom(A, Q, q)


def coset_ids(A: FiniteAlgebra, I: Subset) -> np.ndarray:
    """Map each element to the least member of its coset ``a + I``."""
    ids = I.ids
    cosets = A.add[:, ids]  # a + i
    return cosets.min(axis=1).astype(np.int64)


def kernel(h: Hom) -> Subset:
    from .subobjects import is_ideal

    K = Subset.from_mask(h.dom, h.map == 0)
    ok, wit = is_ideal(h.dom, K)
    assert ok, f"kernel of a homomorphism failed the ideal test: {wit}"
    return K


# --- generation with derivations (used by the automorphism search) ----------

def generating_set(A: FiniteAlgebra) -> list[int]:
    from .subobjects import subalgebra_generate

    gens: list[int] = []
    cur = A.zero_subset()
    for a in range(A.n):
        if a not in cur:
            gens.append(a)
            cur = subalgebra_generate(A, A.subset(gens))
    return gens


def _derivations(A: FiniteAlgebra, gens: Sequence[int]):
    """Order in which every element is reached from ``gens``, as (element, op, args)."""
    known = {0: None}
    order: list[tuple[int, str | None, tuple]] = [(0, None, ())]
    for g in gens:
        if g not in known:
            known[g] = None
            order.append((g, None, (g,)))
    ops = [op for op in A.signature.ops if op.arity > 0]
    changed = True
    while changed:
        changed = False
        elems = [e for e, _, _ in order]
        for op in ops:
            tab = A.tables[op.name]
            for args in itertools.product(elems, repeat=op.arity):
                v = int(tab[args])
                if v not in known:
                    known[v] = None
                    order.append((v, op.name, args))
                    changed = True
    return order


def enumerate_automorphisms(A: FiniteAlgebra, max_size: int = 16) -> list[Hom]:
    """All automorphisms, by backtracking over images of a generating set."""
    if A.n > max_size:
        raise BoundExceeded(f"automorphism search limited to {max_size} elements, got {A.n}")
    gens = generating_set(A)
    order = _derivations(A, gens)
    out = []
    for images in itertools.permutations(range(1, A.n), len(gens)) if gens else [()]:
        img = dict(zip(gens, images))
        phi = np.full(A.n, -1, dtype=np.int64)
        phi[0] = 0
        for e, opname, args in order:
            if opname is None:
                if e != 0:
                    phi[e] = img[e]
                continue
            phi[e] = A.tables[opname][tuple(phi[a] for a in args)]
        if len(np.unique(phi)) != A.n:
            continue
        h = Hom(A, A, phi)
        if check_hom(h).ok:
            out.append(h)
    out.sort(key=lambda h: tuple(h.map))
    return out


def subproduct(
    A: FiniteAlgebra, B: FiniteAlgebra, pairs, name: str | None = None
) -> tuple[FiniteAlgebra, Hom, Hom]:
    """The subalgebra of ``A x B`` on ``pairs`` without building the full product.

    Pairs are renumbered in lexicographic order; ``(0, 0)`` must be present.
    """
    if A.signature != B.signature:
        raise SignatureError("subproduct of algebras with different signatures")
    pairs = sorted({(int(a), int(b)) for a, b in pairs})
    if not pairs or pairs[0] != (0, 0):
        raise AlgebraError("a subalgebra of a product must contain (0, 0)")
    pa = np.array([a for a, _ in pairs], dtype=np.int64)
    pb = np.array([b for _, b in pairs], dtype=np.int64)
    lookup = np.full((A.n, B.n), -1, dtype=np.int32)
    lookup[pa, pb] = np.arange(len(pairs), dtype=np.int32)
    tables = {}
    for op in A.signature.ops:
        if op.arity == 0:
            tables[op.name] = 0
            continue
        va = A.tables[op.name][np.ix_(*([pa] * op.arity))]
        vb = B.tables[op.name][np.ix_(*([pb] * op.arity))]
        t = lookup[va, vb]
        if (t < 0).any():
            w = tuple(pairs[int(i)] for i in np.argwhere(t < 0)[0])
            raise AlgebraError(f"pairs not closed under {op.name!r} at {w}")
        tables[op.name] = t
    names = None
    if A.names is not None or B.names is not None:
        names = [f"({A.label(a)},{B.label(b)})" for a, b in pairs]
    P = FiniteAlgebra(
        A.signature, len(pairs), tables, names=names, name=name or f"sub({A.name}x{B.name})",
        check_laws=False, distributive_hint=_inherit_hint(A, B),
    )
    return P, Hom(P, A, pa), Hom(P, B, pb)
