"""Builtin algebras: small groups and rings plus the counterexample algebras.

Every constructor is deterministic, so emitting an entry twice gives
byte-identical files.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    AlgebraError,
    FiniteAlgebra,
    Signature,
    Subset,
    enumerate_automorphisms,
    product,
    validate_distributivity,
)
from .subobjects import subalgebra_generate


# --- groups ---------------------------------------------------------------

def cyclic(m: int, name: str | None = None) -> FiniteAlgebra:
    a = np.arange(m)
    return FiniteAlgebra(
        Signature.group(), m,
        {"+": (a[:, None] + a[None, :]) % m, "-": (-a) % m, "0": 0},
        name=name or f"z{m}",
    )


def group_product(*factors: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    G = factors[0]
    for F in factors[1:]:
        G, _, _ = product(G, F)
    G.name = name or "x".join(F.name for F in factors)
    return G


def _cycle_name(p: tuple[int, ...]) -> str:
    seen, parts = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + "".join(cyc) + ")")
    return "".join(parts) or "e"


def permutation_group(perms: list[tuple[int, ...]], name: str) -> FiniteAlgebra:
    """Group on the given permutations (lexicographically sorted, identity first).

    Sum is composition with the right summand applied first: ``(p + q)(i) = p(q(i))``.
    """
    perms = sorted(set(perms))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    add = np.empty((n, n), dtype=np.int64)
    neg = np.empty(n, dtype=np.int64)
    for i, p in enumerate(perms):
        inv = [0] * len(p)
        for k, v in enumerate(p):
            inv[v] = k
        neg[i] = index[tuple(inv)]
        for j, q in enumerate(perms):
            add[i, j] = index[tuple(p[q[k]] for k in range(len(p)))]
    return FiniteAlgebra(
        Signature.group(), n, {"+": add, "-": neg, "0": 0},
        names=[_cycle_name(p) for p in perms], name=name,
    )


def _parity(p) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j]) % 2


def alternating(k: int) -> FiniteAlgebra:
    perms = [p for p in itertools.permutations(range(k)) if _parity(p) == 0]
    return permutation_group(perms, f"a{k}")


def symmetric(k: int) -> FiniteAlgebra:
    return permutation_group(list(itertools.permutations(range(k))), f"s{k}")


def dihedral(order: int) -> FiniteAlgebra:
    """Dihedral group of the given (even) order; element ``a*s + i*r`` has id ``a*n + i``."""
    n = order // 2
    if order % 2 or n < 1:
        raise AlgebraError("dihedral order must be a positive even number")
    ids = [(a, i) for a in range(2) for i in range(n)]
    add = np.empty((order, order), dtype=np.int64)
    neg = np.empty(order, dtype=np.int64)
    for x, (a, i) in enumerate(ids):
        for y, (b, j) in enumerate(ids):
            add[x, y] = ((a + b) % 2) * n + (((-1) ** b) * i + j) % n
        neg[x] = x if a else (-i) % n
    names = []
    for a, i in ids:
        r = "" if i == 0 else ("r" if i == 1 else f"{i}r")
        names.append(("s" if a else "") + ("+" if a and r else "") + r or "0")
    return FiniteAlgebra(Signature.group(), order, {"+": add, "-": neg, "0": 0}, names=names, name=f"dih{order}")


def quaternion() -> FiniteAlgebra:
    # unit quaternions as (sign, unit) with unit in 1, i, j, k
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", u): (1, u) for u in units
    } | {(u, "1"): (1, u) for u in units} | {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    add = np.empty((8, 8), dtype=np.int64)
    for x, (s1, u1) in enumerate(elems):
        for y, (s2, u2) in enumerate(elems):
            s, u = mult[(u1, u2)]
            add[x, y] = index[(s * s1 * s2, u)]
    neg = np.array([int(np.flatnonzero(add[x] == 0)[0]) for x in range(8)])
    names = [("" if s == 1 else "-") + u for s, u in elems]
    return FiniteAlgebra(Signature.group(), 8, {"+": add, "-": neg, "0": 0}, names=names, name="q8")


def holomorph(G: FiniteAlgebra) -> tuple[FiniteAlgebra, np.ndarray]:
    """``G x| Aut(G)`` for a group-only signature, with the ids of ``(g, id)``.

    Pair ``(g, phi)`` has id ``g * |Aut| + index(phi)``; the identity automorphism has index 0.
    """
    if G.omega:
        raise AlgebraError("holomorph is only built for plain groups")
    auts = enumerate_automorphisms(G)
    maps = [tuple(int(v) for v in h.map) for h in auts]
    aidx = {m: i for i, m in enumerate(maps)}
    na, n = len(maps), G.n
    size = n * na
    add = np.empty((size, size), dtype=np.int64)
    neg = np.empty(size, dtype=np.int64)
    for g in range(n):
        for p, phi in enumerate(maps):
            x = g * na + p
            for h in range(n):
                for q, psi in enumerate(maps):
                    comp = tuple(phi[psi[t]] for t in range(n))
                    add[x, h * na + q] = G.plus(g, phi[h]) * na + aidx[comp]
    for x in range(size):
        neg[x] = int(np.flatnonzero(add[x] == 0)[0])
    H = FiniteAlgebra(Signature.group(), size, {"+": add, "-": neg, "0": 0}, name=f"hol({G.name})")
    return H, np.arange(n) * na


# --- rings and Omega-groups -------------------------------------------------

def zring(m: int) -> FiniteAlgebra:
    a = np.arange(m)
    return FiniteAlgebra(
        Signature.group(("*", 2)), m,
        {"+": (a[:, None] + a[None, :]) % m, "-": (-a) % m, "0": 0, "*": (a[:, None] * a[None, :]) % m},
        name=f"zring{m}",
    )


def gf4() -> FiniteAlgebra:
    # 0, 1, w, w+1 encoded as bit pairs; w^2 = w + 1
    a = np.arange(4)
    mul = np.zeros((4, 4), dtype=np.int64)
    for x in range(4):
        for y in range(4):
            # polynomial product mod w^2 + w + 1 over F2
            p = 0
            for i in range(2):
                if (y >> i) & 1:
                    p ^= x << i
            if p & 4:
                p ^= 0b111
            mul[x, y] = p
    return FiniteAlgebra(
        Signature.group(("*", 2)), 4, {"+": a[:, None] ^ a[None, :], "-": a, "0": 0, "*": mul},
        names=["0", "1", "w", "w+1"], name="gf4",
    )


def upper_triangular_f2() -> FiniteAlgebra:
    """Upper triangular 2x2 matrices over F2 with the product and its opposite."""
    mats = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    idx = {m: i for i, m in enumerate(mats)}
    n = 8
    add = np.empty((n, n), dtype=np.int64)
    mul = np.empty((n, n), dtype=np.int64)
    for x, (a, b, c) in enumerate(mats):
        for y, (d, e, f) in enumerate(mats):
            add[x, y] = idx[((a + d) % 2, (b + e) % 2, (c + f) % 2)]
            mul[x, y] = idx[((a * d) % 2, (a * e + b * f) % 2, (c * f) % 2)]
    names = [f"[{a}{b};{c}]" for a, b, c in mats]
    return FiniteAlgebra(
        Signature.group(("*", 2), ("*op", 2)), n,
        {"+": add, "-": np.arange(n), "0": 0, "*": mul, "*op": mul.T},
        names=names, name="ut2f2",
    )


def extend_distributively(G: FiniteAlgebra, gens: list[int], gen_table: dict[tuple[int, int], int]) -> np.ndarray:
    """Extend a product given on generators to the whole group by two-sided distributivity.

    Every element is reached from 0 by adding generators on the right (BFS,
    generators in the given order); ``(u + g) * y = u * y + g * y`` and
    ``x * (v + g) = x * v + x * g`` then determine the table. The result is
    checked for distributivity in both arguments and a conflict raises.
    """
    parent: dict[int, tuple[int, int]] = {}
    order = [0]
    seen = {0}
    for x in order:
        for g in gens:
            y = G.plus(x, g)
            if y not in seen:
                seen.add(y)
                parent[y] = (x, g)
                order.append(y)
    if len(order) != G.n:
        raise AlgebraError("generators do not generate the group")
    col = {g: np.zeros(G.n, dtype=np.int64) for g in gens}  # col[g][x] = x * g
    for g in gens:
        for x in order[1:]:
            u, h = parent[x]
            col[g][x] = G.plus(int(col[g][u]), gen_table[(h, g)])
    mul = np.zeros((G.n, G.n), dtype=np.int64)
    for x in range(G.n):
        for y in order[1:]:
            v, h = parent[y]
            mul[x, y] = G.plus(int(mul[x, v]), int(col[h][x]))
    sig = Signature.group(("*", 2))
    A = FiniteAlgebra(sig, G.n, {"+": G.add, "-": G.neg, "0": 0, "*": mul}, names=G.names, check_laws=False)
    rep = validate_distributivity(A)
    if not rep.ok:
        raise AlgebraError(f"generator table does not extend distributively: {rep.failures[0]}")
    return mul


def d8star() -> FiniteAlgebra:
    """Dihedral group of order 8 with the distributive product r*r = r*s = s*r = s*s = s."""
    D = dihedral(8)
    r, s = D.element("r"), D.element("s")
    mul = extend_distributively(D, [r, s], {(r, r): s, (r, s): s, (s, r): s, (s, s): s})
    return FiniteAlgebra(
        Signature.group(("*", 2)), 8, {"+": D.add, "-": D.neg, "0": 0, "*": mul}, names=D.names, name="d8star"
    )


NARNG_BASIS_TABLE = {
    ("x", "x"): "x", ("x", "y"): "0", ("x", "z"): "y",
    ("y", "x"): "0", ("y", "y"): "0", ("y", "z"): "x",
    ("z", "x"): "y", ("z", "y"): "x", ("z", "z"): "z",
}


def _lin_name(coeffs, basis) -> str:
    parts = []
    for c, b in zip(coeffs, basis):
        if c:
            parts.append(b if c == 1 else f"{c}{b}")
    return "+".join(parts) or "0"


def narng(m: int) -> FiniteAlgebra:
    """Free (Z/m)-module on x, y, z with the bilinear product from the basis table.

    ``a x + b y + c z`` has id ``a + b m + c m^2``.
    """
    basis = ["x", "y", "z"]
    vec = {"0": (0, 0, 0), "x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}
    coeffs = np.array([(a, b, c) for c in range(m) for b in range(m) for a in range(m)], dtype=np.int64)
    n = m ** 3

    def encode(v):
        v = np.asarray(v) % m
        return v[..., 0] + v[..., 1] * m + v[..., 2] * m * m

    add = encode(coeffs[:, None, :] + coeffs[None, :, :])
    neg = encode(-coeffs)
    struct = np.zeros((3, 3, 3), dtype=np.int64)
    for (i, bi), (j, bj) in itertools.product(enumerate(basis), repeat=2):
        struct[i, j] = vec[NARNG_BASIS_TABLE[(bi, bj)]]
    prod = np.einsum("ui,vj,ijk->uvk", coeffs, coeffs, struct)
    names = [_lin_name(c, basis) for c in coeffs]
    return FiniteAlgebra(
        Signature.group(("*", 2)), n, {"+": add, "-": neg, "0": 0, "*": encode(prod)},
        names=names, name=f"narng{m}",
    )


def ternary_cyclic(k: int) -> FiniteAlgebra:
    """``Z/2^k`` with ``t(x, y, z) = xyz``."""
    m = 2 ** k
    a = np.arange(m)
    t = (a[:, None, None] * a[None, :, None] * a[None, None, :]) % m
    return FiniteAlgebra(
        Signature.group(("t", 3)), m,
        {"+": (a[:, None] + a[None, :]) % m, "-": (-a) % m, "0": 0, "t": t},
        name=f"z{m}ternary",
    )


def multiples(A: FiniteAlgebra, d: int) -> Subset:
    return Subset(A, range(0, A.n, d))


# --- registry ---------------------------------------------------------------

@dataclass
class CorpusEntry:
    id: str
    params: dict
    provenance: str
    builder: Callable[[], FiniteAlgebra]
    subsets: Callable[[FiniteAlgebra], dict[str, Subset]] = field(default=lambda A: {})
    kind: str = "group"  # group | ring | other

    def build(self) -> tuple[FiniteAlgebra, dict[str, Subset]]:
        A = self.builder()
        A.name = self.id
        return A, self.subsets(A)


def _a5_subsets(A):
    gen = lambda names: subalgebra_generate(A, A.subset(names))  # noqa: E731
    return {"K": gen(["(12)(34)"]), "L": gen(["(12)(45)"]), "C": gen(["(345)"])}


def _d8star_subsets(A):
    return {"K": A.subset(["0", "2r", "s", "s+2r"]), "S": A.subset(["0", "s"])}


def _narng_subsets(A):
    gen = lambda names: subalgebra_generate(A, A.subset(names))  # noqa: E731
    return {"K": gen(["x", "y"]), "X1": gen(["x"])}


def _ternary_subsets(A):
    return {"2Z": multiples(A, 2), "4Z": multiples(A, 4), "8Z": multiples(A, 8)}


def build_corpus() -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []
    for m in (1, 2, 3, 4, 5, 6, 8, 9, 12, 16):
        entries.append(CorpusEntry(f"z{m}", {"m": m}, "cyclic group", lambda m=m: cyclic(m)))
    entries += [
        CorpusEntry("z2xz2", {}, "Klein four-group", lambda: group_product(cyclic(2), cyclic(2))),
        CorpusEntry("z2xz4", {}, "abelian group of order 8", lambda: group_product(cyclic(2), cyclic(4))),
        CorpusEntry("z2xz2xz2", {}, "elementary abelian group of order 8",
                    lambda: group_product(cyclic(2), cyclic(2), cyclic(2))),
        CorpusEntry("z2xz2xz2xz2", {}, "elementary abelian group of order 16",
                    lambda: group_product(cyclic(2), cyclic(2), cyclic(2), cyclic(2))),
    ]
    for order in (6, 8, 10, 12, 16):
        entries.append(CorpusEntry(f"dih{order}", {"order": order}, "dihedral group", lambda o=order: dihedral(o)))
    entries += [
        CorpusEntry("q8", {}, "quaternion group", quaternion),
        CorpusEntry("a4", {}, "alternating group on 4 points", lambda: alternating(4)),
        CorpusEntry("s4", {}, "symmetric group on 4 points", lambda: symmetric(4)),
        CorpusEntry("a5", {}, "A5 with K=<(12)(34)>, L=<(12)(45)>: Higgins commutator <(345)>, Huq commutator A5",
                    lambda: alternating(5), _a5_subsets),
    ]
    for m in (2, 3, 4, 5, 6, 8, 9):
        entries.append(CorpusEntry(f"zring{m}", {"m": m}, "ring Z/m", lambda m=m: zring(m), kind="ring"))
    entries += [
        CorpusEntry("gf4", {}, "field with four elements", gf4, kind="ring"),
        CorpusEntry("ut2f2", {}, "upper triangular 2x2 matrices over F2 with opposite product",
                    upper_triangular_f2, kind="ring"),
        CorpusEntry("d8star", {}, "dihedral group of order 8 with associative distributive product "
                    "generated by r*r=r*s=s*r=s*s=s; K={0,2r,s,s+2r} ideal, [K,K]={0,s} not",
                    d8star, _d8star_subsets, kind="other"),
    ]
    for m in (2, 3, 5):
        entries.append(CorpusEntry(
            f"narng{m}", {"m": m},
            "non-associative ring on x,y,z reduced mod m; K=<x,y> ideal, [K,K]=<x> not (x*z=y)",
            lambda m=m: narng(m), _narng_subsets, kind="other",
        ))
    for k in (4, 5):
        entries.append(CorpusEntry(
            f"z{2 ** k}ternary", {"k": k},
            "Z/2^k with t(x,y,z)=xyz; [2Z,4Z]=0 while the Smith commutator has normalization 8Z",
            lambda k=k: ternary_cyclic(k), _ternary_subsets, kind="other",
        ))
    return entries


def corpus_ids() -> list[str]:
    return [e.id for e in build_corpus()]


def get(entry_id: str) -> tuple[FiniteAlgebra, dict[str, Subset]]:
    for e in build_corpus():
        if e.id == entry_id:
            return e.build()
    raise KeyError(f"no corpus entry {entry_id!r}; known: {', '.join(corpus_ids())}")


def entry(entry_id: str) -> CorpusEntry:
    for e in build_corpus():
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)
