"""Split extensions (points) of finite Omega-groups.

A point over Z is a split epimorphism ``f: Y -> Z`` with section ``s`` and
kernel ``x: X -> Y``. Subobjects of a point are subalgebras of Y containing
``s(Z)``; such a subobject is normal exactly when its kernel, embedded in Y,
is an ideal of Y. Normal subobjects are therefore in bijection with the
ideals J of Y inside ``ker f``, via ``J -> {y : y - s(f(y)) in J}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commutators import WORD_LIMIT, _CHUNK, InstanceVerdict, huq, sh_nh_instance_check
from .core import (
    AlgebraError,
    BoundExceeded,
    FiniteAlgebra,
    Hom,
    Subset,
    check_hom,
    induced_subalgebra,
    product,
    quotient_by_ideal,
)
from .subobjects import (
    IdealWitness,
    enumerate_ideals,
    enumerate_subalgebras,
    is_ideal,
    is_subalgebra,
    normal_closure,
)


class SplitExtensionError(AlgebraError):
    """A split-extension invariant failed; ``invariant`` names it and ``witness`` shows where."""

    def __init__(self, message: str, invariant: str, witness=None):
        super().__init__(message)
        self.invariant = invariant
        self.witness = witness


@dataclass(eq=False)
class SplitExtension:
    X: FiniteAlgebra
    Y: FiniteAlgebra
    Z: FiniteAlgebra
    x: Hom
    f: Hom
    s: Hom

    @property
    def kernel(self) -> Subset:
        """``ker f`` as a subset of Y."""
        return Subset.from_mask(self.Y, self.f.map == 0)

    @property
    def section_image(self) -> Subset:
        return self.s.image()

    def retract(self, y: int) -> int:
        """``s(f(y))``"""
        return int(self.s.map[self.f.map[y]])

    def denormalize(self, J: Subset) -> Subset:
        """``{y in Y : y - s(f(y)) in J}`` for ``J`` inside ``ker f``."""
        Y = self.Y
        ys = np.arange(Y.n)
        diff = Y.add[ys, Y.neg[self.s.map[self.f.map]]]
        return Subset.from_mask(Y, J.mask[diff])

    def __repr__(self) -> str:
        return f"SplitExtension({self.X.name} -> {self.Y.name} <=> {self.Z.name})"


def make_split_extension(x: Hom, f: Hom, s: Hom) -> SplitExtension:
    """Validate and bundle ``X -x-> Y <=f,s=> Z``."""
    if x.cod is not f.dom or s.cod is not f.dom or s.dom is not f.cod:
        raise SplitExtensionError("maps do not form a split extension diagram", "shape")
    for name, h in (("x", x), ("f", f), ("s", s)):
        rep = check_hom(h)
        if not rep.ok:
            tag, wit = rep.failures[0]
            raise SplitExtensionError(f"{name} is not a homomorphism ({tag} at {wit})", f"hom:{name}", wit)
    fs = f.map[s.map]
    bad = np.flatnonzero(fs != np.arange(f.cod.n))
    if len(bad):
        z = int(bad[0])
        raise SplitExtensionError(
            f"f(s({f.cod.label(z)})) = {f.cod.label(int(fs[z]))}, not the identity", "section", z
        )
    seen: dict[int, int] = {}
    for a, y in enumerate(x.map.tolist()):
        if y in seen:
            raise SplitExtensionError(f"x is not injective: x({seen[y]}) = x({a})", "injective", (seen[y], a))
        seen[y] = a
    ker = f.map == 0
    img = np.zeros(f.dom.n, dtype=bool)
    img[x.map] = True
    bad = np.flatnonzero(ker != img)
    if len(bad):
        y = int(bad[0])
        raise SplitExtensionError(
            f"image of x differs from ker f at {f.dom.label(y)}", "kernel", y
        )
    return SplitExtension(x.dom, f.dom, f.cod, x, f, s)


@dataclass(eq=False)
class PointSubobject:
    ext: SplitExtension
    members: Subset

    def __post_init__(self):
        Y = self.ext.Y
        if self.members.algebra is not Y:
            raise AlgebraError("point subobject must be a subset of the middle algebra")
        if not is_subalgebra(Y, self.members):
            raise AlgebraError(f"{self.members!r} is not a subalgebra of {Y.name}")
        if not self.ext.section_image <= self.members:
            raise AlgebraError(f"{self.members!r} does not contain the image of the section")

    def split_ok(self) -> bool:
        """``f`` restricted to the members is onto Z and split by ``s``."""
        ext = self.ext
        return bool(set(ext.f.map[self.members.ids].tolist()) == set(range(ext.Z.n))) and all(
            ext.retract(y) in self.members for y in self.members
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSubobject) and other.ext is self.ext and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.ext), self.members))

    def __repr__(self) -> str:
        return f"PointSubobject{self.members!r}"


def pt_kernel(P: PointSubobject) -> Subset:
    """Members lying in ``ker f``, pulled back to X."""
    return P.ext.x.preimage(P.members)


def pt_normality(P: PointSubobject) -> tuple[bool, IdealWitness | None]:
    ext = P.ext
    return is_ideal(ext.Y, ext.x.image(pt_kernel(P)))


def pt_is_normal(P: PointSubobject) -> bool:
    return pt_normality(P)[0]


def lift_split_extension(ext: SplitExtension, K: Subset) -> PointSubobject:
    """The normal point subobject with kernel K, for K whose image is an ideal of Y."""
    J = ext.x.image(K)
    ok, wit = is_ideal(ext.Y, J)
    if not ok:
        raise AlgebraError(f"image of {K!r} is not an ideal of {ext.Y.name}: {wit.describe(ext.Y)}")
    P = PointSubobject(ext, ext.denormalize(J))
    if pt_kernel(P) != K:
        raise AssertionError("kernel of the lifted point subobject differs from K")
    return P


def point_subobjects(ext: SplitExtension, max_size: int = 16) -> list[PointSubobject]:
    return [
        PointSubobject(ext, S)
        for S in enumerate_subalgebras(ext.Y, max_size=max_size, start=ext.section_image)
    ]


def normal_point_subobjects(ext: SplitExtension, max_size: int = 16) -> list[PointSubobject]:
    """Normal point subobjects, one per ideal of Y inside ``ker f``."""
    return [PointSubobject(ext, ext.denormalize(J)) for J in enumerate_ideals(ext.Y, max_size, ext.kernel)]


# --- condition (vii): a normal point subobject with kernel the Huq commutator --

@dataclass
class NHSearchResult:
    W: Subset
    witness: PointSubobject | None
    lifted: bool
    candidates_checked: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "huqInX": self.W.labels(),
            "found": self.found,
            "witness": None if self.witness is None else self.witness.members.labels(),
            "lifted": self.lifted,
            "candidatesChecked": self.candidates_checked,
        }


def _require_ideals_of_Y(ext: SplitExtension, *subsets: Subset):
    for K in subsets:
        if K.algebra is not ext.X:
            raise AlgebraError("subsets must belong to the kernel algebra X")
        ok, wit = is_ideal(ext.Y, ext.x.image(K))
        if not ok:
            raise AlgebraError(f"image of {K!r} is not an ideal of {ext.Y.name}: {wit.describe(ext.Y)}")


def thm_nh_vii_search(ext: SplitExtension, K: Subset, L: Subset, max_size: int = 16) -> NHSearchResult:
    """Look for a normal point subobject whose kernel is ``huq_X(K, L)``.

    When the commutator's image is an ideal of Y the lift is returned directly;
    otherwise every point subobject is examined and ``witness`` is None when
    none qualifies.
    """
    _require_ideals_of_Y(ext, K, L)
    if ext.Y.n > max_size:
        raise BoundExceeded(f"point search limited to {max_size} elements, got {ext.Y.n}")
    W = huq(ext.X, K, L)
    if is_ideal(ext.Y, ext.x.image(W))[0]:
        return NHSearchResult(W, lift_split_extension(ext, W), True, 1)
    candidates = point_subobjects(ext, max_size)
    for P in candidates:
        if pt_kernel(P) == W and pt_is_normal(P):
            return NHSearchResult(W, P, False, len(candidates))
    return NHSearchResult(W, None, False, len(candidates))


# --- Huq commutator in the category of points ---------------------------------

def _group_generators(Y: FiniteAlgebra, pairs: np.ndarray) -> np.ndarray:
    """A small subset of ``pairs`` (rows of Y x Y) generating them as a group."""
    have = {(0, 0)}
    gens = []
    for a, b in pairs.tolist():
        if (a, b) in have:
            continue
        gens.append((a, b))
        frontier = list(have)
        while frontier:
            nxt = []
            for u, v in frontier:
                for g, h in gens:
                    w = (int(Y.add[u, g]), int(Y.add[v, h]))
                    if w not in have:
                        have.add(w)
                        nxt.append(w)
            frontier = nxt
    return np.array(gens, dtype=np.int64).reshape(-1, 2)


def cooperation_defects(
    ext: SplitExtension, Kp: PointSubobject, Lp: PointSubobject, shortcut: bool | None = None
) -> Subset:
    """Values ``-phi(op(p)) + op(phi(p))`` over tuples of the fibered product.

    ``phi(a, b) = a - s(f(a)) + b`` is the only candidate cooperator of the two
    point subobjects over Z; it is a morphism modulo an ideal J exactly when
    every defect lies in J. With ``shortcut`` (default: when Y is abelian and
    every operation distributes) the defect map is multi-additive, so it is
    evaluated on group generators of the fibered product only.
    """
    Y = ext.Y
    f = ext.f.map
    add, neg = Y.add, Y.neg
    ka, lb = Kp.members.ids, Lp.members.ids
    match = f[ka][:, None] == f[lb][None, :]
    ia, ib = np.nonzero(match)
    pairs = np.stack([ka[ia], lb[ib]], axis=1).astype(np.int64)
    if shortcut is None:
        shortcut = Y.is_abelian and Y.is_distributive
    ops = [op for op in Y.signature.ops if op.arity > 0]
    if shortcut:
        if not (Y.is_abelian and Y.is_distributive):
            raise AlgebraError("the generator shortcut needs an abelian distributive algebra")
        pairs = _group_generators(Y, pairs)
        ops = list(Y.omega)
    sfa = ext.s.map[f[pairs[:, 0]]]
    phi = add[add[pairs[:, 0], neg[sfa]], pairs[:, 1]]
    defects = np.zeros(Y.n, dtype=bool)
    m = len(pairs)
    for op in ops:
        tab = Y.tables[op.name]
        k = op.arity
        if m ** k > WORD_LIMIT:
            raise BoundExceeded(f"{m ** k} tuples for {op.name!r} exceed {WORD_LIMIT}")
        rows = max(1, _CHUNK // max(1, m ** (k - 1)))
        rest = np.indices((m,) * (k - 1)).reshape(k - 1, -1) if k > 1 else np.zeros((0, 1), dtype=np.int64)
        for start in range(0, m, rows):
            first = np.arange(start, min(m, start + rows))
            idx = [np.repeat(first, rest.shape[1])] + [np.tile(r, len(first)) for r in rest]
            a_args = tuple(pairs[i, 0] for i in idx)
            b_args = tuple(pairs[i, 1] for i in idx)
            oa, ob = tab[a_args], tab[b_args]
            phi_op = add[add[oa, neg[ext.s.map[f[oa]]]], ob]
            op_phi = tab[tuple(phi[i] for i in idx)]
            defects[add[neg[phi_op], op_phi]] = True
    return Subset.from_mask(Y, defects)


@dataclass
class PreservationVerdict:
    pt_huq: PointSubobject
    pt_huq_kernel: Subset
    plain_huq: Subset
    equal: bool
    ideals_checked: int
    instance: InstanceVerdict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "pointHuq": self.pt_huq.members.labels(),
            "pointHuqKernel": self.pt_huq_kernel.labels(),
            "plainHuq": self.plain_huq.labels(),
            "equal": self.equal,
            "idealsChecked": self.ideals_checked,
        }
        if self.instance is not None:
            out["trivialBase"] = self.instance.to_dict()
        return out


def kernel_functor_preservation_check(
    ext: SplitExtension,
    Kp: PointSubobject,
    Lp: PointSubobject,
    max_size: int = 16,
    shortcut: bool | None = None,
    smith_max: int = 20,
) -> PreservationVerdict:
    """Compare the Huq commutator of two normal point subobjects with the one of their kernels.

    The point-level commutator is the smallest normal point subobject modulo
    which the two cooperate over Z; it is found by running through every ideal
    J of Y inside ``ker f``. When Z is trivial the plain (NH)/(SH) verdict on
    the kernels is attached as well.
    """
    for P in (Kp, Lp):
        if P.ext is not ext:
            raise AlgebraError("point subobjects of a different extension")
        ok, wit = pt_normality(P)
        if not ok:
            raise AlgebraError(f"{P!r} is not normal: {wit.describe(ext.Y)}")
    D = cooperation_defects(ext, Kp, Lp, shortcut)
    qualifying = [J for J in enumerate_ideals(ext.Y, max_size, ext.kernel) if D <= J]
    if not qualifying:
        raise AssertionError("no ideal inside ker f makes the point subobjects cooperate")
    meet = qualifying[0]
    for J in qualifying[1:]:
        meet = meet & J
    if meet not in qualifying:
        raise AssertionError("qualifying ideals are not closed under intersection; no smallest one")
    if meet != normal_closure(ext.Y, D):
        raise AssertionError("smallest qualifying ideal differs from the normal closure of the defects")
    N = PointSubobject(ext, ext.denormalize(meet))
    kernel_N = pt_kernel(N)
    K, L = pt_kernel(Kp), pt_kernel(Lp)
    plain = huq(ext.X, K, L)
    verdict = PreservationVerdict(N, kernel_N, plain, kernel_N == plain, len(qualifying))
    if ext.Z.n == 1:
        verdict.instance = sh_nh_instance_check(ext.X, K, L, smith_max=smith_max)
    return verdict


# --- builders ---------------------------------------------------------------

def trivial_algebra(signature, name: str = "1") -> FiniteAlgebra:
    tables = {op.name: np.zeros((1,) * op.arity, dtype=np.int64) if op.arity else 0 for op in signature.ops}
    return FiniteAlgebra(signature, 1, tables, names=["0"], name=name)


def trivial_extension(X: FiniteAlgebra) -> SplitExtension:
    """``X -> X <=> 1``."""
    T = trivial_algebra(X.signature)
    return make_split_extension(Hom(X, X, np.arange(X.n)), Hom(X, T, np.zeros(X.n)), Hom(T, X, [0]))


def product_extension(X: FiniteAlgebra, Z: FiniteAlgebra) -> SplitExtension:
    """``X -> X x Z <=> Z`` with the canonical maps."""
    Y, _, p2 = product(X, Z)
    x = Hom(X, Y, np.arange(X.n) * Z.n)
    s = Hom(Z, Y, np.arange(Z.n))
    return make_split_extension(x, p2, s)


def square_extension(X: FiniteAlgebra) -> SplitExtension:
    """``X -> X x X <=> X``: first projection, diagonal section, kernel ``0 x X``."""
    Y, p1, _ = product(X, X)
    a = np.arange(X.n)
    return make_split_extension(Hom(X, Y, a), p1, Hom(X, Y, a * X.n + a))


def extension_from_complement(Y: FiniteAlgebra, X: Subset, C: Subset) -> SplitExtension:
    """``X -> Y <=> Y/X`` for an ideal X with a complementary subalgebra C (section onto C)."""
    if X.algebra is not Y or C.algebra is not Y:
        raise AlgebraError("subsets of a different algebra")
    if not is_subalgebra(Y, C):
        raise AlgebraError(f"{C!r} is not a subalgebra of {Y.name}")
    if len(X & C) != 1 or len(X) * len(C) != Y.n:
        raise AlgebraError(f"{C!r} is not a complement of {X!r}")
    Q, q = quotient_by_ideal(Y, X, name=f"{Y.name}/X")
    Xalg, xinc = induced_subalgebra(Y, X, name=f"{Y.name}|X")
    sec = np.zeros(Q.n, dtype=np.int64)
    for c in C.ids:
        sec[q.map[c]] = c
    return make_split_extension(xinc, q, Hom(Q, Y, sec))


def complement_pairs(Y: FiniteAlgebra, max_size: int = 12) -> list[tuple[Subset, Subset]]:
    """All ``(X, C)`` with X an ideal and C a subalgebra complementing it."""
    ideals = enumerate_ideals(Y, max_size)
    subs = enumerate_subalgebras(Y, max_size)
    out = []
    for X in ideals:
        for C in subs:
            if len(X) * len(C) == Y.n and len(X & C) == 1:
                out.append((X, C))
    return out


def group_split_extensions(max_size: int = 12) -> list[tuple[str, SplitExtension]]:
    """Split extensions of corpus groups: every ideal/complement decomposition up to ``max_size``."""
    from .corpus import build_corpus

    out = []
    for e in build_corpus():
        if e.kind != "group":
            continue
        Y, _ = e.build()
        if Y.n > max_size:
            continue
        for X, C in complement_pairs(Y, max_size):
            out.append((f"{e.id}[X={X!r},C={C!r}]", extension_from_complement(Y, X, C)))
    return out


def kernel_subsets(ext: SplitExtension, max_size: int = 16) -> list[Subset]:
    """Subsets of X whose images are ideals of Y."""
    return [ext.x.preimage(J) for J in enumerate_ideals(ext.Y, max_size, ext.kernel)]


def direct_normality(P: PointSubobject) -> bool:
    """Normality checked as ``P = s(Z) + J`` for an ideal J of Y inside ``ker f``.

    Independent of :func:`pt_is_normal`: it runs through the ideal lattice of Y
    instead of testing the kernel.
    """
    ext = P.ext
    ker = ext.kernel
    for J in enumerate_ideals(ext.Y, max(ext.Y.n, 16)):
        if not J <= ker:
            continue
        sums = ext.Y.add[np.ix_(ext.section_image.ids, J.ids)]
        if Subset(ext.Y, sums.ravel().tolist()) == P.members:
            return True
    return False

