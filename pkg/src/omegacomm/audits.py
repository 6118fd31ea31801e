"""Whole-algebra audits: (NH), (SH), the category-of-interest axioms, characteristic subobjects."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .commutators import higgins, huq
from .congruences import smith_normalization
from .core import (
    AlgebraError,
    BoundExceeded,
    FiniteAlgebra,
    Hom,
    Subset,
    ValidationReport,
    check_hom,
    enumerate_automorphisms,
    validate_group_laws,
)
from .subobjects import IdealWitness, enumerate_ideals, is_ideal

SCHEMA_VERSION = 1


def default_bound(A: FiniteAlgebra) -> int:
    return 16 if not A.omega else 12


# --- (NH) and (SH) -------------------------------------------------------------

@dataclass
class AuditReport:
    algebra: str
    kind: str
    ideal_pairs_checked: int = 0
    nh_violations: list[tuple[Subset, Subset, IdealWitness]] = field(default_factory=list)
    sh_violations: list[tuple[Subset, Subset, Subset, Subset]] = field(default_factory=list)
    confirmations: list[tuple[Subset, Subset, Subset]] = field(default_factory=list)
    smith_equals_higgins: list[tuple[Subset, Subset, bool]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def violations(self) -> list:
        return self.nh_violations if self.kind == "nh" else self.sh_violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def reverify(self) -> bool:
        """Recompute every recorded violation from scratch."""
        for K, L, wit in self.nh_violations:
            A = K.algebra
            H = higgins(A, K, L).higgins
            if wit.value in H or wit.recompute(A) != wit.value:
                return False
            if is_ideal(A, H)[0]:
                return False
        for K, L, H, S in self.sh_violations:
            A = K.algebra
            if huq(A, K, L) != H or smith_normalization(A, K, L) != S or H == S:
                return False
        return True

    def to_dict(self) -> dict:
        def lab(S):
            return S.labels()

        out = {
            "schema": SCHEMA_VERSION,
            "audit": self.kind,
            "algebra": self.algebra,
            "idealPairsChecked": self.ideal_pairs_checked,
            "violationCount": len(self.violations),
        }
        if self.kind == "nh":
            out["nhViolations"] = [
                {"K": lab(K), "L": lab(L), "witness": w.describe(K.algebra), "escaping": K.algebra.label(w.value)}
                for K, L, w in self.nh_violations
            ]
        else:
            out["shViolations"] = [
                {"K": lab(K), "L": lab(L), "huq": lab(H), "smithNormalization": lab(S)}
                for K, L, H, S in self.sh_violations
            ]
            out["smithEqualsHiggins"] = [
                {"K": lab(K), "L": lab(L), "holds": v} for K, L, v in self.smith_equals_higgins
            ]
        out["confirmations"] = [{"K": lab(K), "L": lab(L), "commutator": lab(C)} for K, L, C in self.confirmations]
        out["elapsedSeconds"] = round(self.elapsed, 6)
        return out

    def to_text(self) -> str:
        title = "(NH)" if self.kind == "nh" else "(SH)"
        lines = [
            f"{title} audit of {self.algebra}",
            f"ideal pairs checked: {self.ideal_pairs_checked}",
            f"violations: {len(self.violations)}",
        ]
        for K, L, w in self.nh_violations:
            lines.append(f"  K={K!r} L={L!r}: Higgins commutator not an ideal, {w.describe(K.algebra)}")
        for K, L, H, S in self.sh_violations:
            lines.append(f"  K={K!r} L={L!r}: huq={H!r} smith normalization={S!r}")
        lines.append(f"confirmations: {len(self.confirmations)}")
        lines.append(f"elapsed: {self.elapsed:.3f}s")
        return "\n".join(lines)


def _ideal_pairs(A: FiniteAlgebra, max_size: int | None):
    bound = default_bound(A) if max_size is None else max_size
    ideals = enumerate_ideals(A, bound)
    return list(itertools.combinations_with_replacement(ideals, 2))


def audit_nh(A: FiniteAlgebra, max_size: int | None = None) -> AuditReport:
    """Higgins commutator of every pair of ideals, recording the ones that are not ideals."""
    start = time.perf_counter()
    rep = AuditReport(A.name, "nh")
    for K, L in _ideal_pairs(A, max_size):
        res = higgins(A, K, L)
        rep.ideal_pairs_checked += 1
        if res.higgins_is_ideal:
            rep.confirmations.append((K, L, res.higgins))
        else:
            rep.nh_violations.append((K, L, res.ideal_witness))
    rep.elapsed = time.perf_counter() - start
    return rep


def audit_sh(A: FiniteAlgebra, max_size: int | None = None, smith_max: int = 20) -> AuditReport:
    """Huq commutator against the Smith normalization for every pair of ideals."""
    start = time.perf_counter()
    rep = AuditReport(A.name, "sh")
    for K, L in _ideal_pairs(A, max_size):
        res = higgins(A, K, L)
        S = smith_normalization(A, K, L, max_size=smith_max)
        rep.ideal_pairs_checked += 1
        rep.smith_equals_higgins.append((K, L, res.higgins == S))
        if res.huq == S:
            rep.confirmations.append((K, L, S))
        else:
            rep.sh_violations.append((K, L, res.huq, S))
    rep.elapsed = time.perf_counter() - start
    return rep


# --- category-of-interest axioms ---------------------------------------------

NONE_WITHIN_BOUND = "none within bound"


@dataclass
class AxiomStatus:
    axiom: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass
class CIReport:
    algebra: str
    axioms: dict[str, AxiomStatus]
    ci8_witnesses: dict[str, str]
    ci8_depth: int

    def failed(self) -> list[str]:
        return [k for k, v in self.axioms.items() if not v.passed]

    @property
    def all_pass(self) -> bool:
        return not self.failed()

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "algebra": self.algebra,
            "axioms": {
                k: {"passed": v.passed, "witness": None if v.witness is None else list(v.witness), "detail": v.detail}
                for k, v in self.axioms.items()
            },
            "ci8Witnesses": dict(self.ci8_witnesses),
            "ci8Depth": self.ci8_depth,
        }

    def to_text(self) -> str:
        lines = [f"category-of-interest axioms for {self.algebra}"]
        for k, v in self.axioms.items():
            line = f"  {k}: {'pass' if v.passed else 'FAIL'}"
            if v.detail:
                line += f"  {v.detail}"
            lines.append(line)
        for pair, w in self.ci8_witnesses.items():
            lines.append(f"  CI8 {pair}: {w}")
        return "\n".join(lines)


def _first_bad(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(int(i) for i in hit[0]) if len(hit) else None


def _status(name: str, A: FiniteAlgebra, bad, fmt) -> AxiomStatus:
    if bad is None:
        return AxiomStatus(name, True)
    return AxiomStatus(name, False, bad, fmt(bad))


def _word_atoms(A: FiniteAlgebra, binary, sample=None):
    """Atoms ``x *i (y #i z)`` and ``y *i (x #i z)`` as flat value arrays over (x, y, z)."""
    n = A.n
    if sample is None:
        xs, ys, zs = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    else:
        xs, ys, zs = sample
    atoms = []
    for o1, o2 in itertools.product(binary, repeat=2):
        t1, t2 = A.tables[o1.name], A.tables[o2.name]
        atoms.append((f"x {o1.name} (y {o2.name} z)", t1[xs, t2[ys, zs]]))
        atoms.append((f"y {o1.name} (x {o2.name} z)", t1[ys, t2[xs, zs]]))
    return atoms, (xs, ys, zs)


def _ci8_search(A: FiniteAlgebra, star, box, binary, depth: int, max_len: int = 4, sample_size: int = 512):
    """Shortest signed sum of atoms equal to ``(x star y) box z``; None when nothing within the bound.

    Candidates use at most ``depth`` distinct atoms and at most ``max_len``
    summands. They are screened on a fixed pseudo-random sample of triples and
    confirmed on all of them.
    """
    n = A.n
    rng = np.random.default_rng(0)
    total = n ** 3
    if total <= sample_size:
        sample = None
    else:
        flat = np.sort(rng.choice(total, size=sample_size, replace=False))
        sample = np.unravel_index(flat, (n, n, n))
    atoms, (xs, ys, zs) = _word_atoms(A, binary, sample)
    tS, tB = A.tables[star.name], A.tables[box.name]
    target = tB[tS[xs, ys], zs]
    add, neg = A.add, A.neg
    signed = []
    for i, (name, vals) in enumerate(atoms):
        signed.append((i, name, vals))
        signed.append((i, "-" + name, neg[vals]))

    def full_check(word) -> bool:
        fatoms, (fx, fy, fz) = _word_atoms(A, binary)
        acc = np.zeros(total, dtype=np.int64)
        for i, sgn in word:
            v = fatoms[i][1]
            acc = add[acc, neg[v] if sgn else v]
        return bool(np.array_equal(acc, tB[tS[fx, fy], fz]))

    def render(word) -> str:
        if not word:
            return "0"
        parts = []
        for k, (i, sgn) in enumerate(word):
            name = atoms[i][0]
            parts.append(("- " if sgn else ("+ " if k else "")) + name)
        return " ".join(parts)

    # breadth-first over word length; states are (word, values on the sample)
    level = [((), np.zeros_like(target))]
    for length in range(0, max_len + 1):
        for word, vals in level:
            if np.array_equal(vals, target) and (sample is None or full_check(word)):
                return render(word)
        if length == max_len:
            break
        nxt = []
        for word, vals in level:
            used = {i for i, _ in word}
            for i, name, avals in signed:
                if i not in used and len(used) >= depth:
                    continue
                sgn = name.startswith("-")
                if word and word[-1] == (i, not sgn):
                    continue  # adjacent cancellation
                nxt.append((word + ((i, sgn),), add[vals, avals]))
        level = nxt
    return None


def classify_ci(A: FiniteAlgebra, ci8_depth: int = 2, ci8_length: int = 4) -> CIReport:
    """Check the category-of-interest axioms CI1 to CI8 on a finite algebra.

    CI1 to CI7 are checked exhaustively; the CI8 word is searched within the
    given bounds and a miss is reported as ``none within bound``.
    """
    big = [op for op in A.omega if op.arity > 2]
    if big:
        raise AlgebraError(
            f"operations of arity > 2 ({', '.join(o.name for o in big)}) are outside the axioms' signature"
        )
    L = A.label
    unary = [op for op in A.omega if op.arity == 1]
    binary = [op for op in A.omega if op.arity == 2]
    n = A.n
    ax: dict[str, AxiomStatus] = {}
    ax["CI1"] = AxiomStatus("CI1", True, detail="arities within 0..2")
    laws = validate_group_laws(A)
    ax["CI2"] = AxiomStatus(
        "CI2", laws.ok, laws.failures[0][1] if laws.failures else None,
        "" if laws.ok else f"group law {laws.failures[0][0]} fails",
    )
    missing = [
        o.name for o in binary
        if not any(np.array_equal(A.tables[p.name], A.tables[o.name].T) for p in binary)
    ]
    ax["CI3"] = AxiomStatus(
        "CI3", not missing, tuple(missing) or None,
        f"no operation is the opposite of {', '.join(missing)}" if missing else "",
    )
    add = A.add
    a = np.arange(n)
    bad = None
    for op in unary:
        t = A.tables[op.name]
        w = _first_bad(t[add] != add[t[:, None], t[None, :]])
        if w:
            bad = (op.name,) + w
            break
    ax["CI4"] = _status("CI4", A, bad, lambda w: f"{w[0]}({L(w[1])} + {L(w[2])}) differs")
    bad = None
    for op in binary:
        t = A.tables[op.name]
        w = _first_bad(t[a[:, None, None], add[None, :, :]] != add[t[:, :, None], t[:, None, :]])
        if w:
            bad = (op.name,) + w
            break
    ax["CI5"] = _status("CI5", A, bad, lambda w: f"{L(w[1])}{w[0]}({L(w[2])} + {L(w[3])}) differs")
    bad = None
    for u, op in itertools.product(unary, binary):
        tu, t = A.tables[u.name], A.tables[op.name]
        w = _first_bad(t[tu[:, None], a[None, :]] != tu[t])
        if w:
            bad = (u.name, op.name) + w
            break
    ax["CI6"] = _status("CI6", A, bad, lambda w: f"{w[0]}({L(w[2])}){w[1]}{L(w[3])} differs")
    bad = None
    for op in binary:
        t = A.tables[op.name]
        w = _first_bad(add[a[:, None, None], t[None, :, :]] != add[t[None, :, :], a[:, None, None]])
        if w:
            bad = (op.name,) + w
            break
    ax["CI7"] = _status(
        "CI7", A, bad,
        lambda w: f"x={L(w[1])}, y={L(w[2])}, z={L(w[3])}: "
        f"{L(w[1])} + ({L(w[2])}{w[0]}{L(w[3])}) != ({L(w[2])}{w[0]}{L(w[3])}) + {L(w[1])}",
    )
    witnesses = {}
    missing8 = []
    for star, box in itertools.product(binary, repeat=2):
        word = _ci8_search(A, star, box, binary, ci8_depth, ci8_length)
        key = f"({star.name},{box.name})"
        witnesses[key] = word if word is not None else NONE_WITHIN_BOUND
        if word is None:
            missing8.append(key)
    ax["CI8"] = AxiomStatus(
        "CI8", not missing8, tuple(missing8) or None,
        f"{NONE_WITHIN_BOUND} for {', '.join(missing8)} (depth {ci8_depth}, length {ci8_length})" if missing8 else "",
    )
    return CIReport(A.name, ax, witnesses, ci8_depth)


@dataclass
class PrcomResult:
    report: ValidationReport | None
    skipped: str | None = None


def check_remark_prcom(A: FiniteAlgebra, ci: CIReport | None = None) -> PrcomResult:
    """``(x*t) + (y*z) = (y*z) + (x*t)`` for every binary operation, skipped unless CI5 holds."""
    ci = ci or classify_ci(A, ci8_depth=0, ci8_length=0)
    if not ci.axioms["CI5"].passed:
        return PrcomResult(None, "CI5 fails, so the identity is not implied")
    rep = ValidationReport()
    add = A.add
    for op in (o for o in A.omega if o.arity == 2):
        t = A.tables[op.name]
        vals, first = np.unique(t.ravel(), return_index=True)
        bad = add[vals[:, None], vals[None, :]] != add[vals[None, :], vals[:, None]]
        tag = f"prcom:{op.name}"
        if bad.any():
            i, j = np.argwhere(bad)[0]
            x, tt = np.unravel_index(first[i], t.shape)
            y, z = np.unravel_index(first[j], t.shape)
            rep.failures.append((tag, (int(x), int(y), int(z), int(tt))))
        else:
            rep.passed_axioms.append(tag)
    return PrcomResult(rep)


# --- characteristic subobjects ---------------------------------------------------

class InvalidEmbedding(AlgebraError):
    pass


def validate_embedding(A: FiniteAlgebra, h: Hom) -> None:
    if h.dom is not A:
        raise InvalidEmbedding("embedding does not start at the algebra")
    rep = check_hom(h)
    if not rep.ok:
        raise InvalidEmbedding(f"not a homomorphism: {rep.failures[0][0]} at {rep.failures[0][1]}")
    if not h.is_injective():
        raise InvalidEmbedding(f"not injective into {h.cod.name}")
    ok, wit = is_ideal(h.cod, h.image())
    if not ok:
        raise InvalidEmbedding(f"image is not an ideal of {h.cod.name}: {wit.describe(h.cod)}")


@dataclass
class EmbeddingVerdict:
    target: str
    normal: bool
    witness: str | None = None


@dataclass
class CharacteristicReport:
    subset: Subset
    aut_invariant: bool
    moved_by: list[int] | None
    per_embedding: list[EmbeddingVerdict]

    @property
    def characteristic(self) -> bool:
        return self.aut_invariant and all(v.normal for v in self.per_embedding)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "subset": self.subset.labels(),
            "autInvariant": self.aut_invariant,
            "movedBy": self.moved_by,
            "perEmbedding": [{"target": v.target, "normal": v.normal, "witness": v.witness} for v in self.per_embedding],
            "characteristic": self.characteristic,
        }


def _per_embedding(S: Subset, embeddings) -> list[EmbeddingVerdict]:
    out = []
    for B, h in embeddings:
        if h.cod is not B:
            raise InvalidEmbedding("embedding codomain differs from the supplied algebra")
        ok, wit = is_ideal(B, h.image(S))
        out.append(EmbeddingVerdict(B.name, ok, None if ok else wit.describe(B)))
    return out


def characteristic_check(A: FiniteAlgebra, S: Subset, embeddings, aut_max: int = 16) -> CharacteristicReport:
    """Automorphism invariance of S plus normality of its image in each supplied extension."""
    for _, h in embeddings:
        validate_embedding(A, h)
    moved = None
    for phi in enumerate_automorphisms(A, max_size=aut_max):
        if phi.image(S) != S:
            moved = [int(v) for v in phi.map]
            break
    return CharacteristicReport(S, moved is None, moved, _per_embedding(S, embeddings))


@dataclass
class CharCommutatorReport:
    huq: Subset
    per_embedding: list[EmbeddingVerdict]
    nh_instance: list[bool]

    @property
    def passed(self) -> bool:
        return all(v.normal for v in self.per_embedding)

    @property
    def expected_failure(self) -> bool:
        """Every non-normal image sits in an extension where the Higgins commutator is not an ideal."""
        return not self.passed and all(
            v.normal or not nh for v, nh in zip(self.per_embedding, self.nh_instance)
        )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "huq": self.huq.labels(),
            "perEmbedding": [{"target": v.target, "normal": v.normal, "witness": v.witness} for v in self.per_embedding],
            "nhInstance": list(self.nh_instance),
            "passed": self.passed,
            "expectedFailure": self.expected_failure,
        }


def char_commutator_check(A: FiniteAlgebra, K: Subset, L: Subset, embeddings, aut_max: int = 16) -> CharCommutatorReport:
    """Normality of ``huq(K, L)`` in every supplied extension, for characteristic K and L.

    ``nh_instance`` records, per extension, whether the Higgins commutator of
    the images of K and L is an ideal there; when it is not, the extension
    violates (NH) and a non-normal result is the expected failure mode.
    """
    for S in (K, L):
        rep = characteristic_check(A, S, embeddings, aut_max)
        if not rep.characteristic:
            raise AlgebraError(f"{S!r} fails the characteristic check for the supplied embeddings")
    H = huq(A, K, L)
    nh = [higgins(B, h.image(K), h.image(L)).higgins_is_ideal for B, h in embeddings]
    return CharCommutatorReport(H, _per_embedding(H, embeddings), nh)


def holomorph_embedding(G: FiniteAlgebra) -> tuple[FiniteAlgebra, Hom]:
    from .corpus import holomorph

    H, ids = holomorph(G)
    return H, Hom(G, H, ids)


