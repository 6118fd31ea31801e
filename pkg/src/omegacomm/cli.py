"""Command-line interface.

Exit codes: 0 computed, 1 property violated (audits and checks), 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import corpus
from .audits import (
    SCHEMA_VERSION,
    audit_nh,
    audit_sh,
    characteristic_check,
    check_remark_prcom,
    classify_ci,
    holomorph_embedding,
)
from .commutators import cooperates, higgins, ternary_higgins
from .congruences import smith_normalization
from .core import AlgebraError, FiniteAlgebra, Hom, Subset, validate_distributivity, validate_group_laws
from .fileformat import emit_algebra, read_algebra
from .points import (
    kernel_functor_preservation_check,
    lift_split_extension,
    square_extension,
    thm_nh_vii_search,
    trivial_extension,
)
from .subobjects import enumerate_ideals, is_ideal, subalgebra_generate

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def resolve_subset(A: FiniteAlgebra, named: dict[str, Subset], spec: str) -> Subset:
    """A named subset, ``full``, ``zero``, or a comma list of generators."""
    if spec in named:
        return named[spec]
    if spec == "full":
        return A.all()
    if spec == "zero":
        return A.zero_subset()
    try:
        gens = [A.element(tok) for tok in spec.split(",") if tok]
    except AlgebraError as e:
        raise InputError(f"cannot read subset {spec!r}: {e}") from None
    return subalgebra_generate(A, Subset(A, gens))


def _labels(S: Subset) -> str:
    return "{" + ", ".join(S.labels()) + "}"


class Output:
    def __init__(self, fmt: str, command: str, stream):
        self.fmt = fmt
        self.command = command
        self.stream = stream
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = ""):
        self.lines.append(text)

    def flush(self):
        if self.fmt == "structured":
            payload = {"schema": SCHEMA_VERSION, "command": self.command, "result": self.data}
            self.stream.write(json.dumps(payload, indent=2) + "\n")
        else:
            self.stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _load(args, stdin):
    parsed = read_algebra(args.file, stdin)
    return parsed.algebra, parsed.subsets


def cmd_validate(args, out, stdin):
    A, _ = _load(args, stdin)
    laws = validate_group_laws(A)
    dist = validate_distributivity(A)
    rep = laws.merge(dist)
    out.data = {"algebra": A.name, "elements": A.n, **rep.to_dict()}
    out.line(f"algebra {A.name} with {A.n} elements")
    for tag in rep.passed_axioms:
        out.line(f"  pass {tag}")
    for tag, wit in rep.failures:
        out.line(f"  FAIL {tag} at {A.fmt_tuple(wit)}")
    return EXIT_OK if rep.ok else EXIT_VIOLATED


def cmd_axioms(args, out, stdin):
    A, _ = _load(args, stdin)
    ci = classify_ci(A, ci8_depth=args.ci8_depth)
    pr = check_remark_prcom(A, ci)
    out.data = ci.to_dict()
    out.data["prcom"] = {"skipped": pr.skipped, **(pr.report.to_dict() if pr.report else {})}
    out.line(ci.to_text())
    if pr.skipped:
        out.line(f"  products commute: skipped ({pr.skipped})")
    else:
        out.line(f"  products commute: {'pass' if pr.report.ok else 'FAIL'}")
    return EXIT_OK


def cmd_ideals(args, out, stdin):
    A, _ = _load(args, stdin)
    ideals = enumerate_ideals(A, args.max_size or 16)
    out.data = {"algebra": A.name, "ideals": [I.labels() for I in ideals]}
    out.line(f"{len(ideals)} ideals of {A.name}")
    for I in ideals:
        out.line(f"  {_labels(I)}")
    return EXIT_OK


def _two(args, A, named):
    return resolve_subset(A, named, args.K), resolve_subset(A, named, args.L)


def cmd_higgins(args, out, stdin):
    A, named = _load(args, stdin)
    K, L = _two(args, A, named)
    res = higgins(A, K, L)
    out.data = res.to_dict()
    out.line(f"generators ({len(res.generators)} distinct values):")
    for tag, wargs, v in res.generators:
        out.line(f"  {tag} {A.fmt_tuple(wargs)} -> {A.label(v)}")
    out.line(f"higgins ({len(res.higgins)} elements): {_labels(res.higgins)}")
    if res.higgins_is_ideal:
        out.line("ideal: yes")
    else:
        out.line(f"ideal: no, {res.ideal_witness.describe(A)}")
    out.line(f"normal closure ({len(res.huq)} elements): {_labels(res.huq)}")
    return EXIT_OK


def cmd_huq(args, out, stdin):
    A, named = _load(args, stdin)
    K, L = _two(args, A, named)
    H = higgins(A, K, L).huq
    out.data = {"huq": H.labels()}
    out.line(f"huq ({len(H)} elements): {_labels(H)}")
    return EXIT_OK


def _require_ideals(A, *subsets):
    for S in subsets:
        ok, wit = is_ideal(A, S)
        if not ok:
            raise InputError(f"{_labels(S)} is not an ideal: {wit.describe(A)}")


def cmd_smith(args, out, stdin):
    A, named = _load(args, stdin)
    K, L = _two(args, A, named)
    _require_ideals(A, K, L)
    S = smith_normalization(A, K, L, max_size=args.max_size or 20)
    out.data = {"smithNormalization": S.labels()}
    out.line(f"smith normalization ({len(S)} elements): {_labels(S)}")
    return EXIT_OK


def cmd_ternary(args, out, stdin):
    A, named = _load(args, stdin)
    K, L = _two(args, A, named)
    M = resolve_subset(A, named, args.M)
    T = ternary_higgins(A, K, L, M)
    out.data = {"ternary": T.labels()}
    out.line(f"ternary ({len(T)} elements): {_labels(T)}")
    return EXIT_OK


def cmd_cooperates(args, out, stdin):
    A, named = _load(args, stdin)
    K, L = _two(args, A, named)
    c = cooperates(A, K, L)
    out.data = {
        "cooperates": c.cooperates,
        "defectCount": c.defect_count,
        "defects": [{"op": op, "k": [A.label(a) for a in ks], "l": [A.label(b) for b in ls]} for op, ks, ls in c.defects],
    }
    out.line(f"cooperate: {'yes' if c.cooperates else 'no'}")
    for op, ks, ls in c.defects[:10]:
        out.line(f"  {op}: {A.fmt_tuple(ks)} with {A.fmt_tuple(ls)}")
    return EXIT_OK


def cmd_audit(kind):
    def run(args, out, stdin):
        A, _ = _load(args, stdin)
        if kind == "nh":
            rep = audit_nh(A, args.max_size)
        else:
            rep = audit_sh(A, args.max_size)
        out.data = rep.to_dict()
        out.line(rep.to_text())
        return EXIT_OK if rep.ok else EXIT_VIOLATED

    return run


def cmd_points(args, out, stdin):
    A, named = _load(args, stdin)
    pairs = []
    if args.K is not None:
        pairs = [(resolve_subset(A, named, args.K), resolve_subset(A, named, args.L or args.K))]
        _require_ideals(A, *pairs[0])
    else:
        ideals = enumerate_ideals(A, args.max_size or 16)
        pairs = [(K, L) for i, K in enumerate(ideals) for L in ideals[i:]]
    ext = trivial_extension(A) if args.point == "trivial" else square_extension(A)
    # X is A itself for the trivial point and a copy of A for the square point
    to_x = (lambda S: S) if args.point == "trivial" else (lambda S: Subset(ext.X, S.members))
    records = []
    status = EXIT_OK
    out.line(f"points check of {A.name} over the {args.point} point")
    for K, L in pairs:
        Kx, Lx = to_x(K), to_x(L)
        vii = thm_nh_vii_search(ext, Kx, Lx, max_size=max(ext.Y.n, 16))
        verdict = kernel_functor_preservation_check(
            ext, lift_split_extension(ext, Kx), lift_split_extension(ext, Lx), max_size=max(A.n, 16)
        )
        rec = {"K": K.labels(), "L": L.labels(), "normalSubobjectSearch": vii.to_dict(), "preservation": verdict.to_dict()}
        records.append(rec)
        if not vii.found or not verdict.equal:
            status = EXIT_VIOLATED
        out.line(f"K={_labels(K)} L={_labels(L)}")
        out.line(f"  normal point subobject with kernel huq: {'found' if vii.found else 'none'}")
        out.line(
            f"  point huq kernel {_labels(verdict.pt_huq_kernel)} vs huq {_labels(verdict.plain_huq)}: "
            f"{'equal' if verdict.equal else 'DIFFERENT'}"
        )
        if verdict.instance is not None:
            inst = verdict.instance
            out.line(
                f"  smith normalization {_labels(inst.smith_normalization)}, "
                f"huq equals smith: {'yes' if inst.sh_huq_equals_smith else 'no'}"
            )
    out.data = {"algebra": A.name, "point": args.point, "pairs": records}
    return status


def cmd_char(args, out, stdin):
    A, named = _load(args, stdin)
    S = resolve_subset(A, named, args.S)
    embeddings = [(A, Hom(A, A, list(range(A.n))))]
    if not A.omega:
        embeddings.append(holomorph_embedding(A))
    rep = characteristic_check(A, S, embeddings, aut_max=args.max_size or 16)
    out.data = rep.to_dict()
    out.line(f"subset {_labels(S)} of {A.name}")
    out.line(f"  automorphism invariant: {'yes' if rep.aut_invariant else 'no'}")
    for v in rep.per_embedding:
        out.line(f"  normal in {v.target}: {'yes' if v.normal else 'no, ' + v.witness}")
    return EXIT_OK if rep.characteristic else EXIT_VIOLATED


def cmd_corpus(args, out, stdin):
    if args.name is None:
        out.data = {"entries": [{"id": e.id, "provenance": e.provenance} for e in corpus.build_corpus()]}
        for e in corpus.build_corpus():
            out.line(f"{e.id}\t{e.provenance}")
        return EXIT_OK
    try:
        A, subsets = corpus.get(args.name)
    except KeyError as e:
        raise InputError(str(e.args[0])) from None
    text = emit_algebra(A, subsets)
    if out.fmt == "structured":
        out.data = {"id": args.name, "file": text}
    else:
        out.lines.append(text.rstrip("\n"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=None, help="enumeration bound")
    common.add_argument("--ci8-depth", type=int, default=2, help="distinct atoms allowed in CI8 words")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=None, help="reserved; all paths are deterministic")

    p = argparse.ArgumentParser(prog="omegacomm", description="Commutators in finite Omega-groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *positionals, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            if isinstance(pos, tuple):
                sp.add_argument(pos[0], **pos[1])
            else:
                sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "file", help="group laws and distributivity")
    add("axioms", cmd_axioms, "file", help="category-of-interest axioms CI1-CI8")
    add("ideals", cmd_ideals, "file", help="list all ideals")
    add("higgins", cmd_higgins, "file", "K", "L", help="Higgins commutator")
    add("huq", cmd_huq, "file", "K", "L", help="Huq commutator")
    add("smith", cmd_smith, "file", "K", "L", help="Smith normalization")
    add("ternary", cmd_ternary, "file", "K", "L", ("M", {"nargs": "?", "default": "full"}), help="ternary commutator")
    add("cooperates", cmd_cooperates, "file", "K", "L", help="do K and L cooperate")
    add("audit-nh", cmd_audit("nh"), "file", help="(NH) audit over all ideal pairs")
    add("audit-sh", cmd_audit("sh"), "file", help="(SH) audit over all ideal pairs")
    pc = add("points-check", cmd_points, "file", ("K", {"nargs": "?"}), ("L", {"nargs": "?"}),
             help="point-level checks over the trivial or square point")
    pc.add_argument("--point", choices=("trivial", "square"), default="trivial")
    add("char-check", cmd_char, "file", "S", help="characteristic subobject check")
    add("corpus", cmd_corpus, ("name", {"nargs": "?"}), help="list or emit builtin algebras")
    return p


def run_command(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    out = Output(args.format, args.command, stdout)
    try:
        code = args.func(args, out, stdin)
    except (InputError, AlgebraError, OSError) as e:
        stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    out.flush()
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
