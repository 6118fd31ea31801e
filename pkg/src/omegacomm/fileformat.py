"""Plain-text algebra files.

Grammar, one directive per line (``#`` starts a comment)::

    algebra <name>
    elements <n>
    names <n tokens>                 (optional)
    zero <element>
    op <name> <arity>                followed by n**arity entries, row-major
    subset <name> : <elements...>

Operation ``+`` (arity 2) and ``-`` (arity 1) form the group; every other
operation is an extra operation. Table entries and subset members are element
names when ``names`` is given, otherwise integer ids. ``zero`` names the
identity element, which is renumbered to id 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    AlgebraError,
    AlgebraValidationError,
    FiniteAlgebra,
    Signature,
    SignatureError,
    Subset,
    ValidationReport,
)

KEYWORDS = ("algebra", "elements", "names", "zero", "op", "subset")


class AlgebraFileSyntaxError(AlgebraError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class ParsedAlgebra:
    algebra: FiniteAlgebra
    subsets: dict[str, Subset] = field(default_factory=dict)


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append(_Token(part, no, col + 1))
            col += len(part)
        if toks:
            yield no, toks


def parse_algebra(text: str) -> ParsedAlgebra:
    name = None
    n = None
    names: list[str] | None = None
    zero_tok: _Token | None = None
    ops: list[tuple[str, int, list[_Token], _Token]] = []
    subsets: list[tuple[str, list[_Token]]] = []
    current = None  # op being filled

    def err(msg, tok):
        raise AlgebraFileSyntaxError(msg, tok.line, tok.column)

    def close_op():
        nonlocal current
        if current is not None:
            opname, arity, entries, head = current
            want = n ** arity
            if len(entries) != want:
                err(f"op {opname} expected {want} entries, got {len(entries)}", head)
            ops.append(current)
            current = None

    for _, toks in _lines(text):
        head = toks[0]
        kw = head.text
        if kw not in KEYWORDS:
            if current is None:
                err(f"unexpected token {kw!r}", head)
            current[2].extend(toks)
            continue
        close_op()
        args = toks[1:]
        if kw == "algebra":
            if name is not None:
                err("duplicate algebra line", head)
            if len(args) != 1:
                err("algebra takes exactly one name", head)
            name = args[0].text
        elif kw == "elements":
            if n is not None:
                err("duplicate elements line", head)
            if len(args) != 1 or not args[0].text.isdigit() or int(args[0].text) < 1:
                err("elements takes one positive integer", args[0] if args else head)
            n = int(args[0].text)
        elif kw == "names":
            if n is None:
                err("names before elements", head)
            if names is not None:
                err("duplicate names line", head)
            if len(args) != n:
                err(f"expected {n} names, got {len(args)}", head)
            seen = set()
            for t in args:
                if t.text in seen:
                    err(f"duplicate element name {t.text!r}", t)
                if t.text in KEYWORDS or t.text == ":":
                    err(f"reserved word {t.text!r} used as element name", t)
                seen.add(t.text)
            names = [t.text for t in args]
        elif kw == "zero":
            if zero_tok is not None:
                err("duplicate zero line", head)
            if len(args) != 1:
                err("zero takes exactly one element", head)
            zero_tok = args[0]
        elif kw == "op":
            if n is None:
                err("op before elements", head)
            if len(args) != 2 or not args[1].text.isdigit():
                err("op takes a name and an arity", head)
            opname, arity = args[0].text, int(args[1].text)
            if any(o[0] == opname for o in ops):
                err(f"duplicate op {opname!r}", args[0])
            if arity not in (1, 2, 3):
                err(f"arity {arity} not supported (1, 2 or 3)", args[1])
            current = (opname, arity, [], head)
        elif kw == "subset":
            if len(args) < 2 or args[1].text != ":":
                err("expected 'subset <name> : <elements>'", head)
            if any(s[0] == args[0].text for s in subsets):
                err(f"duplicate subset {args[0].text!r}", args[0])
            subsets.append((args[0].text, args[2:]))
    close_op()
    if name is None:
        raise AlgebraFileSyntaxError("missing algebra line", 1, 1)
    if n is None:
        raise AlgebraFileSyntaxError("missing elements line", 1, 1)

    index = {s: i for i, s in enumerate(names)} if names is not None else None

    def elem(tok: _Token) -> int:
        if index is not None:
            if tok.text not in index:
                err(f"unknown element {tok.text!r}", tok)
            return index[tok.text]
        if not tok.text.isdigit():
            err(f"expected an element id, got {tok.text!r}", tok)
        v = int(tok.text)
        if v >= n:
            err(f"element id {v} out of range 0..{n - 1}", tok)
        return v

    byname = {o[0]: o for o in ops}
    for gname, garity in (("+", 2), ("-", 1)):
        if gname not in byname:
            raise AlgebraFileSyntaxError(f"missing op {gname}", 1, 1)
        if byname[gname][1] != garity:
            err(f"op {gname} must have arity {garity}", byname[gname][3])
    raw = {}
    for opname, arity, entries, _ in ops:
        raw[opname] = np.array([elem(t) for t in entries], dtype=np.int64).reshape((n,) * arity)
    z = elem(zero_tok) if zero_tok is not None else 0

    add = raw["+"]
    bad = np.flatnonzero((add[z, :] != np.arange(n)) | (add[:, z] != np.arange(n)))
    if len(bad):
        x = int(bad[0])
        label = names[x] if names else str(x)
        zlabel = names[z] if names else str(z)
        rep = ValidationReport(failures=[("identity", (z, x))])
        raise AlgebraValidationError(
            f"declared zero {zlabel} is not an identity: {zlabel} + {label} or {label} + {zlabel} differs from {label}",
            rep,
        )
    # renumber so the zero is id 0
    order = [z] + [i for i in range(n) if i != z]
    perm = np.empty(n, dtype=np.int64)
    perm[order] = np.arange(n)  # old id -> new id
    o = np.array(order)
    tables = {}
    for opname, arity, _, _ in ops:
        t = raw[opname][np.ix_(*([o] * arity))]
        tables[opname] = perm[t]
    tables["0"] = 0
    extra = [(opname, arity) for opname, arity, _, _ in ops if opname not in ("+", "-")]
    if "0" in byname:
        raise AlgebraFileSyntaxError("op name '0' is reserved for the constant", byname["0"][3].line, 1)
    try:
        sig = Signature.group(*extra)
    except SignatureError as e:
        raise AlgebraValidationError(str(e)) from None
    new_names = [names[i] for i in order] if names is not None else None
    A = FiniteAlgebra(sig, n, tables, names=new_names, name=name)
    subs = {}
    for sname, toks in subsets:
        subs[sname] = Subset(A, (int(perm[elem(t)]) for t in toks))
    return ParsedAlgebra(A, subs)


def _fmt(A: FiniteAlgebra, v) -> str:
    return A.label(int(v))


def emit_algebra(A: FiniteAlgebra, subsets: dict[str, Subset] | None = None) -> str:
    """Text form of an algebra; ``parse_algebra`` reads it back exactly."""
    n = A.n
    out = [f"algebra {A.name}", f"elements {n}"]
    if A.names is not None:
        out.append("names " + " ".join(A.names))
    out.append(f"zero {A.label(0)}")
    for op in A.signature.ops:
        if op.arity == 0:
            continue
        out.append(f"op {op.name} {op.arity}")
        rows = A.tables[op.name].reshape(-1, n)
        for row in rows:
            out.append(" ".join(_fmt(A, v) for v in row))
    for sname, S in (subsets or {}).items():
        out.append(f"subset {sname} : " + " ".join(A.label(a) for a in S.sorted()))
    return "\n".join(out) + "\n"


def read_algebra(path: str, stdin=None) -> ParsedAlgebra:
    if path == "-":
        import sys

        return parse_algebra((stdin or sys.stdin).read())
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())
