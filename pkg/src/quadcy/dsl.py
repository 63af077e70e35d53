"""Presentation language: tokenizer, parser, pretty-printer and evaluation.

Example document::

    field Q;
    gens x, y;
    rel y*x - x*y - x^2;
    param a = 3;
    param b = 1..4;
    aut theta { x -> a*x; y -> b*x + a*y; }
    sigma s { p = -1; q = 0; S12 = [[1, 0], [1, 1]]; S21 = [[1, 0], [1, 1]]; }
    ext D = ore(theta);

Names inside expressions are generators if declared by ``gens``, otherwise
parameters. Parameters are plain rational values substituted before any
computation; a parameter with several values spans a sweep grid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DocumentError, ParseError
from .fields import QQ, field_from_name
from .linalg import Matrix
from .quadratic import QuadraticPresentation, presentation_from_polys

KEYWORDS = {"field", "gens", "rel", "param", "aut", "sigma", "ext"}
SIGMA_KEYS = ("p", "q", "S11", "S12", "S21", "S22")
EXT_KINDS = {"ore", "double_ore", "iterated"}


# -- AST -------------------------------------------------------------------

Pos = Tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Sym:
    name: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ParamDecl:
    name: str
    kind: str  # "list" or "range"
    values: Tuple  # expressions for "list", (lo, hi) ints for "range"

    def expand(self) -> List[Fraction]:
        if self.kind == "range":
            lo, hi = self.values
            return [Fraction(k) for k in range(lo, hi + 1)]
        return [scalar_value(v, {}) for v in self.values]


@dataclass(frozen=True)
class AutDecl:
    name: str
    images: Tuple[Tuple[str, object], ...]


@dataclass(frozen=True)
class SigmaDecl:
    name: str
    entries: Tuple[Tuple[str, object], ...]  # key -> expr (p, q) or matrix (tuple of rows)

    def get(self, key):
        for k, v in self.entries:
            if k == key:
                return v
        return None


@dataclass(frozen=True)
class ExtDecl:
    name: str
    kind: str
    args: Tuple[str, ...]


@dataclass(frozen=True)
class Document:
    field: Optional[str] = None
    gens: Tuple[str, ...] = ()
    relations: Tuple[object, ...] = ()
    params: Tuple[ParamDecl, ...] = ()
    auts: Tuple[AutDecl, ...] = ()
    sigmas: Tuple[SigmaDecl, ...] = ()
    exts: Tuple[ExtDecl, ...] = ()

    def param(self, name: str) -> Optional[ParamDecl]:
        return next((p for p in self.params if p.name == name), None)

    def aut(self, name: str) -> AutDecl:
        for a in self.auts:
            if a.name == name:
                return a
        raise DocumentError(f"no automorphism named {name!r}", available=[a.name for a in self.auts])

    def sigma(self, name: str) -> SigmaDecl:
        for s in self.sigmas:
            if s.name == name:
                return s
        raise DocumentError(f"no sigma named {name!r}", available=[s.name for s in self.sigmas])

    def ext(self, name: str) -> ExtDecl:
        for e in self.exts:
            if e.name == name:
                return e
        raise DocumentError(f"no extension named {name!r}", available=[e.name for e in self.exts])


# -- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>->|\.\.|[;,{}\[\]()=+\-*/^])"
)


@dataclass
class Token:
    kind: str  # num, name, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, col, "a token")
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("num", "name", "op"):
                out.append(Token(kind, s, line, col))
            col += len(s)
        i = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- parser ----------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.gens: Tuple[str, ...] = ()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: str, tok: Token = None):
        tok = tok or self.tok
        got = tok.text or "end of input"
        raise ParseError(f"expected {expected}, got {got!r}", tok.line, tok.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def eat(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        t = self.tok
        self.i += 1
        return t

    def name(self, what="a name") -> Token:
        if self.tok.kind != "name":
            self.fail(what)
        t = self.tok
        self.i += 1
        return t

    def number(self) -> int:
        if self.tok.kind != "num":
            self.fail("an integer")
        t = self.tok
        self.i += 1
        return int(t.text)

    # expressions

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok
            self.i += 1
            node = BinOp(op.text, node, self.term(), (op.line, op.col))
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.tok
            self.i += 1
            node = BinOp(op.text, node, self.unary(), (op.line, op.col))
        return node

    def unary(self):
        if self.at("-"):
            t = self.eat("-")
            return Neg(self.unary(), (t.line, t.col))
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            t = self.eat("^")
            return Pow(base, self.number(), (t.line, t.col))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text), (t.line, t.col))
        if t.kind == "name":
            self.i += 1
            return Sym(t.text, (t.line, t.col))
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.eat(")")
            return node
        self.fail("a number, a name or '('")

    def matrix(self):
        self.eat("[")
        rows = [self.matrix_row()]
        while self.at(","):
            self.i += 1
            rows.append(self.matrix_row())
        self.eat("]")
        return tuple(rows)

    def matrix_row(self):
        self.eat("[")
        row = [self.expr()]
        while self.at(","):
            self.i += 1
            row.append(self.expr())
        self.eat("]")
        return tuple(row)

    # statements

    def document(self) -> Document:
        fld = None
        gens: List[str] = []
        rels, params, auts, sigmas, exts = [], [], [], [], []
        seen = set()
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.kind != "name" or kw.text not in KEYWORDS:
                self.fail("a statement keyword (" + ", ".join(sorted(KEYWORDS)) + ")")
            self.i += 1
            if kw.text == "field":
                fld = self.name("a field name").text
                self.eat(";")
            elif kw.text == "gens":
                if gens:
                    self.fail("a single gens declaration", kw)
                gens.append(self.name("a generator name").text)
                while self.at(","):
                    self.i += 1
                    gens.append(self.name("a generator name").text)
                if len(set(gens)) != len(gens):
                    self.fail("distinct generator names", kw)
                self.gens = tuple(gens)
                self.eat(";")
            elif kw.text == "rel":
                e = self.expr()
                self.check_degree(e, 2, "a homogeneous degree-2 relation")
                rels.append(e)
                self.eat(";")
            elif kw.text == "param":
                params.append(self.param_decl(seen))
            elif kw.text == "aut":
                auts.append(self.aut_decl(seen))
            elif kw.text == "sigma":
                sigmas.append(self.sigma_decl(seen))
            else:
                exts.append(self.ext_decl(seen))
        return Document(fld, tuple(gens), tuple(rels), tuple(params), tuple(auts), tuple(sigmas), tuple(exts))

    def declare(self, tok: Token, seen: set):
        if tok.text in seen or tok.text in self.gens:
            self.fail("a fresh name", tok)
        seen.add(tok.text)

    def param_decl(self, seen) -> ParamDecl:
        nm = self.name("a parameter name")
        self.declare(nm, seen)
        self.eat("=")
        if self.at(";"):
            self.i += 1
            return ParamDecl(nm.text, "list", ())
        first = self.expr()
        if self.at(".."):
            self.i += 1
            second = self.expr()
            lo, hi = _int_literal(first), _int_literal(second)
            if lo is None or hi is None:
                self.fail("integer range bounds", nm)
            self.eat(";")
            return ParamDecl(nm.text, "range", (lo, hi))
        vals = [first]
        while self.at(","):
            self.i += 1
            vals.append(self.expr())
        for v in vals:
            self.check_degree(v, 0, "a scalar parameter value")
        self.eat(";")
        decl = ParamDecl(nm.text, "list", tuple(vals))
        try:
            decl.expand()
        except DocumentError as exc:
            raise ParseError(exc.message, nm.line, nm.col, "constant parameter values") from None
        return decl

    def aut_decl(self, seen) -> AutDecl:
        nm = self.name("an automorphism name")
        self.declare(nm, seen)
        self.eat("{")
        images = []
        while not self.at("}"):
            g = self.name("a generator name")
            if g.text not in self.gens:
                self.fail("a declared generator", g)
            self.eat("->")
            e = self.expr()
            self.check_degree(e, 1, "a linear form in the generators")
            images.append((g.text, e))
            self.eat(";")
        self.eat("}")
        return AutDecl(nm.text, tuple(images))

    def sigma_decl(self, seen) -> SigmaDecl:
        nm = self.name("a sigma name")
        self.declare(nm, seen)
        self.eat("{")
        entries = []
        while not self.at("}"):
            k = self.name("one of " + ", ".join(SIGMA_KEYS))
            if k.text not in SIGMA_KEYS:
                self.fail("one of " + ", ".join(SIGMA_KEYS), k)
            self.eat("=")
            if k.text in ("p", "q"):
                v = self.expr()
                self.check_degree(v, 0, "a scalar")
            else:
                v = self.matrix()
                for row in v:
                    for e in row:
                        self.check_degree(e, 0, "a scalar matrix entry")
            entries.append((k.text, v))
            self.eat(";")
        self.eat("}")
        return SigmaDecl(nm.text, tuple(entries))

    def ext_decl(self, seen) -> ExtDecl:
        nm = self.name("an extension name")
        self.declare(nm, seen)
        self.eat("=")
        kind = self.name("one of " + ", ".join(sorted(EXT_KINDS)))
        if kind.text not in EXT_KINDS:
            self.fail("one of " + ", ".join(sorted(EXT_KINDS)), kind)
        self.eat("(")
        args = [self.name("a declared name").text]
        while self.at(","):
            self.i += 1
            args.append(self.name("a declared name").text)
        self.eat(")")
        self.eat(";")
        return ExtDecl(nm.text, kind.text, tuple(args))

    # structural degree check

    def degree(self, node) -> Optional[int]:
        """Degree in the generators; ``None`` if inhomogeneous."""
        if isinstance(node, Num):
            return 0
        if isinstance(node, Sym):
            return 1 if node.name in self.gens else 0
        if isinstance(node, Neg):
            return self.degree(node.arg)
        if isinstance(node, Pow):
            d = self.degree(node.base)
            return None if d is None else d * node.exp
        a, b = self.degree(node.left), self.degree(node.right)
        if a is None or b is None:
            return None
        if node.op in "+-":
            return a if a == b else None
        if node.op == "*":
            return a + b
        return a if b == 0 else None

    def check_degree(self, node, want: int, expected: str):
        if self.degree(node) != want:
            line, col = _first_pos(node)
            raise ParseError("expression has the wrong degree", line, col, expected)


def _first_pos(node) -> Pos:
    if isinstance(node, BinOp):
        return _first_pos(node.left)
    return node.pos


def _int_literal(node) -> Optional[int]:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg) and isinstance(node.arg, Num):
        return -node.arg.value
    return None


def parse(text: str) -> Document:
    return Parser(text).document()


# -- pretty printer ----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(node, ctx: int = 0) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        s, prec = "-" + format_expr(node.arg, 3), 3
    elif isinstance(node, Pow):
        s, prec = f"{format_expr(node.base, 5)}^{node.exp}", 4
    else:
        prec = _PREC[node.op]
        sep = f" {node.op} " if prec == 1 else node.op
        s = format_expr(node.left, prec) + sep + format_expr(node.right, prec + 1)
    return f"({s})" if prec < ctx else s


def _format_matrix(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(format_expr(e) for e in r) + "]" for r in rows) + "]"


def pretty(doc: Document) -> str:
    lines = []
    if doc.field is not None:
        lines.append(f"field {doc.field};")
    if doc.gens:
        lines.append("gens " + ", ".join(doc.gens) + ";")
    for r in doc.relations:
        lines.append(f"rel {format_expr(r)};")
    for p in doc.params:
        if p.kind == "range":
            lines.append(f"param {p.name} = {p.values[0]}..{p.values[1]};")
        elif p.values:
            lines.append(f"param {p.name} = " + ", ".join(format_expr(v) for v in p.values) + ";")
        else:
            lines.append(f"param {p.name} = ;")
    for a in doc.auts:
        body = " ".join(f"{g} -> {format_expr(e)};" for g, e in a.images)
        lines.append(f"aut {a.name} {{ {body} }}" if body else f"aut {a.name} {{ }}")
    for s in doc.sigmas:
        parts = []
        for k, v in s.entries:
            parts.append(f"{k} = {format_expr(v) if k in ('p', 'q') else _format_matrix(v)};")
        lines.append(f"sigma {s.name} {{ " + " ".join(parts) + " }" if parts else f"sigma {s.name} {{ }}")
    for e in doc.exts:
        lines.append(f"ext {e.name} = {e.kind}(" + ", ".join(e.args) + ");")
    return "\n".join(lines) + "\n"


# -- evaluation --------------------------------------------------------------

Poly = Dict[Tuple[int, ...], object]


def _padd(a: Poly, b: Poly, sign=1) -> Poly:
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, 0) + sign * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            v = out.get(w, 0) + c1 * c2
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def evaluate(node, env: Dict[str, object], gens: Sequence[str] = (), field=QQ) -> Poly:
    """Noncommutative polynomial ``{word: coeff}`` after substituting parameters."""
    if isinstance(node, Num):
        return {(): field(node.value)} if node.value else {}
    if isinstance(node, Sym):
        if node.name in gens:
            return {(gens.index(node.name),): field.one}
        if node.name not in env:
            raise DocumentError(f"unknown name {node.name!r}", line=node.pos[0], col=node.pos[1])
        v = field(env[node.name])
        return {(): v} if v else {}
    if isinstance(node, Neg):
        return {w: -c for w, c in evaluate(node.arg, env, gens, field).items()}
    if isinstance(node, Pow):
        base = evaluate(node.base, env, gens, field)
        out: Poly = {(): field.one}
        for _ in range(node.exp):
            out = _pmul(out, base)
        return out
    a = evaluate(node.left, env, gens, field)
    b = evaluate(node.right, env, gens, field)
    if node.op == "+":
        return _padd(a, b)
    if node.op == "-":
        return _padd(a, b, -1)
    if node.op == "*":
        return _pmul(a, b)
    if any(w != () for w in b):
        raise DocumentError("division by a non-scalar", line=node.pos[0], col=node.pos[1])
    d = b.get((), 0)
    if not d:
        raise DocumentError("division by zero", line=node.pos[0], col=node.pos[1])
    return {w: c / d for w, c in a.items()}


def scalar_value(node, env: Dict[str, object], field=QQ):
    p = evaluate(node, env, (), field)
    if any(w != () for w in p):
        raise DocumentError("expected a scalar")
    return p.get((), field.zero)


def document_field(doc: Document, override: Optional[str] = None):
    name = override or doc.field or "Q"
    try:
        return field_from_name(name)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def presentation(doc: Document, env: Dict[str, object], field=QQ) -> QuadraticPresentation:
    if not doc.gens:
        raise DocumentError("document declares no generators")
    rels = []
    for r in doc.relations:
        poly = evaluate(r, env, doc.gens, field)
        rels.append({w: c for w, c in poly.items()})
    return presentation_from_polys(doc.gens, rels, field)


def aut_matrix(doc: Document, name: str, env, field=QQ) -> Matrix:
    decl = doc.aut(name)
    given = dict(decl.images)
    missing = [g for g in doc.gens if g not in given]
    if missing:
        raise DocumentError(f"automorphism {name!r} gives no image for {', '.join(missing)}")
    n = len(doc.gens)
    rows = []
    for g in doc.gens:
        poly = evaluate(given[g], env, doc.gens, field)
        row = [field.zero] * n
        for w, c in poly.items():
            row[w[0]] = c
        rows.append(row)
    return Matrix(rows, field)


def sigma_data(doc: Document, name: str, env, field=QQ):
    """``(p, q, [[S11, S12], [S21, S22]])``; missing blocks are zero, ``q`` defaults to 0."""
    decl = doc.sigma(name)
    n = len(doc.gens)
    p_node = decl.get("p")
    if p_node is None:
        raise DocumentError(f"sigma {name!r} has no p")
    p = scalar_value(p_node, env, field)
    q_node = decl.get("q")
    q = scalar_value(q_node, env, field) if q_node is not None else field.zero
    blocks = []
    for j in (1, 2):
        line = []
        for k in (1, 2):
            rows = decl.get(f"S{j}{k}")
            if rows is None:
                line.append(Matrix.zeros(n, n, field))
                continue
            if len(rows) != n or any(len(r) != n for r in rows):
                raise DocumentError(f"block S{j}{k} of sigma {name!r} must be {n}x{n}")
            line.append(Matrix([[scalar_value(e, env, field) for e in r] for r in rows], field))
        blocks.append(line)
    return p, q, blocks
