"""Surface syntax: .dtt declaration files and .fincat category files.

The .dtt language uses named variables; parsing resolves them to de Bruijn
levels (position in the telescope).  Keywords:

    assume NAME (x : T, ...) : Type          -- base type
    assume NAME (x : T, ...) : T             -- term constant
    define NAME (x : T, ...) : T := term
    assert type (x : T, ...) T               -- well-formedness assertion
    assert (x : T, ...) t == u : T           -- definitional equality assertion

    core T | op T | hom T s t                -- types
    i t | iop t | one t                      -- terms
    elimR[x. Th; x y f w. D; x w. d](f, w)   -- eliminators (elimL likewise)

`#` starts a line comment.  Identifiers may contain primes (t').

.fincat files are line oriented and hold named blocks: `category`, `functor`,
`nat`, `fiber`, `section`, and `square`; see the README for the full format.
Category laws are not checked here (fincat.validate does that); this module
checks shape and referential integrity inside each block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import kernel as k


class ParseError(Exception):
    def __init__(self, msg, path="<input>", line=0, col=0):
        super().__init__(f"{path}:{line}:{col}: {msg}")
        self.msg = msg
        self.path = path
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# declarations


@dataclass(frozen=True)
class AssumeType:
    name: str
    telescope: tuple
    line: int = 0


@dataclass(frozen=True)
class AssumeTerm:
    name: str
    telescope: tuple
    ty: k.TypeExpr
    line: int = 0


@dataclass(frozen=True)
class Define:
    name: str
    telescope: tuple
    ty: k.TypeExpr
    body: k.TermExpr
    line: int = 0


@dataclass(frozen=True)
class AssertType:
    telescope: tuple
    ty: k.TypeExpr
    line: int = 0


@dataclass(frozen=True)
class AssertEqual:
    telescope: tuple
    lhs: k.TermExpr
    rhs: k.TermExpr
    ty: k.TypeExpr
    line: int = 0


@dataclass(frozen=True)
class SourceFile:
    decls: tuple
    path: str = "<input>"


KEYWORDS = {"assume", "define", "assert", "type", "Type", "core", "op", "hom",
            "i", "iop", "one", "elimR", "elimL"}

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*|:=|==|[()\[\],;.:]|\S")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _lex_dtt(text, path):
    toks = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in _TOKEN.finditer(line):
            t = m.group()
            if not (_NAME.match(t) or t in {":=", "==", "(", ")", "[", "]",
                                            ",", ";", ".", ":"}):
                raise ParseError(f"stray character {t!r}", path, ln, m.start() + 1)
            toks.append(_Tok(t, ln, m.start() + 1))
    return toks


class _DttParser:
    def __init__(self, text, path):
        self.toks = _lex_dtt(text, path)
        self.pos = 0
        self.path = path
        # name -> ("base" | "term", telescope length)
        self.declared = {}

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.toks[i].text if i < len(self.toks) else None

    def next(self):
        if self.pos >= len(self.toks):
            last = self.toks[-1] if self.toks else _Tok("", 1, 1)
            raise ParseError("unexpected end of input", self.path, last.line, last.col)
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}",
                             self.path, tok.line, tok.col)
        return tok

    def name(self, role="name"):
        tok = self.next()
        if not _NAME.match(tok.text) or tok.text in KEYWORDS:
            raise ParseError(f"expected {role}, found {tok.text!r}",
                             self.path, tok.line, tok.col)
        return tok

    def fail(self, msg, tok=None):
        tok = tok or (self.toks[self.pos] if self.pos < len(self.toks)
                      else self.toks[-1] if self.toks else _Tok("", 1, 1))
        raise ParseError(msg, self.path, tok.line, tok.col)

    # -- declarations ------------------------------------------------------

    def parse_file(self):
        decls = []
        counter = 0
        while self.pos < len(self.toks):
            tok = self.next()
            if tok.text == "assume":
                decls.append(self._assume(tok))
            elif tok.text == "define":
                decls.append(self._define(tok))
            elif tok.text == "assert":
                counter += 1
                decls.append(self._assert(tok))
            else:
                self.fail(f"expected a declaration, found {tok.text!r}", tok)
        return SourceFile(tuple(decls), self.path)

    def _declare(self, tok, kind, arity):
        if tok.text in self.declared:
            raise ParseError(f"duplicate name {tok.text!r}", self.path,
                             tok.line, tok.col)
        self.declared[tok.text] = (kind, arity)

    def _assume(self, kw):
        tok = self.name("declaration name")
        tele, scope = self._telescope()
        self.expect(":")
        if self.peek() == "Type":
            self.next()
            self._declare(tok, "base", len(tele))
            return AssumeType(tok.text, tele, kw.line)
        ty = self._type(scope)
        self._declare(tok, "term", len(tele))
        return AssumeTerm(tok.text, tele, ty, kw.line)

    def _define(self, kw):
        tok = self.name("declaration name")
        tele, scope = self._telescope()
        self.expect(":")
        ty = self._type(scope)
        self.expect(":=")
        body = self._term(scope)
        self._declare(tok, "term", len(tele))
        return Define(tok.text, tele, ty, body, kw.line)

    def _assert(self, kw):
        if self.peek() == "type":
            self.next()
            tele, scope = self._telescope()
            ty = self._type(scope)
            return AssertType(tele, ty, kw.line)
        tele, scope = self._telescope()
        lhs = self._term(scope)
        self.expect("==")
        rhs = self._term(scope)
        self.expect(":")
        ty = self._type(scope)
        return AssertEqual(tele, lhs, rhs, ty, kw.line)

    def _telescope(self):
        scope = []
        entries = []
        if self.peek() == "(" and _NAME.match(self.peek(1) or "") \
                and self.peek(1) not in KEYWORDS and self.peek(2) == ":":
            self.next()
            while True:
                tok = self.name("telescope variable")
                if tok.text in scope:
                    raise ParseError(f"duplicate name {tok.text!r}", self.path,
                                     tok.line, tok.col)
                self.expect(":")
                entries.append((tok.text, self._type(scope)))
                scope.append(tok.text)
                if self.peek() == ",":
                    self.next()
                    continue
                self.expect(")")
                break
        return tuple(entries), scope

    # -- types -------------------------------------------------------------

    def _type(self, scope):
        tok = self.toks[self.pos] if self.pos < len(self.toks) else None
        match self.peek():
            case "core":
                self.next()
                return k.Core(self._type(scope))
            case "op":
                self.next()
                return k.Op(self._type(scope))
            case "hom":
                self.next()
                carrier = self._type_atom(scope)
                src = self._term_atom(scope)
                tgt = self._term_atom(scope)
                return k.Hom(carrier, src, tgt)
            case _:
                return self._type_atom(scope)

    def _type_atom(self, scope):
        if self.peek() == "(":
            self.next()
            ty = self._type(scope)
            self.expect(")")
            return ty
        tok = self.name("type")
        kind = self.declared.get(tok.text)
        if kind is None:
            if tok.text in scope:
                raise ParseError(f"{tok.text!r} is a variable, not a type",
                                 self.path, tok.line, tok.col)
            raise ParseError(f"unbound name {tok.text!r}", self.path, tok.line, tok.col)
        if kind[0] != "base":
            raise ParseError(f"{tok.text!r} is a term, not a type", self.path,
                             tok.line, tok.col)
        return k.BaseT(tok.text, self._args(scope, tok, kind[1]))

    def _args(self, scope, tok, arity):
        # names of arity 0 never take parens (a following "(" belongs to the
        # enclosing form, e.g. the source term in `hom B (iop s) t`)
        args = []
        if arity > 0 and self.peek() == "(":
            self.next()
            while True:
                args.append(self._term(scope))
                if self.peek() == ",":
                    self.next()
                    continue
                self.expect(")")
                break
        if len(args) != arity:
            raise ParseError(
                f"{tok.text!r} expects {arity} argument(s), got {len(args)}",
                self.path, tok.line, tok.col)
        return tuple(args)

    # -- terms -------------------------------------------------------------

    def _term(self, scope):
        match self.peek():
            case "i":
                self.next()
                return k.IncCore(self._term_atom(scope))
            case "iop":
                self.next()
                return k.IncOp(self._term_atom(scope))
            case "one":
                self.next()
                return k.One(self._term_atom(scope))
            case "elimR" | "elimL":
                return self._elim(scope)
            case _:
                return self._term_atom(scope)

    def _elim(self, scope):
        kw = self.next()
        cls = k.ElimR if kw.text == "elimR" else k.ElimL
        self.expect("[")
        th = self._motive(scope, 1, self._type)
        self.expect(";")
        dm = self._motive(scope, 4, self._type)
        self.expect(";")
        body = self._motive(scope, 2, self._term)
        self.expect("]")
        self.expect("(")
        f = self._term(scope)
        self.expect(",")
        theta = self._term(scope)
        self.expect(")")
        return cls(th, dm, body, f, theta)

    def _motive(self, scope, arity, sub):
        binders = []
        for _ in range(arity):
            tok = self.name("binder")
            if tok.text in binders:
                raise ParseError(f"duplicate name {tok.text!r}", self.path,
                                 tok.line, tok.col)
            binders.append(tok.text)
        self.expect(".")
        return sub(scope + binders)

    def _term_atom(self, scope):
        if self.peek() == "(":
            self.next()
            tm = self._term(scope)
            self.expect(")")
            return tm
        tok = self.name("term")
        if tok.text in scope:
            # innermost binding wins
            level = len(scope) - 1 - scope[::-1].index(tok.text)
            return k.Var(level)
        kind = self.declared.get(tok.text)
        if kind is None:
            raise ParseError(f"unbound name {tok.text!r}", self.path, tok.line, tok.col)
        if kind[0] != "term":
            raise ParseError(f"{tok.text!r} is a type, not a term", self.path,
                             tok.line, tok.col)
        return k.Const(tok.text, self._args(scope, tok, kind[1]))


def parse_dtt(text, path="<input>"):
    return _DttParser(text, path).parse_file()


# ---------------------------------------------------------------------------
# printing (the inverse: levels back to names)


def _used_names(x, acc):
    match x:
        case k.Var():
            pass
        case k.Const(name, args) | k.BaseT(name, args):
            acc.add(name)
            for a in args:
                _used_names(a, acc)
        case k.IncCore(t) | k.IncOp(t) | k.One(t) | k.Core(t) | k.Op(t):
            _used_names(t, acc)
        case k.Hom(c, s, t):
            _used_names(c, acc)
            _used_names(s, acc)
            _used_names(t, acc)
        case k.ElimR(th, dm, b, f, a) | k.ElimL(th, dm, b, f, a):
            for y in (th, dm, b, f, a):
                _used_names(y, acc)
    return acc


def _fresh(base, taken):
    if base not in taken and base not in KEYWORDS:
        taken.add(base)
        return base
    n = 0
    while f"{base}{n}" in taken or f"{base}{n}" in KEYWORDS:
        n += 1
    taken.add(f"{base}{n}")
    return f"{base}{n}"


def print_term(tm, env=(), taken=None):
    if taken is None:
        taken = _used_names(tm, set()) | set(env)
    match tm:
        case k.Var(i):
            return env[i] if i < len(env) else f"?{i}"
        case k.Const(name, args):
            return name + _print_args(args, env, taken)
        case k.IncCore(t):
            return "i " + _term_atom(t, env, taken)
        case k.IncOp(t):
            return "iop " + _term_atom(t, env, taken)
        case k.One(t):
            return "one " + _term_atom(t, env, taken)
        case k.ElimR(th, dm, b, f, a) | k.ElimL(th, dm, b, f, a):
            kw = "elimR" if isinstance(tm, k.ElimR) else "elimL"
            v1 = [_fresh("x", taken)]
            v4 = [_fresh(c, taken) for c in ("x", "y", "h", "w")]
            v2 = [_fresh(c, taken) for c in ("x", "w")]
            env_l = list(env)
            parts = [
                " ".join(v1) + ". " + print_type(th, env_l + v1, taken),
                " ".join(v4) + ". " + print_type(dm, env_l + v4, taken),
                " ".join(v2) + ". " + print_term(b, env_l + v2, taken),
            ]
            return (f"{kw}[{'; '.join(parts)}]"
                    f"({print_term(f, env, taken)}, {print_term(a, env, taken)})")
    raise k.InternalError(f"print_term: {tm!r}")


def _print_args(args, env, taken):
    if not args:
        return ""
    return "(" + ", ".join(print_term(a, env, taken) for a in args) + ")"


def _term_atom(tm, env, taken):
    out = print_term(tm, env, taken)
    if isinstance(tm, (k.Var, k.Const)):
        return out
    return f"({out})"


def print_type(ty, env=(), taken=None):
    if taken is None:
        taken = _used_names(ty, set()) | set(env)
    match ty:
        case k.BaseT(name, args):
            return name + _print_args(args, env, taken)
        case k.Core(t):
            return "core " + _type_atom(t, env, taken)
        case k.Op(t):
            return "op " + _type_atom(t, env, taken)
        case k.Hom(c, s, t):
            return (f"hom {_type_atom(c, env, taken)} "
                    f"{_term_atom(s, env, taken)} {_term_atom(t, env, taken)}")
    raise k.InternalError(f"print_type: {ty!r}")


def _type_atom(ty, env, taken):
    out = print_type(ty, env, taken)
    if isinstance(ty, k.BaseT):
        return out
    return f"({out})"


def print_telescope(tele):
    if not tele:
        return ""
    env = []
    parts = []
    for name, ty in tele:
        parts.append(f"{name} : {print_type(ty, env)}")
        env.append(name)
    return "(" + ", ".join(parts) + ")"


def print_decl(decl):
    tele = print_telescope(decl.telescope) if decl.telescope else ""
    tele = f" {tele}" if tele else ""
    env = [nm for nm, _ in decl.telescope]
    match decl:
        case AssumeType(name, _):
            return f"assume {name}{tele} : Type"
        case AssumeTerm(name, _, ty):
            return f"assume {name}{tele} : {print_type(ty, env)}"
        case Define(name, _, ty, body):
            return (f"define {name}{tele} : {print_type(ty, env)}"
                    f" := {print_term(body, env)}")
        case AssertType(_, ty):
            return f"assert type{tele} {print_type(ty, env)}"
        case AssertEqual(_, lhs, rhs, ty):
            return (f"assert{tele} {print_term(lhs, env)} == "
                    f"{print_term(rhs, env)} : {print_type(ty, env)}")
    raise k.InternalError(f"print_decl: {decl!r}")


def print_source(source):
    return "\n".join(print_decl(d) for d in source.decls) + "\n"


# ---------------------------------------------------------------------------
# .fincat files


@dataclass
class CatBlock:
    name: str
    objects: list = field(default_factory=list)
    arrows: list = field(default_factory=list)       # (name, dom, cod)
    composites: list = field(default_factory=list)   # (g, f, h) meaning g.f = h
    line: int = 0


@dataclass
class FunctorBlock:
    name: str
    source: str
    target: str
    ob: list = field(default_factory=list)
    arr: list = field(default_factory=list)
    line: int = 0


@dataclass
class NatBlock:
    name: str
    source: str
    target: str
    components: list = field(default_factory=list)
    line: int = 0


@dataclass
class FiberBlock:
    name: str
    over: str | None = None
    constant: str | None = None
    fibers: list = field(default_factory=list)       # (addr, category name)
    transitions: list = field(default_factory=list)  # (addr, functor name)
    line: int = 0


@dataclass
class SectionBlock:
    name: str
    fiber: str = ""
    components: list = field(default_factory=list)   # (addr, value name)
    line: int = 0


@dataclass
class SquareBlock:
    name: str
    left: str | None = None
    right: str | None = None
    top: str | None = None
    bottom: str | None = None
    line: int = 0


@dataclass
class CatFile:
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    nats: dict = field(default_factory=dict)
    fibers: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)
    squares: dict = field(default_factory=dict)
    path: str = "<input>"

    def merge(self, other):
        for attr in ("categories", "functors", "nats", "fibers", "sections",
                     "squares"):
            mine, theirs = getattr(self, attr), getattr(other, attr)
            for name, block in theirs.items():
                if name in mine:
                    raise ParseError(f"duplicate name {name!r}", other.path,
                                     block.line, 1)
                mine[name] = block
        return self


_FC_TOKEN = re.compile(r"[A-Za-z0-9_']+|->|=>|[\[\]():=*]|\S")


def _fc_lex(line, path, ln):
    toks = []
    for m in _FC_TOKEN.finditer(line.split("#", 1)[0]):
        t = m.group()
        if t not in {"->", "=>", "[", "]", "(", ")", ":", "=", "*"} \
                and not re.match(r"[A-Za-z0-9_']+\Z", t):
            raise ParseError(f"stray character {t!r}", path, ln, m.start() + 1)
        toks.append(t)
    return toks


class _FincatParser:
    def __init__(self, text, path):
        self.lines = text.splitlines()
        self.path = path
        self.out = CatFile(path=path)
        self.names = set()

    def err(self, msg, ln):
        raise ParseError(msg, self.path, ln, 1)

    def register(self, name, ln):
        if name in self.names:
            self.err(f"duplicate name {name!r}", ln)
        self.names.add(name)

    def parse(self):
        i = 0
        while i < len(self.lines):
            ln = i + 1
            toks = _fc_lex(self.lines[i], self.path, ln)
            if not toks:
                i += 1
                continue
            head = toks[0]
            body, i = self._block_lines(i + 1)
            match head:
                case "category":
                    self._category(toks, body, ln)
                case "functor":
                    self._functor(toks, body, ln)
                case "nat":
                    self._nat(toks, body, ln)
                case "fiber":
                    self._fiber(toks, body, ln)
                case "section":
                    self._section(toks, body, ln)
                case "square":
                    self._square(toks, body, ln)
                case _:
                    self.err(f"expected a block header, found {head!r}", ln)
        return self.out

    def _block_lines(self, i):
        body = []
        while True:
            if i >= len(self.lines):
                self.err("missing 'end'", i)
            ln = i + 1
            toks = _fc_lex(self.lines[i], self.path, ln)
            i += 1
            if toks == ["end"]:
                return body, i
            if toks:
                body.append((toks, ln))

    def _category(self, header, body, ln):
        if len(header) != 2:
            self.err("usage: category NAME", ln)
        block = CatBlock(header[1], line=ln)
        self.register(block.name, ln)
        seen_objects = False
        arrow_names = set()
        for toks, bln in body:
            match toks:
                case ["objects", *objs]:
                    if seen_objects:
                        self.err("repeated objects line", bln)
                    seen_objects = True
                    if len(set(objs)) != len(objs):
                        self.err("duplicate object", bln)
                    block.objects = objs
                case ["arrow", name, ":", dom, "->", cod]:
                    if name in arrow_names or name in (f"id_{o}" for o in block.objects):
                        self.err(f"duplicate arrow {name!r}", bln)
                    if dom not in block.objects:
                        self.err(f"unknown object {dom!r}", bln)
                    if cod not in block.objects:
                        self.err(f"unknown object {cod!r}", bln)
                    arrow_names.add(name)
                    block.arrows.append((name, dom, cod))
                case ["compose", g, f, "=", h]:
                    for a in (g, f, h):
                        if a not in arrow_names and not self._is_identity(a, block):
                            self.err(f"unknown arrow {a!r}", bln)
                    block.composites.append((g, f, h))
                case _:
                    self.err(f"bad category line: {' '.join(toks)}", bln)
        if not seen_objects:
            self.err("category block needs an objects line", ln)
        self.out.categories[block.name] = block

    @staticmethod
    def _is_identity(name, block):
        return name.startswith("id_") and name[3:] in block.objects

    def _functor(self, header, body, ln):
        match header:
            case ["functor", name, ":", src, "->", tgt]:
                block = FunctorBlock(name, src, tgt, line=ln)
            case _:
                self.err("usage: functor NAME : C -> D", ln)
        self.register(block.name, ln)
        for toks, bln in body:
            match toks:
                case ["ob", x, "->", y]:
                    block.ob.append((x, y))
                case ["arr", f, "->", g]:
                    block.arr.append((f, g))
                case _:
                    self.err(f"bad functor line: {' '.join(toks)}", bln)
        self.out.functors[block.name] = block

    def _nat(self, header, body, ln):
        match header:
            case ["nat", name, ":", src, "=>", tgt]:
                block = NatBlock(name, src, tgt, line=ln)
            case _:
                self.err("usage: nat NAME : F => G", ln)
        self.register(block.name, ln)
        for toks, bln in body:
            match toks:
                case ["at", x, ":", m]:
                    block.components.append((x, m))
                case _:
                    self.err(f"bad nat line: {' '.join(toks)}", bln)
        self.out.nats[block.name] = block

    def _addr(self, toks, bln):
        """An address: NAME, [a b c], or [a b] (f g) for morphisms."""
        if not toks:
            self.err("missing address", bln)
        if toks[0] != "[":
            return toks[0], toks[1:]
        if "]" not in toks:
            self.err("unterminated '['", bln)
        stop = toks.index("]")
        dom = tuple(toks[1:stop])
        rest = toks[stop + 1:]
        if rest and rest[0] == "(":
            if ")" not in rest:
                self.err("unterminated '('", bln)
            stop2 = rest.index(")")
            return (dom, tuple(rest[1:stop2])), rest[stop2 + 1:]
        return dom, rest

    def _fiber(self, header, body, ln):
        match header:
            case ["fiber", name]:
                block = FiberBlock(name, line=ln)
            case ["fiber", name, "over", base]:
                block = FiberBlock(name, over=base, line=ln)
            case _:
                self.err("usage: fiber NAME [over C]", ln)
        self.register(block.name, ln)
        for toks, bln in body:
            if toks[0] == "constant" and len(toks) == 2:
                block.constant = toks[1]
                continue
            if toks[0] == "at":
                addr, rest = self._addr(toks[1:], bln)
                if len(rest) != 2 or rest[0] != ":":
                    self.err(f"bad fiber line: {' '.join(toks)}", bln)
                block.fibers.append((addr, rest[1]))
                continue
            if toks[0] == "along":
                addr, rest = self._addr(toks[1:], bln)
                if len(rest) != 2 or rest[0] != ":":
                    self.err(f"bad fiber line: {' '.join(toks)}", bln)
                block.transitions.append((addr, rest[1]))
                continue
            self.err(f"bad fiber line: {' '.join(toks)}", bln)
        self.out.fibers[block.name] = block

    def _section(self, header, body, ln):
        match header:
            case ["section", name, "in", fib]:
                block = SectionBlock(name, fib, line=ln)
            case _:
                self.err("usage: section NAME in FIBER", ln)
        self.register(block.name, ln)
        for toks, bln in body:
            if toks and toks[0] == "at":
                addr, rest = self._addr(toks[1:], bln)
                if len(rest) != 2 or rest[0] != ":":
                    self.err(f"bad section line: {' '.join(toks)}", bln)
                block.components.append((addr, rest[1]))
                continue
            self.err(f"bad section line: {' '.join(toks)}", bln)
        self.out.sections[block.name] = block

    def _square(self, header, body, ln):
        if len(header) != 2:
            self.err("usage: square NAME", ln)
        block = SquareBlock(header[1], line=ln)
        self.register(block.name, ln)
        for toks, bln in body:
            match toks:
                case [("left" | "right" | "top" | "bottom") as side, name]:
                    if getattr(block, side) is not None:
                        self.err(f"repeated {side}", bln)
                    setattr(block, side, name)
                case _:
                    self.err(f"bad square line: {' '.join(toks)}", bln)
        for side in ("left", "right", "top", "bottom"):
            if getattr(block, side) is None:
                self.err(f"square {block.name!r} is missing {side}", ln)
        self.out.squares[block.name] = block


def parse_fincat(text, path="<input>"):
    return _FincatParser(text, path).parse()
