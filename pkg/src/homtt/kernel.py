"""Core syntax and rewriting for a small directed type theory.

Types   B(args) | core T | op T | hom T s t
Terms   x (variables) | c(args) | i t | iop t | one t
        | elimR[Th; D; d](f, th) | elimL[Th; D; d](f, th)

Variables are de Bruijn levels: ``Var(k)`` refers to entry ``k`` of the
telescope, counting from the start.  A binder body therefore numbers its bound
variables from the length of the context it sits in: the motive ``Th`` of an
eliminator appearing in a context of length n refers to its bound variable as
``Var(n)``.  Operations that move expressions between contexts take the
relevant context length explicitly.

Binder arities are fixed: ``Th`` binds 1 variable, ``D`` binds 4 (s, t, f, th),
``d`` binds 2 (s, th).  There are no other binding constructs.
"""

from __future__ import annotations

from dataclasses import dataclass


class InternalError(Exception):
    """An invariant of the engine itself was violated (not a user error)."""


class TypeExpr:
    __slots__ = ()


class TermExpr:
    __slots__ = ()


@dataclass(frozen=True)
class BaseT(TypeExpr):
    """An assumed base type, instantiated at the arguments of its telescope."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Core(TypeExpr):
    inner: TypeExpr


@dataclass(frozen=True)
class Op(TypeExpr):
    inner: TypeExpr


@dataclass(frozen=True)
class Hom(TypeExpr):
    """hom T s t: directed maps of T from s (an op point) to t."""

    carrier: TypeExpr
    source: TermExpr
    target: TermExpr


@dataclass(frozen=True)
class Var(TermExpr):
    level: int


@dataclass(frozen=True)
class Const(TermExpr):
    """An assumed or defined constant, instantiated at its telescope."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class IncCore(TermExpr):
    """i t: inclusion of a core point into the carrier."""

    arg: TermExpr


@dataclass(frozen=True)
class IncOp(TermExpr):
    """iop t: inclusion of a core point into the opposite."""

    arg: TermExpr


@dataclass(frozen=True)
class One(TermExpr):
    """one t: the unit directed map at a core point."""

    arg: TermExpr


@dataclass(frozen=True)
class ElimR(TermExpr):
    """Right eliminator, fully annotated.

    motive_theta binds (s);  motive_d binds (s, t, f, th);  base binds (s, th).
    """

    motive_theta: TypeExpr
    motive_d: TypeExpr
    base: TermExpr
    f: TermExpr
    theta: TermExpr


@dataclass(frozen=True)
class ElimL(TermExpr):
    """Left eliminator; same shape as ElimR with the left-variant typing."""

    motive_theta: TypeExpr
    motive_d: TypeExpr
    base: TermExpr
    f: TermExpr
    theta: TermExpr


THETA_BINDS = 1
D_BINDS = 4
BASE_BINDS = 2

# A telescope entry is (name hint, type); the type of entry k may mention
# Var(0) .. Var(k-1) only.
Telescope = tuple


@dataclass(frozen=True)
class IsType:
    ctx: Telescope
    ty: TypeExpr


@dataclass(frozen=True)
class HasType:
    ctx: Telescope
    term: TermExpr
    ty: TypeExpr


@dataclass(frozen=True)
class DefEqual:
    ctx: Telescope
    lhs: TermExpr
    rhs: TermExpr
    ty: TypeExpr


def shift(x, cutoff: int, amount: int):
    """Add `amount` to every variable level >= cutoff.

    Weakening a term from a context of length k into one of length n is
    shift(x, k, n - k): free variables stay put, binder levels move clear of
    the new entries.
    """
    if amount == 0:
        return x
    match x:
        case Var(k):
            return Var(k + amount) if k >= cutoff else x
        case Const(name, args):
            return Const(name, tuple(shift(a, cutoff, amount) for a in args))
        case IncCore(t):
            return IncCore(shift(t, cutoff, amount))
        case IncOp(t):
            return IncOp(shift(t, cutoff, amount))
        case One(t):
            return One(shift(t, cutoff, amount))
        case ElimR(th, dm, b, f, a):
            return ElimR(shift(th, cutoff, amount), shift(dm, cutoff, amount),
                         shift(b, cutoff, amount), shift(f, cutoff, amount),
                         shift(a, cutoff, amount))
        case ElimL(th, dm, b, f, a):
            return ElimL(shift(th, cutoff, amount), shift(dm, cutoff, amount),
                         shift(b, cutoff, amount), shift(f, cutoff, amount),
                         shift(a, cutoff, amount))
        case BaseT(name, args):
            return BaseT(name, tuple(shift(a, cutoff, amount) for a in args))
        case Core(t):
            return Core(shift(t, cutoff, amount))
        case Op(t):
            return Op(shift(t, cutoff, amount))
        case Hom(c, s, t):
            return Hom(shift(c, cutoff, amount), shift(s, cutoff, amount),
                       shift(t, cutoff, amount))
    raise InternalError(f"shift: unknown node {x!r}")


def substitute(x, depth: int, replacement, scope: int):
    """Replace Var(depth) by `replacement` and close the gap.

    `x` lives in a context of length `scope`; `replacement` in that context
    with entry `depth` removed (so its levels >= depth already refer to the
    shortened numbering).  Levels above `depth` in `x` are decremented,
    including binder levels.  When the replacement is inserted under binders
    of `x`, its own binder levels are shifted clear of them.
    """
    return _subst(x, depth, replacement, scope - 1, 0)


def _subst(x, depth, r, r_scope, binders):
    match x:
        case Var(k):
            if k == depth:
                return shift(r, r_scope, binders)
            return Var(k - 1) if k > depth else x
        case Const(name, args):
            return Const(name, tuple(_subst(a, depth, r, r_scope, binders) for a in args))
        case IncCore(t):
            return IncCore(_subst(t, depth, r, r_scope, binders))
        case IncOp(t):
            return IncOp(_subst(t, depth, r, r_scope, binders))
        case One(t):
            return One(_subst(t, depth, r, r_scope, binders))
        case ElimR(th, dm, b, f, a):
            return ElimR(_subst(th, depth, r, r_scope, binders + THETA_BINDS),
                         _subst(dm, depth, r, r_scope, binders + D_BINDS),
                         _subst(b, depth, r, r_scope, binders + BASE_BINDS),
                         _subst(f, depth, r, r_scope, binders),
                         _subst(a, depth, r, r_scope, binders))
        case ElimL(th, dm, b, f, a):
            return ElimL(_subst(th, depth, r, r_scope, binders + THETA_BINDS),
                         _subst(dm, depth, r, r_scope, binders + D_BINDS),
                         _subst(b, depth, r, r_scope, binders + BASE_BINDS),
                         _subst(f, depth, r, r_scope, binders),
                         _subst(a, depth, r, r_scope, binders))
        case BaseT(name, args):
            return BaseT(name, tuple(_subst(a, depth, r, r_scope, binders) for a in args))
        case Core(t):
            return Core(_subst(t, depth, r, r_scope, binders))
        case Op(t):
            return Op(_subst(t, depth, r, r_scope, binders))
        case Hom(c, s, t):
            return Hom(_subst(c, depth, r, r_scope, binders),
                       _subst(s, depth, r, r_scope, binders),
                       _subst(t, depth, r, r_scope, binders))
    raise InternalError(f"substitute: unknown node {x!r}")


def instantiate(body, base: int, values):
    """Substitute a whole binder region at once.

    `body` lives in a context of length base + len(values); every value in one
    of length `base`.  Returns the body over the base context.
    """
    out = body
    for j in reversed(range(len(values))):
        out = substitute(out, base + j, shift(values[j], base, j), base + j + 1)
    return out


def instantiate_closed(body, arity: int, args, scope: int):
    """Instantiate a signature-level body (closed over its own telescope of
    length `arity`) at argument terms living in a context of length `scope`.

    Levels < arity become the arguments; internal binder levels are
    renumbered past the ambient context.
    """
    return _inst_closed(body, arity, tuple(args), scope, 0)


def _inst_closed(x, arity, args, scope, binders):
    match x:
        case Var(k):
            if k < arity:
                return shift(args[k], scope, binders)
            return Var(k - arity + scope)
        case Const(name, sub):
            return Const(name, tuple(_inst_closed(a, arity, args, scope, binders) for a in sub))
        case IncCore(t):
            return IncCore(_inst_closed(t, arity, args, scope, binders))
        case IncOp(t):
            return IncOp(_inst_closed(t, arity, args, scope, binders))
        case One(t):
            return One(_inst_closed(t, arity, args, scope, binders))
        case ElimR(th, dm, b, f, a):
            return ElimR(_inst_closed(th, arity, args, scope, binders + THETA_BINDS),
                         _inst_closed(dm, arity, args, scope, binders + D_BINDS),
                         _inst_closed(b, arity, args, scope, binders + BASE_BINDS),
                         _inst_closed(f, arity, args, scope, binders),
                         _inst_closed(a, arity, args, scope, binders))
        case ElimL(th, dm, b, f, a):
            return ElimL(_inst_closed(th, arity, args, scope, binders + THETA_BINDS),
                         _inst_closed(dm, arity, args, scope, binders + D_BINDS),
                         _inst_closed(b, arity, args, scope, binders + BASE_BINDS),
                         _inst_closed(f, arity, args, scope, binders),
                         _inst_closed(a, arity, args, scope, binders))
        case BaseT(name, sub):
            return BaseT(name, tuple(_inst_closed(a, arity, args, scope, binders) for a in sub))
        case Core(t):
            return Core(_inst_closed(t, arity, args, scope, binders))
        case Op(t):
            return Op(_inst_closed(t, arity, args, scope, binders))
        case Hom(c, s, t):
            return Hom(_inst_closed(c, arity, args, scope, binders),
                       _inst_closed(s, arity, args, scope, binders),
                       _inst_closed(t, arity, args, scope, binders))
    raise InternalError(f"instantiate_closed: unknown node {x!r}")


def eliminator_count(x) -> int:
    """Number of ElimR/ElimL nodes anywhere in x, annotations included.

    This is the termination measure for `reduce`: every contraction must
    strictly decrease it.
    """
    match x:
        case Var():
            return 0
        case Const(_, args) | BaseT(_, args):
            return sum(eliminator_count(a) for a in args)
        case IncCore(t) | IncOp(t) | One(t) | Core(t) | Op(t):
            return eliminator_count(t)
        case Hom(c, s, t):
            return eliminator_count(c) + eliminator_count(s) + eliminator_count(t)
        case ElimR(th, dm, b, f, a) | ElimL(th, dm, b, f, a):
            return 1 + sum(eliminator_count(y) for y in (th, dm, b, f, a))
    raise InternalError(f"eliminator_count: unknown node {x!r}")


def reduce(x, depth: int = 0):
    """Rewrite to normal form.

    The rewrite system has two rules, closed under full congruence (motive
    annotations included):

        elimR[Th; D; d](one s, th)  ->  d[s, th]
        elimL[Th; D; d](one s, th)  ->  d[s, th]

    `depth` is the length of the ambient context; binder bodies are reduced
    at the appropriately extended depth.
    """
    match x:
        case Var():
            return x
        case Const(name, args):
            return Const(name, tuple(reduce(a, depth) for a in args))
        case IncCore(t):
            return IncCore(reduce(t, depth))
        case IncOp(t):
            return IncOp(reduce(t, depth))
        case One(t):
            return One(reduce(t, depth))
        case BaseT(name, args):
            return BaseT(name, tuple(reduce(a, depth) for a in args))
        case Core(t):
            inner = reduce(t, depth)
            # core (op T) and core T are definitionally the same type; the
            # normal form drops the op layers.
            while isinstance(inner, Op):
                inner = inner.inner
            return Core(inner)
        case Op(t):
            return Op(reduce(t, depth))
        case Hom(c, s, t):
            return Hom(reduce(c, depth), reduce(s, depth), reduce(t, depth))
        case ElimR(th, dm, b, f, a) | ElimL(th, dm, b, f, a):
            cls = type(x)
            th = reduce(th, depth + THETA_BINDS)
            dm = reduce(dm, depth + D_BINDS)
            b = reduce(b, depth + BASE_BINDS)
            f = reduce(f, depth)
            a = reduce(a, depth)
            out = cls(th, dm, b, f, a)
            if isinstance(f, One):
                before = eliminator_count(out)
                contracted = instantiate(b, depth, (f.arg, a))
                after = eliminator_count(contracted)
                if after >= before:
                    raise InternalError(
                        "reduce: eliminator count did not decrease "
                        f"({before} -> {after})")
                # the contractum may expose new redexes (e.g. a unit that was
                # hidden in the th argument); renormalize.
                return reduce(contracted, depth)
            return out
    raise InternalError(f"reduce: unknown node {x!r}")


def _collapse(x):
    """Rewrite core (op T) to core T everywhere, without reducing terms."""
    match x:
        case Var():
            return x
        case Const(name, args):
            return Const(name, tuple(_collapse(a) for a in args))
        case IncCore(t):
            return IncCore(_collapse(t))
        case IncOp(t):
            return IncOp(_collapse(t))
        case One(t):
            return One(_collapse(t))
        case ElimR(th, dm, b, f, a):
            return ElimR(*(_collapse(y) for y in (th, dm, b, f, a)))
        case ElimL(th, dm, b, f, a):
            return ElimL(*(_collapse(y) for y in (th, dm, b, f, a)))
        case BaseT(name, args):
            return BaseT(name, tuple(_collapse(a) for a in args))
        case Core(t):
            inner = _collapse(t)
            while isinstance(inner, Op):
                inner = inner.inner
            return Core(inner)
        case Op(t):
            return Op(_collapse(t))
        case Hom(c, s, t):
            return Hom(_collapse(c), _collapse(s), _collapse(t))
    raise InternalError(f"collapse: unknown node {x!r}")


def alpha_equal(a, b) -> bool:
    """Structural equality of expressions.

    De Bruijn levels make this plain equality, except that core (op T) and
    core T are identified.
    """
    return _collapse(a) == _collapse(b)


def well_scoped(x, n: int) -> bool:
    """Check every variable level against the context length n (binder bodies
    against the extended lengths)."""
    match x:
        case Var(k):
            return 0 <= k < n
        case Const(_, args) | BaseT(_, args):
            return all(well_scoped(a, n) for a in args)
        case IncCore(t) | IncOp(t) | One(t) | Core(t) | Op(t):
            return well_scoped(t, n)
        case Hom(c, s, t):
            return well_scoped(c, n) and well_scoped(s, n) and well_scoped(t, n)
        case ElimR(th, dm, b, f, a) | ElimL(th, dm, b, f, a):
            return (well_scoped(th, n + THETA_BINDS)
                    and well_scoped(dm, n + D_BINDS)
                    and well_scoped(b, n + BASE_BINDS)
                    and well_scoped(f, n) and well_scoped(a, n))
    raise InternalError(f"well_scoped: unknown node {x!r}")
