"""Kernel syntax operations against frozen examples and the named-world oracle."""

from __future__ import annotations

import random

import pytest

from homtt import kernel as k
from homtt.kernel import (BaseT, Const, Core, ElimL, ElimR, Hom, IncCore,
                          IncOp, One, Op, Var)

import oracles

B = BaseT("B")


def names(n):
    return [f"x{i}" for i in range(n)]


# ---------------------------------------------------------------------------
# random well-scoped expressions (depth-bounded)


def rand_term(rng, n, depth):
    leaves = ["var", "const"] if n else ["const"]
    if depth <= 0:
        choice = rng.choice(leaves)
    else:
        choice = rng.choice(leaves + ["i", "iop", "one", "elimr", "eliml"])
    if choice == "var":
        return Var(rng.randrange(n))
    if choice == "const":
        return Const(rng.choice("abc"), ())
    if choice in ("i", "iop", "one"):
        cls = {"i": IncCore, "iop": IncOp, "one": One}[choice]
        return cls(rand_term(rng, n, depth - 1))
    cls = ElimR if choice == "elimr" else ElimL
    # the eliminated argument and the theta argument stay binder-free so the
    # termination measure is respected even for ill-typed random terms
    return cls(rand_type(rng, n + 1, depth - 1),
               rand_type(rng, n + 4, depth - 1),
               rand_term(rng, n + 2, depth - 1),
               rand_simple(rng, n),
               rand_simple(rng, n))


def rand_simple(rng, n):
    base = Var(rng.randrange(n)) if n and rng.random() < 0.7 else Const(rng.choice("abc"), ())
    match rng.randrange(4):
        case 0:
            return One(base)
        case 1:
            return IncCore(base)
        case 2:
            return IncOp(base)
        case _:
            return base


def rand_type(rng, n, depth):
    if depth <= 0:
        return BaseT(rng.choice("BC"), ())
    match rng.randrange(5):
        case 0:
            return BaseT(rng.choice("BC"), (rand_term(rng, n, depth - 1),))
        case 1:
            return Core(rand_type(rng, n, depth - 1))
        case 2:
            return Op(rand_type(rng, n, depth - 1))
        case 3:
            return Hom(rand_type(rng, n, depth - 1), rand_term(rng, n, depth - 1),
                       rand_term(rng, n, depth - 1))
        case _:
            return BaseT(rng.choice("BC"), ())


# ---------------------------------------------------------------------------
# substitute


def test_substitute_hit():
    assert k.substitute(Var(0), 0, One(Const("a")), 1) == One(Const("a"))


def test_substitute_shifts_higher_levels():
    assert k.substitute(Var(1), 0, Const("c"), 2) == Var(0)


def test_substitute_inside_hom():
    got = k.substitute(Hom(B, Var(0), Var(1)), 0, Const("c"), 2)
    assert got == Hom(B, Const("c"), Var(0))


def test_substitute_matches_named_oracle():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(1, 5)
        x = rand_term(rng, n, rng.randrange(7))
        d = rng.randrange(n)
        r = rand_term(rng, n - 1, rng.randrange(3))
        got = k.substitute(x, d, r, n)
        env = names(n)
        env_minus = env[:d] + env[d + 1:]
        want = oracles.subst_named(
            oracles.to_named(x, env, oracles.fresh_namer("s")),
            env[d],
            oracles.to_named(r, env_minus, oracles.fresh_namer("t")))
        assert oracles.named_equal(
            oracles.to_named(got, env_minus, oracles.fresh_namer("u")), want)
        assert k.well_scoped(got, n - 1)


def test_shift_weakens_into_longer_context():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randrange(0, 4)
        x = rand_term(rng, n, rng.randrange(6))
        extra = rng.randrange(1, 3)
        widened = k.shift(x, n, extra)
        assert k.well_scoped(widened, n + extra)
        # the named reading is unchanged: new entries are simply unused
        env = names(n)
        assert oracles.named_equal(
            oracles.to_named(widened, env + [f"z{i}" for i in range(extra)],
                             oracles.fresh_namer("v")),
            oracles.to_named(x, env, oracles.fresh_namer("w")))


# ---------------------------------------------------------------------------
# reduce


def contraction_example():
    th = BaseT("S", (Var(0),))
    dm = BaseT("S", (Var(1),))
    d = Const("p", (Var(0), Var(1)))
    return th, dm, d


def test_reduce_contracts_right_unit():
    th, dm, d = contraction_example()
    tm = ElimR(th, dm, d, One(Const("a")), Const("w"))
    assert k.reduce(tm) == Const("p", (Const("a"), Const("w")))


def test_reduce_contracts_left_unit():
    th, dm, d = contraction_example()
    tm = ElimL(th, dm, d, One(Const("a")), Const("w"))
    assert k.reduce(tm) == Const("p", (Const("a"), Const("w")))


def test_reduce_stuck_variable():
    assert k.reduce(Var(3), depth=4) == Var(3)


def test_reduce_nested_eliminators():
    # the inner eliminator reduces to a unit, which then fires the outer one
    th, dm, d = contraction_example()
    inner = ElimL(th, dm, One(Var(0)), One(Const("a")), Const("w"))
    outer = ElimR(th, dm, d, inner, Const("u"))
    got = k.reduce(outer)
    # frozen from the independent rewriter: inner -> one a, outer -> p(a, u)
    assert got == Const("p", (Const("a"), Const("u")))


def test_reduce_agrees_with_named_rewriter():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(0, 4)
        x = rand_term(rng, n, rng.randrange(7))
        got = k.reduce(x, depth=n)
        want = oracles.named_normalize(
            oracles.to_named(x, names(n), oracles.fresh_namer("n")))
        assert oracles.named_equal(
            oracles.to_named(got, names(n), oracles.fresh_namer("m")), want)


def test_reduce_idempotent():
    rng = random.Random(13)
    for _ in range(200):
        n = rng.randrange(0, 4)
        x = k.reduce(rand_term(rng, n, rng.randrange(7)), depth=n)
        assert k.reduce(x, depth=n) == x
        assert k.well_scoped(x, n)


def test_reduce_commutes_with_substitute():
    rng = random.Random(17)
    for _ in range(200):
        n = rng.randrange(1, 4)
        x = rand_term(rng, n, rng.randrange(6))
        d = rng.randrange(n)
        r = rand_simple(rng, n - 1)
        lhs = k.reduce(k.substitute(x, d, r, n), depth=n - 1)
        rhs = k.reduce(k.substitute(k.reduce(x, depth=n), d, r, n), depth=n - 1)
        assert lhs == rhs


def test_eliminator_count_measure():
    th, dm, d = contraction_example()
    tm = ElimR(th, dm, d, One(Const("a")), Const("w"))
    assert k.eliminator_count(tm) == 1
    assert k.eliminator_count(k.reduce(tm)) == 0


# ---------------------------------------------------------------------------
# alpha_equal


def test_alpha_equal_identifies_core_of_op():
    assert k.alpha_equal(Core(Op(B)), Core(B))
    assert k.alpha_equal(Core(Op(Op(B))), Core(B))


def test_alpha_equal_is_structural_otherwise():
    assert not k.alpha_equal(Op(Op(B)), B)
    assert not k.alpha_equal(Var(0), Var(1))
    assert k.alpha_equal(One(Var(0)), One(Var(0)))


def test_alpha_equal_equivalence_and_substitution():
    rng = random.Random(19)
    for _ in range(100):
        n = rng.randrange(1, 4)
        x = rand_term(rng, n, rng.randrange(5))
        y = rand_term(rng, n, rng.randrange(5))
        assert k.alpha_equal(x, x)
        if k.alpha_equal(x, y):
            r = rand_simple(rng, n - 1)
            d = rng.randrange(n)
            assert k.alpha_equal(k.substitute(x, d, r, n), k.substitute(y, d, r, n))


# ---------------------------------------------------------------------------
# scope hygiene


def test_well_scoped_counts_binders():
    th = BaseT("S", (Var(0),))
    tm = ElimR(th, BaseT("S", (Var(3),)), Var(1), One(Const("a")), Const("w"))
    assert k.well_scoped(tm, 0)
    assert not k.well_scoped(Var(0), 0)
    assert not k.well_scoped(ElimR(th, BaseT("S", (Var(4),)), Var(0),
                                   Const("a"), Const("w")), 0)


def test_instantiate_closed_retargets_binders():
    # a defined body over a two-entry telescope, unfolded in a context of 3
    body = Const("p", (Var(0), Var(1)))
    got = k.instantiate_closed(body, 2, (Var(2), Const("q")), 3)
    assert got == Const("p", (Var(2), Const("q")))
    th, dm, d = contraction_example()
    body2 = ElimR(th, dm, d, Var(0), Var(1))
    got2 = k.instantiate_closed(body2, 2, (Var(0), Const("q")), 1)
    assert k.well_scoped(got2, 1)
    assert got2.f == Var(0) and got2.theta == Const("q")
