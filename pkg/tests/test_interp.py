import pytest

import cats
from homtt import checker as ch
from homtt import fincat as fc
from homtt import interp as ip
from homtt import kernel as k
from homtt import parser as ps


# -- oracles ----------------------------------------------------------------
#
# Written against the constructions themselves, not the interpreter: the
# left eliminator straight from its one-sided formula, composition by
# table lookup, and context sizes by counting.


def direct_left_elim(itp, ctx, e):
    """Left elimination computed without the mirror: the value at
    (gamma, s, t, f, th) is the motive's transition along the canonical
    morphism out of (gamma, t, t, 1_t, th) whose first slot carries the
    reversed f, applied to the seed at (gamma, t, th)."""
    n = len(ctx)
    f_ty = ch.nf(itp.sig, ch.infer_term(itp.sig, ctx, e.f), n)
    match f_ty:
        case k.Hom(car, sv, k.IncCore(tv)):
            pass
        case _:
            raise AssertionError(f"not a left eliminand: {f_ty!r}")
    ctx_d = ctx + (
        ("s", k.Op(car)),
        ("t", k.Core(k.shift(car, n, 1))),
        ("f", k.Hom(k.shift(car, n, 2), k.Var(n), k.IncCore(k.Var(n + 1)))),
        ("th", k.shift(k.shift(e.motive_theta, n, 1), n + 2, 1)))
    E = itp.context(ctx_d)
    D = itp.type(ctx_d, e.motive_d)
    fa = itp.type(ctx, car)
    theta_fa = itp.type(ctx + (("s", k.Core(car)),), e.motive_theta)
    ctx_b = ctx + (("s", k.Core(car)), ("th", e.motive_theta))
    d_sec = itp.term(ctx_b, e.base)

    def mu(x):
        gamma, t, f, th = x[:n], x[n + 1], x[n + 2], x[n + 3]
        one = fa.fibers[gamma].identity[t]
        return fc.Mor(
            fa.base.identity[gamma].name
            + (fc.op_mor(f), fc.identity_mor(t), fc.identity_mor(f),
               theta_fa.fibers[gamma + (t,)].identity[th]),
            gamma + (t, t, one, th), x)

    obj = {x: D.transitions[mu(x)].ob[d_sec.obj[x[:n] + (x[n + 1], x[n + 3])]]
           for x in E.objects}
    mor = {}
    for m in E.morphisms:
        psi = fc.Mor(m.name[:n] + (m.name[n + 1], m.name[n + 3]),
                     m.dom[:n] + (m.dom[n + 1], m.dom[n + 3]),
                     m.cod[:n] + (m.cod[n + 1], m.cod[n + 3]))
        mor[m] = D.transitions[mu(m.cod)].mor[d_sec.mor[psi]]
    full = fc.Section(D, obj, mor)
    slots = (itp.term(ctx, sv), itp.term(ctx, tv),
             itp.term(ctx, e.f), itp.term(ctx, e.theta))
    args = ip.pairing_functor(fc.identity_functor(itp.context(ctx)),
                              slots, E)
    return fc.reindex_section(full, args)


def composable_pairs(c):
    return sum(1 for g in c.morphisms for f in c.morphisms
               if f.cod == g.dom)


def assert_same_values(a, b):
    assert a.obj == b.obj
    assert a.mor == b.mor


# -- shared builders --------------------------------------------------------

B = k.BaseT("B")


def base_sig():
    sig = ch.Signature()
    sig.assume_type("B")
    return sig


def const_env(c):
    return ip.SemanticEnv(
        bases={"B": fc.constant_fibers(ip.terminal_ctx(), c)})


def hom_ctx():
    return (("s", k.Core(B)), ("t", B),
            ("f", k.Hom(B, k.IncOp(k.Var(0)), k.Var(1))))


def comp_setup(c, f_mor, g_mor):
    """Signature, environment, interpreter for a closed composition pair."""
    sig = base_sig()
    sig.assume_term("r0", (), k.Op(B))
    sig.assume_term("s0", (), k.Core(B))
    sig.assume_term("t0", (), B)
    sig.assume_term("f0", (), k.Hom(B, k.Const("r0"),
                                    k.IncCore(k.Const("s0"))))
    sig.assume_term("g0", (), k.Hom(B, k.IncOp(k.Const("s0")),
                                    k.Const("t0")))
    for side in ("right", "left"):
        d = ch.derive_comp(side, sig, carrier="B")
        sig.define(d.name, d.telescope, d.ty, d.body)
    env = const_env(c)
    itp = ip.Interpreter(sig, env)
    env.terms["r0"] = fc.strict_section(itp.type((), k.Op(B)),
                                        {(): f_mor.dom})
    env.terms["s0"] = fc.strict_section(itp.type((), k.Core(B)),
                                        {(): f_mor.cod})
    env.terms["t0"] = fc.strict_section(itp.type((), B), {(): g_mor.cod})
    env.terms["f0"] = fc.strict_section(
        itp.type((), k.Hom(B, k.Const("r0"), k.IncCore(k.Const("s0")))),
        {(): f_mor})
    env.terms["g0"] = fc.strict_section(
        itp.type((), k.Hom(B, k.IncOp(k.Const("s0")), k.Const("t0"))),
        {(): g_mor})
    return sig, env, itp


CLOSED_ARGS = tuple(k.Const(nm) for nm in ("r0", "s0", "t0", "f0", "g0"))


# -- context interpretation -------------------------------------------------

def test_empty_context_is_the_point():
    cat = ip.terminal_ctx()
    assert cat.objects == ((),)
    assert len(cat.morphisms) == 1
    assert cat.validate() == []


def test_single_entry_context_matches_the_category():
    c = cats.two()
    itp = ip.Interpreter(base_sig(), const_env(c))
    cat = itp.context((("x", B),))
    assert len(cat.objects) == 2 and len(cat.morphisms) == 3
    assert fc.are_isomorphic(cat, c)
    assert cat.validate() == []


def test_hom_context_census_walking_arrow():
    itp = ip.Interpreter(base_sig(), const_env(cats.two()))
    cat = itp.context(hom_ctx())
    assert len(cat.objects) == 3
    assert len(cat.morphisms) == 4
    assert cat.validate() == []


@pytest.mark.parametrize("name", ["two", "para", "z2", "chain3", "idem"])
def test_hom_context_census_general(name):
    c = cats.ALL[name]()
    itp = ip.Interpreter(base_sig(), const_env(c))
    cat = itp.context(hom_ctx())
    assert len(cat.objects) == len(c.morphisms)
    assert len(cat.morphisms) == composable_pairs(c)
    assert cat.validate() == []


def test_variable_is_the_slot_projection():
    itp = ip.Interpreter(base_sig(), const_env(cats.two()))
    ctx = hom_ctx()
    for lv in range(3):
        sec = itp.term(ctx, k.Var(lv))
        cat = itp.context(ctx)
        assert sec.obj == {x: x[lv] for x in cat.objects}
        assert sec.mor == {m: m.name[lv] for m in cat.morphisms}


# -- type formers -----------------------------------------------------------

def test_base_type_fiber_is_the_bound_category():
    c = cats.chain3()
    itp = ip.Interpreter(base_sig(), const_env(c))
    assert itp.type((), B).fibers[()] == c


def test_core_interp_is_discrete():
    c = cats.two()
    itp = ip.Interpreter(base_sig(), const_env(c))
    assert itp.type((), k.Core(B)).fibers[()] == fc.core(c)


def test_op_op_collapse_is_exact():
    itp = ip.Interpreter(base_sig(), const_env(cats.chain3()))
    ctx = (("x", B),)
    assert itp.type(ctx, k.Op(k.Op(B))) == itp.type(ctx, B)


def test_core_op_collapse_is_exact():
    itp = ip.Interpreter(base_sig(), const_env(cats.z2()))
    assert itp.type((), k.Core(k.Op(B))) == itp.type((), k.Core(B))


@pytest.mark.parametrize("name", ["two", "chain3", "z2", "para"])
def test_closed_hom_is_the_hom_set(name):
    c = cats.ALL[name]()
    for x in c.objects:
        for y in c.objects:
            sig = base_sig()
            sig.assume_term("s0", (), k.Op(B))
            sig.assume_term("t0", (), B)
            env = const_env(c)
            itp = ip.Interpreter(sig, env)
            env.terms["s0"] = fc.strict_section(itp.type((), k.Op(B)),
                                                {(): x})
            env.terms["t0"] = fc.strict_section(itp.type((), B), {(): y})
            fa = itp.type((), k.Hom(B, k.Const("s0"), k.Const("t0")))
            assert set(fa.fibers[()].objects) == set(c.hom(x, y))


def test_missing_base_binding_is_reported():
    itp = ip.Interpreter(base_sig(), ip.SemanticEnv())
    with pytest.raises(ip.InterpError, match="base type 'B'"):
        itp.type((), B)


# -- introductions ----------------------------------------------------------

def closed_point_setup(c, point):
    sig = base_sig()
    sig.assume_term("c0", (), k.Core(B))
    env = const_env(c)
    itp = ip.Interpreter(sig, env)
    env.terms["c0"] = fc.strict_section(itp.type((), k.Core(B)),
                                        {(): point})
    return sig, env, itp


def test_inclusions_are_strict_sections():
    c = cats.two()
    _, _, itp = closed_point_setup(c, "0")
    into = itp.term((), k.IncCore(k.Const("c0")))
    assert into.obj == {(): "0"}
    assert into.is_strict()
    into_op = itp.term((), k.IncOp(k.Const("c0")))
    assert into_op.obj == {(): "0"}
    assert into_op.fa.fibers[()] == fc.op(c)


def test_intro_picks_the_identity():
    c = cats.chain3()
    _, _, itp = closed_point_setup(c, "1")
    one = itp.term((), k.One(k.Const("c0")))
    assert one.obj == {(): c.identity["1"]}
    expected = fc.identity_section(itp.type((), B),
                                   itp.term((), k.Const("c0")))
    assert one == expected


def test_intro_in_context_is_natural():
    itp = ip.Interpreter(base_sig(), const_env(cats.two()))
    ctx = (("s", k.Core(B)),)
    one = itp.term(ctx, k.One(k.Var(0)))
    assert one.validate() == []
    assert one.obj == {(x,): cats.two().identity[x] for x in ("0", "1")}


# -- eliminators against the composition-table oracle -----------------------

@pytest.mark.parametrize("name", ["two", "chain3", "z2", "para", "idem"])
def test_comp_right_matches_the_table(name):
    c = cats.ALL[name]()
    for f_mor in c.morphisms:
        for g_mor in c.morphisms:
            if g_mor.dom != f_mor.cod:
                continue
            _, _, itp = comp_setup(c, f_mor, g_mor)
            got = itp.term((), k.Const("comp_R", CLOSED_ARGS))
            assert got.obj[()] == c.comp(g_mor, f_mor)


@pytest.mark.parametrize("name", ["two", "chain3", "z2", "para", "idem"])
def test_comp_left_matches_the_table(name):
    c = cats.ALL[name]()
    for f_mor in c.morphisms:
        for g_mor in c.morphisms:
            if g_mor.dom != f_mor.cod:
                continue
            _, _, itp = comp_setup(c, f_mor, g_mor)
            got = itp.term((), k.Const("comp_L", CLOSED_ARGS))
            assert got.obj[()] == c.comp(g_mor, f_mor)


def test_right_unit_interprets_to_the_same_section():
    c = cats.chain3()
    for f_mor in c.morphisms:
        _, _, itp = comp_setup(c, f_mor, c.identity[f_mor.cod])
        lhs = itp.term((), k.Const("comp_R", (
            k.Const("r0"), k.Const("s0"), k.IncCore(k.Const("s0")),
            k.Const("f0"), k.One(k.Const("s0")))))
        rhs = itp.term((), k.Const("f0"))
        assert_same_values(lhs, rhs)
        assert lhs.fa == rhs.fa


def test_computation_rule_holds_on_every_witness():
    c = cats.z2()
    s = cats.arrow(c, "s")
    _, _, itp = comp_setup(c, s, s)
    itp.term((), k.Const("comp_R", CLOSED_ARGS))
    itp.term((), k.Const("comp_L", CLOSED_ARGS))
    assert len(itp.witnesses) == 2
    for w in itp.witnesses:
        restricted = fc.reindex_section(w.e_full, w.unit)
        assert restricted.obj == w.d_sec.obj
        assert restricted.mor == w.d_sec.mor
        assert w.unit.validate() == []
        assert w.e_full.validate() == []
        assert w.result.validate() == []


def test_generic_eliminator_is_natural_over_the_whole_extension():
    sig, env, itp = comp_setup(cats.two(), cats.arrow(cats.two(), "a"),
                               cats.two().identity["1"])
    tele = tuple(sig.defs["comp_R"][0])
    gen = itp.term(tele, k.Const("comp_R", tuple(k.Var(i)
                                                 for i in range(5))))
    assert gen.validate() == []
    w = itp.witnesses[-1]
    assert w.e_full.validate() == []
    assert fc.reindex_section(w.e_full, w.unit).obj == w.d_sec.obj


# -- left/right duality -----------------------------------------------------

@pytest.mark.parametrize("name", ["two", "chain3", "z2"])
def test_left_elim_agrees_with_the_direct_formula(name):
    c = cats.ALL[name]()
    for f_mor in c.morphisms:
        for g_mor in c.morphisms:
            if g_mor.dom != f_mor.cod:
                continue
            sig, _, itp = comp_setup(c, f_mor, g_mor)
            body = sig.defs["comp_L"][2]
            node = k.instantiate_closed(body, 5, CLOSED_ARGS, 0)
            assert isinstance(node, k.ElimL)
            got = itp.term((), node)
            want = direct_left_elim(itp, (), node)
            assert_same_values(got, want)


def test_left_transport_moves_backwards():
    c = cats.two()
    sig = base_sig()
    sig.assume_type("S", (("x", k.Op(B)),))
    d = ch.derive_transport("left", sig, carrier="B", family="S")
    sig.define(d.name, d.telescope, d.ty, d.body)
    sig.assume_term("c0", (), k.Core(B))
    sig.assume_term("c1", (), k.Op(B))
    sig.assume_term("ff", (), k.Hom(B, k.Const("c1"),
                                    k.IncCore(k.Const("c0"))))
    sig.assume_term("u0", (), k.BaseT("S", (k.IncOp(k.Const("c0")),)))

    env = const_env(c)
    itp = ip.Interpreter(sig, env)
    ctx_op = itp.context((("x", k.Op(B)),))
    a_op = next(m for m in ctx_op.morphisms if m.name[0].name == "a")
    stc, twoc = cats.star(), cats.two()
    fam = fc.FiberAssignment(
        ctx_op,
        {("0",): stc, ("1",): twoc},
        {ctx_op.identity[("0",)]: fc.identity_functor(stc),
         ctx_op.identity[("1",)]: fc.identity_functor(twoc),
         a_op: fc.Functor(twoc, stc, {"0": "*", "1": "*"},
                          {m: stc.identity["*"]
                           for m in twoc.morphisms})})
    assert fam.validate() == []
    env.bases["S"] = fam
    env.terms["c0"] = fc.strict_section(itp.type((), k.Core(B)), {(): "1"})
    env.terms["c1"] = fc.strict_section(itp.type((), k.Op(B)), {(): "0"})
    env.terms["ff"] = fc.strict_section(
        itp.type((), k.Hom(B, k.Const("c1"), k.IncCore(k.Const("c0")))),
        {(): cats.arrow(c, "a")})
    env.terms["u0"] = fc.strict_section(
        itp.type((), k.BaseT("S", (k.IncOp(k.Const("c0")),))), {(): "0"})

    tm = k.Const("transport_L", (k.Const("c0"), k.Const("c1"),
                                 k.Const("ff"), k.Const("u0")))
    got = itp.term((), tm)
    assert got.obj[()] == "*"
    node = k.instantiate_closed(sig.defs["transport_L"][2], 4,
                                (k.Const("c0"), k.Const("c1"),
                                 k.Const("ff"), k.Const("u0")), 0)
    assert_same_values(got, direct_left_elim(itp, (), node))


# -- substitution coherence -------------------------------------------------

def test_substitution_coherence_for_the_generic_eliminator():
    c = cats.two()
    f_mor = cats.arrow(c, "a")
    g_mor = c.identity["1"]
    sig, _, itp = comp_setup(c, f_mor, g_mor)
    tele = tuple(sig.defs["comp_R"][0])
    gen = itp.term(tele, k.Const("comp_R", tuple(k.Var(i)
                                                 for i in range(5))))
    closed = itp.term((), k.Const("comp_R", CLOSED_ARGS))
    subst = ip.pairing_functor(
        ip.collapse_functor(itp.context(())),
        [itp.term((), a) for a in CLOSED_ARGS],
        itp.context(tele))
    assert subst.validate() == []
    pulled = fc.reindex_section(gen, subst)
    assert_same_values(pulled, closed)


def test_substitution_coherence_for_intro():
    c = cats.two()
    sig, _, itp = comp_setup(c, cats.arrow(c, "a"), c.identity["1"])
    tele = tuple(sig.defs["comp_R"][0])
    gen = itp.term(tele, k.One(k.Var(1)))
    closed = itp.term((), k.One(k.Const("s0")))
    subst = ip.pairing_functor(
        ip.collapse_functor(itp.context(())),
        [itp.term((), a) for a in CLOSED_ARGS],
        itp.context(tele))
    assert_same_values(fc.reindex_section(gen, subst), closed)


# -- the transport scenario, in code and from files -------------------------

def transport_source():
    d = ch.derive_transport("right", carrier="B", family="S")
    call = k.Const("transport_R", (k.Const("c"), k.Const("c'"),
                                   k.Const("ff"), k.Const("u0")))
    stay = k.Const("transport_R", (k.Const("c"), k.IncCore(k.Const("c")),
                                   k.One(k.Const("c")), k.Const("u0")))
    decls = (
        ps.AssumeType("B", ()),
        ps.AssumeType("S", (("x", B),)),
        d,
        ps.AssumeTerm("c", (), k.Core(B)),
        ps.AssumeTerm("c'", (), B),
        ps.AssumeTerm("ff", (), k.Hom(B, k.IncOp(k.Const("c")),
                                      k.Const("c'"))),
        ps.AssumeTerm("u0", (), k.BaseT("S", (k.IncCore(k.Const("c")),))),
        ps.Define("moved", (), k.BaseT("S", (k.Const("c'"),)), call),
        ps.Define("stay", (), k.BaseT("S", (k.IncCore(k.Const("c")),)),
                  stay),
        ps.AssertEqual((), k.Const("stay"), k.Const("u0"),
                       k.BaseT("S", (k.IncCore(k.Const("c")),))),
    )
    return ps.SourceFile(decls)


def transport_env(sig):
    env = ip.SemanticEnv()
    itp = ip.Interpreter(sig, env)
    env.bases["B"] = fc.constant_fibers(ip.terminal_ctx(), cats.two())
    ctx_b = itp.context((("x", B),))
    a_m = next(m for m in ctx_b.morphisms if m.name[0].name == "a")
    stc, twoc = cats.star(), cats.two()
    env.bases["S"] = fc.FiberAssignment(
        ctx_b,
        {("0",): stc, ("1",): twoc},
        {ctx_b.identity[("0",)]: fc.identity_functor(stc),
         ctx_b.identity[("1",)]: fc.identity_functor(twoc),
         a_m: fc.Functor(stc, twoc, {"*": "0"},
                         {stc.identity["*"]: twoc.identity["0"]})})
    env.terms["c"] = fc.strict_section(itp.type((), k.Core(B)), {(): "0"})
    env.terms["c'"] = fc.strict_section(itp.type((), B), {(): "1"})
    env.terms["ff"] = fc.strict_section(
        itp.type((), k.Hom(B, k.IncOp(k.Const("c")), k.Const("c'"))),
        {(): cats.arrow(cats.two(), "a")})
    env.terms["u0"] = fc.strict_section(
        itp.type((), k.BaseT("S", (k.IncCore(k.Const("c")),))), {(): "*"})
    return env


def test_transport_moves_the_point_along_the_family():
    source = transport_source()
    sig, recs = ch.check_source(source)
    assert all(r.ok for r in recs)
    env = transport_env(sig)
    itp = ip.Interpreter(sig, env)
    moved = itp.term((), k.Const("moved"))
    assert moved.obj[()] == "0"
    stay = itp.term((), k.Const("stay"))
    assert stay.obj[()] == "*"


def test_transport_scenario_passes_verification():
    source = transport_source()
    sig, _ = ch.check_source(source)
    env = transport_env(sig)
    records = ip.verify_soundness(None, env, source)
    bad = [r for r in records if not r.ok]
    assert bad == []
    checks = {r.check for r in records}
    assert "computation-rule[right]" in checks
    assert "equal-interpretation" in checks
    assert "eliminator-natural[right]" in checks
    assert any(c.startswith("chi-pullback") for c in checks)


def test_verification_report_is_deterministic():
    source = transport_source()
    sig, _ = ch.check_source(source)
    env = transport_env(sig)
    first = ip.format_records(ip.verify_soundness(None, env, source))
    second = ip.format_records(ip.verify_soundness(None, env, source))
    assert first == second


FINCAT_TEXT = """\
category star
  objects *
end

category two
  objects 0 1
  arrow a : 0 -> 1
end

functor sa : star -> two
  ob * -> 0
end

fiber sfam over two
  at [0] : star
  at [1] : two
  along [0] (a) : sa
end
"""

SCENARIO_TEXT = """\
# transport along the walking arrow
source trans.dtt
fincat world.fincat
bind type B = two
bind type S = sfam
bind const c = 0
bind const c' = 1
bind const ff = a
bind const u0 = *
"""


def test_scenario_files_round_trip(tmp_path):
    (tmp_path / "trans.dtt").write_text(ps.print_source(transport_source()),
                                        encoding="utf-8")
    (tmp_path / "world.fincat").write_text(FINCAT_TEXT, encoding="utf-8")
    scn_path = tmp_path / "trans.scn"
    scn_path.write_text(SCENARIO_TEXT, encoding="utf-8")
    scn = ip.load_scenario(scn_path)
    records = ip.verify_soundness(None, scn.env, scn.source)
    assert records and all(r.ok for r in records)


def test_scenario_with_bad_binding_name(tmp_path):
    (tmp_path / "trans.dtt").write_text(ps.print_source(transport_source()),
                                        encoding="utf-8")
    (tmp_path / "world.fincat").write_text(FINCAT_TEXT, encoding="utf-8")
    scn_path = tmp_path / "trans.scn"
    scn_path.write_text(SCENARIO_TEXT + "bind const zz = 0\n",
                        encoding="utf-8")
    with pytest.raises(ip.InterpError, match="no such assumed constant"):
        ip.load_scenario(scn_path)


# -- negative controls ------------------------------------------------------

def test_broken_environment_is_rejected_by_name():
    source = transport_source()
    sig, _ = ch.check_source(source)
    env = transport_env(sig)
    twoc = cats.two()
    bad = fc.FiberAssignment(
        ip.terminal_ctx(),
        {(): twoc},
        {ip.terminal_ctx().identity[()]:
         fc.Functor(twoc, twoc, {"0": "0", "1": "0"},
                    {m: twoc.identity["0"] for m in twoc.morphisms})})
    env.bases["B"] = bad
    records = ip.verify_soundness(None, env, source)
    first = records[0]
    assert first.subject == "base:B"
    assert not first.ok
    assert "identity" in first.detail
    assert not any(r.check == "typecheck" for r in records)


def test_unbound_base_fails_at_its_use_site():
    source = transport_source()
    sig, _ = ch.check_source(source)
    env = transport_env(sig)
    del env.bases["S"]
    records = ip.verify_soundness(None, env, source)
    fails = [r for r in records if not r.ok]
    assert fails
    assert all(r.check == "interpretation" for r in fails)
    assert any("'S'" in r.detail for r in fails)


def test_env_value_outside_fiber_is_reported():
    source = transport_source()
    sig, _ = ch.check_source(source)
    env = transport_env(sig)
    chn = cats.chain3()
    wrong = fc.constant_fibers(ip.terminal_ctx(), fc.core(chn))
    env.terms["c"] = fc.strict_section(wrong, {(): "2"})
    records = ip.verify_soundness(None, env, source)
    rec = next(r for r in records if r.check == "env-type")
    assert not rec.ok
    assert "outside the fiber" in rec.detail


def test_interp_term_rejects_ill_typed_input():
    sig = base_sig()
    env = const_env(cats.two())
    with pytest.raises(ch.CheckError):
        ip.interp_term(sig, env, (("x", B),), k.Var(0), k.Core(B))


# -- comprehension squares --------------------------------------------------

def test_comprehension_squares_are_pullbacks():
    itp = ip.Interpreter(base_sig(), const_env(cats.two()))
    ctx = hom_ctx()
    records = ip._pullback_records(itp, "probe", ctx)
    assert len(records) == 3
    assert all(r.ok for r in records)


def test_judgement_wrapper_bundles_everything():
    sig = base_sig()
    env = const_env(cats.chain3())
    res = ip.interp_judgement(sig, env, (("x", B),), k.Core(B))
    assert res.term is None
    assert res.ctx_cat.validate() == []
    assert res.ty.validate() == []
    assert all(r.ok for r in res.records)
    with_term = ip.interp_judgement(sig, env, (("x", k.Core(B)),), B,
                                    k.IncCore(k.Var(0)))
    assert with_term.term is not None
    assert all(r.ok for r in with_term.records)
