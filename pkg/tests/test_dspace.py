"""Grid reachability checked against exhaustive path enumeration."""

import pytest

import homtt.dspace as ds

# ---------------------------------------------------------------------------
# oracle: enumerate every monotone path outright, no closure shortcuts


def enum_cells(space, forward=True):
    """Cells visited by some monotone path from the start corner.

    Walks all paths explicitly (forward from the initial corner, or
    backward from the final one), so it only suits small grids.
    """
    blocked = ds.forbidden_cells(space)
    start = space.initial if forward else space.final
    step = 1 if forward else -1
    if start in blocked:
        return set()
    seen = set()
    paths = [(start,)]
    while paths:
        path = paths.pop()
        seen.add(path[-1])
        for a in range(space.dims):
            n = ds._step(space, path[-1], a, step)
            if n is not None and n not in blocked:
                paths.append(path + (n,))
    return seen


SWISS = """\
# two processes taking two semaphores in opposite order
P(m) P(n) V(n) V(m)
P(n) P(m) V(m) V(n)
"""


def swiss_space():
    return ds.from_pv(ds.parse_pv(SWISS))


# ---------------------------------------------------------------------------
# parsing and program validation


def test_parse_pv_reads_events_and_skips_comments():
    prog = ds.parse_pv(SWISS)
    assert prog.processes == (
        (("P", "m"), ("P", "n"), ("V", "n"), ("V", "m")),
        (("P", "n"), ("P", "m"), ("V", "m"), ("V", "n")),
    )
    assert prog.semaphores == ("m", "n")
    assert prog.validate() == []


def test_parse_pv_rejects_malformed_events():
    with pytest.raises(ds.PvError, match=r"prog\.pv:2: cannot read event"):
        ds.parse_pv("P(m) V(m)\nP(m open\n", path="prog.pv")
    with pytest.raises(ds.PvError, match="'Q\\(m\\)'"):
        ds.parse_pv("Q(m)")


def test_program_validation_names_process_and_position():
    double = ds.parse_pv("P(m) P(m) V(m) V(m)")
    assert double.validate() == [
        "process 1, event 2: P(m) while already held"]
    orphan = ds.parse_pv("P(m) V(m)\nV(n)")
    assert orphan.validate() == [
        "process 2, event 1: V(n) without a matching P"]
    stuck = ds.parse_pv("P(m) V(m) P(n)")
    assert stuck.validate() == ["process 1: P(n) is never released"]
    with pytest.raises(ds.PvError, match="never released"):
        ds.from_pv(stuck)


def test_from_pv_enforces_size_caps():
    four = ds.PVProgram(((("P", "a"), ("V", "a")),) * 4)
    with pytest.raises(ds.PvError, match="4 processes"):
        ds.from_pv(four)
    long = ds.PVProgram(((("P", "a"), ("V", "a")) * 9,))
    with pytest.raises(ds.PvError, match="18 events"):
        ds.from_pv(long)


# ---------------------------------------------------------------------------
# building spaces from programs


def test_swiss_ticks_and_rectangles():
    space = swiss_space()
    assert space.ticks == (
        ("0", "L_m^A", "L_n^A", "U_n^A", "U_m^A", "1"),
        ("0", "L_n^B", "L_m^B", "U_m^B", "U_n^B", "1"),
    )
    assert space.forbidden == (
        ds.Rect((1, 2), (4, 3)),
        ds.Rect((2, 1), (3, 4)),
    )
    assert ds.forbidden_cells(space) == {
        (1, 2), (2, 2), (3, 2), (2, 1), (2, 3)}
    assert space.shape == (5, 5)
    assert space.validate() == []


def test_single_process_is_a_directed_interval():
    space = ds.from_pv(ds.parse_pv("P(m) V(m)"))
    assert space.shape == (3,)
    assert space.forbidden == ()
    report = ds.analyze(space)
    assert set(report.reachable) == set(report.safe) == {(0,), (1,), (2,)}
    assert ds.deadlocks(space) == ()


def test_minimal_mutex_forbids_one_cell():
    space = ds.from_pv(ds.parse_pv("P(m) V(m)\nP(m) V(m)"))
    assert space.forbidden == (ds.Rect((1, 1), (2, 2)),)
    assert ds.forbidden_cells(space) == {(1, 1)}
    report = ds.analyze(space)
    assert report.unreachable == ()
    assert report.unsafe == ()
    assert ds.deadlocks(space) == ()


def test_repeated_locking_gives_one_rectangle_per_hold_pair():
    space = ds.from_pv(ds.parse_pv("P(m) V(m) P(m) V(m)\nP(m) V(m)"))
    assert space.forbidden == (
        ds.Rect((1, 1), (2, 2)),
        ds.Rect((3, 1), (4, 2)),
    )
    assert ds.deadlocks(space) == ()


def test_three_processes_block_the_full_third_axis():
    text = "P(q) V(q)\nP(q) V(q)\nP(z) V(z)"
    space = ds.from_pv(ds.parse_pv(text))
    assert space.dims == 3
    assert space.forbidden == (ds.Rect((1, 1, 0), (2, 2, 3)),)
    assert ds.rect_cells(space, space.forbidden[0]) == {
        (1, 1, z) for z in range(3)}
    report = ds.analyze(space)
    assert report.unreachable == ()
    assert report.unsafe == ()


# ---------------------------------------------------------------------------
# the flagship example, frozen


def test_swiss_complements_match_the_named_squares():
    space = swiss_space()
    report = ds.analyze(space)
    ta, tb = space.ticks
    unreach = ds.Rect((ta.index("U_n^A"), tb.index("U_m^B")),
                      (ta.index("U_m^A"), tb.index("U_n^B")))
    unsafe = ds.Rect((ta.index("L_m^A"), tb.index("L_n^B")),
                     (ta.index("L_n^A"), tb.index("L_m^B")))
    assert set(report.unreachable) == ds.rect_cells(space, unreach) == {(3, 3)}
    assert set(report.unsafe) == ds.rect_cells(space, unsafe) == {(1, 1)}
    assert report.validate() == []


def test_swiss_deadlock_is_the_unsafe_corner():
    assert ds.deadlocks(swiss_space()) == ((1, 1),)


def test_swiss_rendering():
    report = ds.analyze(swiss_space())
    assert ds.render(report) == (
        "BBBBB\n"
        "BB#SB\n"
        "B###B\n"
        "BR#BB\n"
        "BBBBB\n"
    )


def test_render_requires_two_axes():
    report = ds.analyze(ds.from_pv(ds.parse_pv("P(m) V(m)")))
    with pytest.raises(ValueError, match="two axes"):
        ds.render(report)


# ---------------------------------------------------------------------------
# walls and deadlocks built directly


def wall_space():
    ticks = (("0", "a", "b", "c", "1"),) * 2
    return ds.DirectedGridSpace(ticks, (ds.Rect((0, 1), (4, 2)),))


def test_full_width_wall_strands_the_bottom_rows():
    space = wall_space()
    assert space.validate() == []
    report = ds.analyze(space)
    assert set(report.reachable) == {(x, 0) for x in range(4)}
    assert set(report.safe) == {(x, y) for x in range(4) for y in (2, 3)}
    assert ds.deadlocks(space) == ((3, 0),)


def test_empty_forbidden_set_has_no_deadlocks():
    space = ds.DirectedGridSpace((("0", "a", "1"), ("0", "b", "1")))
    report = ds.analyze(space)
    assert set(report.reachable) == set(ds.states(space))
    assert set(report.safe) == set(ds.states(space))
    assert ds.deadlocks(space) == ()


def test_space_validation_flags_bad_rectangles_and_corners():
    ticks = (("0", "a", "1"), ("0", "b", "1"))
    leaky = ds.DirectedGridSpace(ticks, (ds.Rect((0, 0), (9, 1)),))
    assert any("leaves the grid" in p for p in leaky.validate())
    trap = ds.DirectedGridSpace(ticks, (ds.Rect((0, 0), (1, 1)),))
    assert trap.validate() == ["the initial corner is forbidden"]
    thin = ds.DirectedGridSpace((("0",), ("0", "b", "1")))
    assert any("two boundary ticks" in p for p in thin.validate())


# ---------------------------------------------------------------------------
# closures agree with path enumeration


ORACLE_SPACES = [
    ("swiss", swiss_space),
    ("mutex", lambda: ds.from_pv(ds.parse_pv("P(m) V(m)\nP(m) V(m)"))),
    ("relock", lambda: ds.from_pv(
        ds.parse_pv("P(m) V(m) P(m) V(m)\nP(m) V(m)"))),
    ("wall", wall_space),
    ("interval", lambda: ds.from_pv(ds.parse_pv("P(m) V(m)"))),
    ("threeway", lambda: ds.from_pv(
        ds.parse_pv("P(q) V(q)\nP(q) V(q)\nP(z) V(z)"))),
]


@pytest.mark.parametrize("name,build", ORACLE_SPACES, ids=[n for n, _ in
                                                           ORACLE_SPACES])
def test_closures_match_path_enumeration(name, build):
    space = build()
    assert set(ds.reachable(space)) == enum_cells(space, forward=True)
    assert set(ds.safe(space)) == enum_cells(space, forward=False)


@pytest.mark.parametrize("name,build", ORACLE_SPACES, ids=[n for n, _ in
                                                           ORACLE_SPACES])
def test_witness_paths_are_monotone_and_clear(name, build):
    report = ds.analyze(build())
    assert report.validate() == []


# ---------------------------------------------------------------------------
# duality and relabeling invariance


@pytest.mark.parametrize("name,build", ORACLE_SPACES, ids=[n for n, _ in
                                                           ORACLE_SPACES])
def test_safe_is_reachable_of_the_reversed_space(name, build):
    space = build()
    rev = ds.op_space(space)
    assert rev.validate() == []
    mirrored = {ds.mirror_cell(space, c) for c in ds.reachable(rev)}
    assert set(ds.safe(space)) == mirrored
    assert ds.op_space(rev) == space


def test_swapping_processes_transposes_the_space():
    space = swiss_space()
    lines = SWISS.strip().splitlines()[1:]
    swapped = ds.from_pv(ds.parse_pv("\n".join(reversed(lines))))
    assert swapped.ticks[0] == tuple(
        l.replace("^B", "^A") for l in space.ticks[1])
    assert swapped.ticks[1] == tuple(
        l.replace("^A", "^B") for l in space.ticks[0])
    flip = {(y, x) for x, y in ds.forbidden_cells(space)}
    assert ds.forbidden_cells(swapped) == flip
    assert {(y, x) for x, y in ds.analyze(space).unreachable} == set(
        ds.analyze(swapped).unreachable)


def test_renaming_semaphores_keeps_the_geometry():
    renamed = ds.from_pv(ds.parse_pv(SWISS.replace("m", "u")))
    space = swiss_space()
    assert set(renamed.forbidden) == set(space.forbidden)
    assert renamed.ticks[0] == tuple(
        l.replace("_m", "_u") for l in space.ticks[0])
    assert ds.analyze(renamed).unreachable == ds.analyze(space).unreachable
