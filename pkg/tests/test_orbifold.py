"""Triangulation structure, exchange matrices, and flips.

Exchange matrix goldens below were computed by hand from the directed side
lists (counting counterclockwise-consecutive pairs per ordinary face), and
the flip tests cross-check every flip against independent matrix mutation.
"""

import numpy as np
import pytest

from orbcluster.orbifold import (
    PLAIN,
    NOTCHED,
    Arc,
    Triangle,
    Triangulation,
    TriangulationError,
    FlipError,
)


# ---------------------------------------------------------------------------
# fixtures


def hexagon_orb(p=3):
    """Hexagonal disk, four chords, one orbifold point of order p.

    Boundary vertices counterclockwise: X, Z1, M, Z3, Y, Z2.  The two arcs
    a, b between X and M cut out a bigon holding the pending loop rho at M.
    """
    arcs = [
        Arc("a", "standard", ("X", "M")),
        Arc("b", "standard", ("X", "M")),
        Arc("c", "standard", ("X", "Y")),
        Arc("d", "standard", ("Y", "M")),
        Arc("rho", "pending", ("M", "M"), orbifold_point="O", order=p),
        Arc("s1", "boundary", ("X", "Z1")),
        Arc("s2", "boundary", ("Z1", "M")),
        Arc("s3", "boundary", ("M", "Z3")),
        Arc("s4", "boundary", ("Z3", "Y")),
        Arc("s5", "boundary", ("Y", "Z2")),
        Arc("s6", "boundary", ("Z2", "X")),
    ]
    tris = [
        Triangle.monogon("rho"),
        Triangle.ordinary(("a", -1), ("b", 1), ("rho", 1)),
        Triangle.ordinary(("a", 1), ("d", -1), ("c", -1)),
        Triangle.ordinary(("s1", 1), ("s2", 1), ("b", -1)),
        Triangle.ordinary(("s3", 1), ("s4", 1), ("d", 1)),
        Triangle.ordinary(("s5", 1), ("s6", 1), ("c", 1)),
    ]
    return Triangulation(arcs, tris, orbifold_points={"O": p})


def punctured_triangle():
    """Triangle disk with one interior puncture, three radii."""
    arcs = [
        Arc("ra", "standard", ("A", "P")),
        Arc("rb", "standard", ("B", "P")),
        Arc("rc", "standard", ("C", "P")),
        Arc("eab", "boundary", ("A", "B")),
        Arc("ebc", "boundary", ("B", "C")),
        Arc("eca", "boundary", ("C", "A")),
    ]
    tris = [
        Triangle.ordinary(("eab", 1), ("rb", 1), ("ra", -1)),
        Triangle.ordinary(("ebc", 1), ("rc", 1), ("rb", -1)),
        Triangle.ordinary(("eca", 1), ("ra", 1), ("rc", -1)),
    ]
    return Triangulation(arcs, tris, punctures={"P"})


def punctured_disk_orb(p=3):
    """Two boundary vertices, one puncture, one orbifold point."""
    arcs = [
        Arc("r1", "standard", ("V", "P")),
        Arc("r2", "standard", ("W", "P")),
        Arc("h", "standard", ("V", "W")),
        Arc("rho", "pending", ("W", "W"), orbifold_point="O", order=p),
        Arc("st", "boundary", ("V", "W")),
        Arc("sb", "boundary", ("W", "V")),
    ]
    tris = [
        Triangle.ordinary(("st", 1), ("r2", 1), ("r1", -1)),
        Triangle.ordinary(("r1", 1), ("r2", -1), ("h", -1)),
        Triangle.ordinary(("h", 1), ("rho", 1), ("sb", 1)),
        Triangle.monogon("rho"),
    ]
    return Triangulation(arcs, tris, punctures={"P"}, orbifold_points={"O": p})


def punctured_digon():
    arcs = [
        Arc("r1", "standard", ("A", "P")),
        Arc("r2", "standard", ("B", "P")),
        Arc("s1", "boundary", ("A", "B")),
        Arc("s2", "boundary", ("B", "A")),
    ]
    tris = [
        Triangle.ordinary(("s1", 1), ("r2", 1), ("r1", -1)),
        Triangle.ordinary(("s2", 1), ("r1", 1), ("r2", -1)),
    ]
    return Triangulation(arcs, tris, punctures={"P"})


def pentagon():
    arcs = [
        Arc("g1", "standard", ("P1", "P3")),
        Arc("g2", "standard", ("P1", "P4")),
        Arc("e1", "boundary", ("P1", "P2")),
        Arc("e2", "boundary", ("P2", "P3")),
        Arc("e3", "boundary", ("P3", "P4")),
        Arc("e4", "boundary", ("P4", "P5")),
        Arc("e5", "boundary", ("P5", "P1")),
    ]
    tris = [
        Triangle.ordinary(("e1", 1), ("e2", 1), ("g1", -1)),
        Triangle.ordinary(("g1", 1), ("e3", 1), ("g2", -1)),
        Triangle.ordinary(("g2", 1), ("e4", 1), ("e5", 1)),
    ]
    return Triangulation(arcs, tris)


ALL_FIXTURES = [hexagon_orb, punctured_triangle, punctured_disk_orb,
                punctured_digon, pentagon]


def mat_mutate(M, k, d):
    """Matrix mutation in direction k; d holds the exchange degrees."""
    old = np.asarray(M)
    new = old.copy()
    rows, cols = old.shape
    for i in range(rows):
        for j in range(cols):
            if i == k or j == k:
                new[i, j] = -old[i, j]
            else:
                new[i, j] = old[i, j] + d[k] * (
                    max(-old[i, k], 0) * old[k, j]
                    + old[i, k] * max(old[k, j], 0))
    return new


# ---------------------------------------------------------------------------
# arcs and triangles


def test_arc_is_immutable():
    a = Arc("a", "standard", ("X", "Y"))
    with pytest.raises(AttributeError):
        a.label = "b"
    b = a.replaced(tags=(NOTCHED, PLAIN))
    assert a.tags == (PLAIN, PLAIN) and b.tags == (NOTCHED, PLAIN)


def test_arc_tag_at():
    a = Arc("a", "standard", ("X", "P"), tags=(PLAIN, NOTCHED))
    assert a.tag_at("X") == PLAIN
    assert a.tag_at("P") == NOTCHED
    with pytest.raises(ValueError):
        a.tag_at("Q")
    loop = Arc("l", "standard", ("X", "X"), tags=(PLAIN, NOTCHED))
    with pytest.raises(ValueError):
        loop.tag_at("X")


def test_triangle_loop_radius():
    t = Triangle.self_folded("l", "r", "P")
    assert t.loop == "l" and t.radius == "r"
    o = Triangle.ordinary(("a", 1), ("b", 1), ("c", 1))
    with pytest.raises(ValueError):
        o.loop


def test_triangle_equality_up_to_rotation():
    t1 = Triangle.ordinary(("a", 1), ("b", -1), ("c", 1))
    t2 = Triangle.ordinary(("c", 1), ("a", 1), ("b", -1))
    t3 = Triangle.ordinary(("a", 1), ("c", 1), ("b", -1))
    assert t1 == t2 and hash(t1) == hash(t2)
    assert t1 != t3


def test_triangle_shape_checks():
    with pytest.raises(ValueError):
        Triangle("ordinary", (("a", 1), ("b", 1)))
    with pytest.raises(ValueError):
        Triangle("pending", (("a", 1), ("b", 1)))
    with pytest.raises(ValueError):
        Triangle("self_folded", (("l", 1), ("r", 1), ("r", -1)))  # no puncture


# ---------------------------------------------------------------------------
# validation


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_fixtures_validate(make):
    assert make().validate() == []


def test_duplicate_side_diagnostic():
    arcs = [
        Arc("g", "standard", ("A", "C")),
        Arc("e1", "boundary", ("A", "B")),
        Arc("e2", "boundary", ("B", "C")),
        Arc("e3", "boundary", ("C", "D")),
        Arc("e4", "boundary", ("D", "A")),
    ]
    tris = [
        Triangle.ordinary(("e1", 1), ("e2", 1), ("g", -1)),
        Triangle.ordinary(("g", 1), ("g", -1), ("e3", 1)),
    ]
    diag = Triangulation(arcs, tris).validate()
    assert any("repeated side" in m for m in diag)


def test_pending_distinct_endpoints_diagnostic():
    t = hexagon_orb()
    arcs = [a if a.label != "rho" else Arc("rho", "pending", ("M", "X"),
                                           orbifold_point="O", order=3)
            for a in t.arcs.values()]
    diag = Triangulation(arcs, t.triangles, orbifold_points={"O": 3}).validate()
    assert any("distinct endpoints" in m for m in diag)


def test_chain_break_diagnostic():
    t = hexagon_orb()
    tris = list(t.triangles)
    tris[2] = Triangle.ordinary(("a", 1), ("d", 1), ("c", -1))
    diag = Triangulation(t.arcs.values(), tris, orbifold_points={"O": 3}).validate()
    assert any("do not chain" in m for m in diag)


def test_notch_needs_puncture_diagnostic():
    t = pentagon()
    arcs = [a if a.label != "g1" else a.replaced(tags=(NOTCHED, PLAIN))
            for a in t.arcs.values()]
    diag = Triangulation(arcs, t.triangles).validate()
    assert any("non-puncture" in m for m in diag)


def test_boundary_notch_diagnostic():
    t = punctured_digon()
    arcs = [a if a.label != "s1" else a.replaced(tags=(NOTCHED, PLAIN))
            for a in t.arcs.values()]
    diag = Triangulation(arcs, t.triangles, punctures={"P"}).validate()
    assert any("may not be notched" in m for m in diag)


def test_mixed_tags_diagnostic():
    t = punctured_digon()
    arcs = [a if a.label != "r1" else a.replaced(tags=(PLAIN, NOTCHED))
            for a in t.arcs.values()]
    diag = Triangulation(arcs, t.triangles, punctures={"P"}).validate()
    assert any("inconsistent mix" in m for m in diag)


def test_small_order_rejected():
    diag = punctured_disk_orb(p=2).validate()
    assert any("order must be" in m for m in diag)


def test_orbifold_point_needs_pending_arc():
    t = pentagon()
    tri = Triangulation(t.arcs.values(), t.triangles, orbifold_points={"O": 3})
    assert any("without a pending arc" in m for m in tri.validate())


def test_radius_glued_outside_diagnostic():
    arcs = [
        Arc("r1", "standard", ("B", "P"), tags=(PLAIN, NOTCHED)),
        Arc("r2", "standard", ("B", "P")),
        Arc("s1", "boundary", ("A", "B")),
        Arc("s2", "boundary", ("B", "A")),
    ]
    tris = [
        Triangle.self_folded("r1", "r2", "P"),
        Triangle.ordinary(("s1", 1), ("r2", -1), ("s2", 1)),
    ]
    diag = Triangulation(arcs, tris, punctures={"P"}).validate()
    assert any("glued outside" in m for m in diag)


def test_require_valid_raises_with_diagnostics():
    bad = punctured_disk_orb(p=2)
    with pytest.raises(TriangulationError) as e:
        bad.require_valid()
    assert e.value.diagnostics


# ---------------------------------------------------------------------------
# exchange matrices


def test_hexagon_matrix_golden():
    t = hexagon_orb()
    assert t.interior_labels() == ("a", "b", "c", "d", "rho")
    want = np.array([
        [0, -1, 1, -1, 1],
        [1, 0, 0, 0, -1],
        [-1, 0, 0, 1, 0],
        [1, 0, -1, 0, 0],
        [-1, 1, 0, 0, 0],
    ])
    assert np.array_equal(t.exchange_matrix(), want)
    assert np.array_equal(np.diag(t.skew_symmetrizer()), [1, 1, 1, 1, 2])


def test_punctured_triangle_matrix():
    want = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    assert np.array_equal(punctured_triangle().exchange_matrix(), want)


def test_punctured_disk_orb_matrix():
    want = np.array([
        [0, 0, 1, 0],
        [0, 0, -1, 0],
        [-1, 1, 0, -1],
        [0, 0, 1, 0],
    ])
    assert np.array_equal(punctured_disk_orb().exchange_matrix(), want)


def test_digon_matrix_is_zero():
    assert np.array_equal(punctured_digon().exchange_matrix(), np.zeros((2, 2)))


def test_pentagon_matrix():
    assert np.array_equal(pentagon().exchange_matrix(), np.array([[0, 1], [-1, 0]]))


def test_all_boundary_triangle_gives_empty_matrix():
    arcs = [Arc("e1", "boundary", ("A", "B")),
            Arc("e2", "boundary", ("B", "C")),
            Arc("e3", "boundary", ("C", "A"))]
    t = Triangulation(arcs, [Triangle.ordinary(("e1", 1), ("e2", 1), ("e3", 1))])
    assert t.validate() == []
    assert t.exchange_matrix().shape == (0, 0)


def test_square_single_diagonal_gives_zero_matrix():
    arcs = [
        Arc("g", "standard", ("A", "C")),
        Arc("e1", "boundary", ("A", "B")),
        Arc("e2", "boundary", ("B", "C")),
        Arc("e3", "boundary", ("C", "D")),
        Arc("e4", "boundary", ("D", "A")),
    ]
    tris = [
        Triangle.ordinary(("e1", 1), ("e2", 1), ("g", -1)),
        Triangle.ordinary(("e3", 1), ("e4", 1), ("g", 1)),
    ]
    t = Triangulation(arcs, tris)
    assert t.validate() == []
    assert np.array_equal(t.exchange_matrix(), np.zeros((1, 1), dtype=int))


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_matrix_skew_symmetric(make):
    t = make()
    B = t.exchange_matrix()
    assert np.array_equal(B, -B.T)


def test_extended_matrix_stacks_boundary_and_identity():
    t = hexagon_orb()
    M = t.extended_exchange_matrix()
    assert M.shape == (16, 5)
    assert np.array_equal(M[:5], t.exchange_matrix())
    assert np.array_equal(M[5:11], t.boundary_exchange_rows())
    assert np.array_equal(M[11:], np.eye(5, dtype=int))


def test_boundary_rows_golden_hexagon():
    # hand count: each outer triangle presses its two boundary segments
    # against one chord, with opposite signs (columns a, b, c, d, rho)
    R = hexagon_orb().boundary_exchange_rows()
    want = np.array([
        [0, 1, 0, 0, 0],    # s1
        [0, -1, 0, 0, 0],   # s2
        [0, 0, 0, 1, 0],    # s3
        [0, 0, 0, -1, 0],   # s4
        [0, 0, 1, 0, 0],    # s5
        [0, 0, -1, 0, 0],   # s6
    ])
    assert np.array_equal(R, want)


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_flip_commutes_with_boundary_row_mutation(make):
    t = make()
    labels = t.interior_labels()
    n = len(labels)
    d = t.degree_vector()
    M = np.vstack([t.exchange_matrix(), t.boundary_exchange_rows()])
    for k, lab in enumerate(labels):
        t2 = t.flip(lab)
        M2 = mat_mutate(M, k, d)
        assert np.array_equal(t2.boundary_exchange_rows(), M2[n:]), lab


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_elementary_shear_is_identity(make):
    t = make()
    labels = t.interior_labels()
    rows = [t.elementary_lamination_shear(l) for l in labels]
    assert np.array_equal(np.array(rows), np.eye(len(labels), dtype=int))


def test_elementary_shear_rejects_boundary():
    with pytest.raises(ValueError):
        pentagon().elementary_lamination_shear("e1")


def test_var_table_reflects_structure():
    vt = hexagon_orb(p=5).var_table()
    assert vt.labels[:5] == ("a", "b", "c", "d", "rho")
    assert vt.is_boundary("s3") and not vt.is_boundary("a")
    assert vt.is_pending("rho") and vt.pending["rho"] == 5


# ---------------------------------------------------------------------------
# flips


def test_flip_boundary_rejected():
    with pytest.raises(FlipError):
        pentagon().flip("e1")


def test_flip_unknown_rejected():
    with pytest.raises(FlipError):
        pentagon().flip("nope")


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_flip_is_involution(make):
    t = make()
    for lab in t.interior_labels():
        assert t.flip(lab).flip(lab) == t, lab


@pytest.mark.parametrize("make", ALL_FIXTURES)
def test_flip_commutes_with_matrix_mutation(make):
    t = make()
    labels = t.interior_labels()
    d = t.degree_vector()
    B = t.exchange_matrix()
    for k, lab in enumerate(labels):
        t2 = t.flip(lab)
        assert t2.interior_labels() == labels
        assert np.array_equal(t2.degree_vector(), d)
        assert np.array_equal(t2.exchange_matrix(), mat_mutate(B, k, d)), lab


def test_pending_flip_moves_base():
    t = hexagon_orb()
    t2 = t.flip("rho")
    rho = t2.arcs["rho"]
    assert rho.kind == "pending" and rho.endpoints == ("X", "X")
    assert Triangle.monogon("rho") in t2.triangles
    assert t2.flip("rho") == t


def test_flip_creates_self_folded_pair():
    t = punctured_disk_orb()
    t2 = t.flip("r1")
    sf = [x for x in t2.triangles if x.kind == "self_folded"]
    assert len(sf) == 1
    assert sf[0].loop == "r1" and sf[0].radius == "r2" and sf[0].puncture == "P"
    r1 = t2.arcs["r1"]
    assert set(r1.endpoints) == {"W", "P"} and r1.tag_at("P") == NOTCHED
    assert t2.arcs["r2"].tag_at("P") == PLAIN
    assert t2.var_table().companions == {"r2": "r1"}


def test_radius_flip_reaches_fully_notched_state():
    t2 = punctured_disk_orb().flip("r1")
    t3 = t2.flip("r2")
    assert all(x.kind != "self_folded" for x in t3.triangles)
    assert t3.arcs["r1"].tag_at("P") == NOTCHED
    assert t3.arcs["r2"].tag_at("P") == NOTCHED
    assert set(t3.arcs["r2"].endpoints) == {"V", "P"}
    assert t3.flip("r2") == t2


def walk(t, path):
    """Flip along path, checking matrix mutation at every step."""
    labels = t.interior_labels()
    n = len(labels)
    M = np.vstack([t.exchange_matrix(), np.eye(n, dtype=int)])
    d = t.degree_vector()
    for lab in path:
        M = mat_mutate(M, labels.index(lab), d)
        t = t.flip(lab)
        assert np.array_equal(t.exchange_matrix(), M[:n]), lab
    return t, M


def test_digon_four_cycle_returns_exactly():
    t = punctured_digon()
    end, M = walk(t, ["r1", "r2", "r1", "r2"])
    assert end == t
    assert np.array_equal(M[2:], np.eye(2, dtype=int))
    mid = t.flip("r1")
    sf = [x for x in mid.triangles if x.kind == "self_folded"]
    assert len(sf) == 1 and sf[0].radius == "r2"


def test_pentagon_five_cycle_swaps_labels():
    t = pentagon()
    end, M = walk(t, ["g1", "g2", "g1", "g2", "g1"])
    swap = np.array([[0, 1], [1, 0]])
    assert np.array_equal(M[2:], swap)
    arcs = [
        Arc("g1", "standard", ("P1", "P4")),
        Arc("g2", "standard", ("P1", "P3")),
        Arc("e1", "boundary", ("P1", "P2")),
        Arc("e2", "boundary", ("P2", "P3")),
        Arc("e3", "boundary", ("P3", "P4")),
        Arc("e4", "boundary", ("P4", "P5")),
        Arc("e5", "boundary", ("P5", "P1")),
    ]
    tris = [
        Triangle.ordinary(("e1", 1), ("e2", 1), ("g2", -1)),
        Triangle.ordinary(("g2", 1), ("e3", 1), ("g1", -1)),
        Triangle.ordinary(("g1", 1), ("e4", 1), ("e5", 1)),
    ]
    assert end == Triangulation(arcs, tris)


def test_punctured_disk_deep_walks():
    t = punctured_disk_orb()
    end, _ = walk(t, ["r1", "r2", "h", "h", "r2", "r1"])
    assert end == t
    end, _ = walk(t, ["rho", "h", "r1", "r1", "h", "rho"])
    assert end == t


def test_pending_flip_onto_notched_puncture_rejected():
    t, _ = walk(punctured_disk_orb(), ["r1", "r2", "h"])
    # the enclosing bigon of rho now has its far corner at the fully
    # notched puncture, where a plain pending end cannot live
    with pytest.raises(FlipError):
        t.flip("rho")


def test_punctured_triangle_loop_creation():
    t = punctured_triangle()
    t2 = t.flip("ra").flip("rb")
    sf = [x for x in t2.triangles if x.kind == "self_folded"]
    assert len(sf) == 1 and sf[0].radius == "rc" and sf[0].puncture == "P"
    assert t2.flip("rb").flip("ra") == t


def test_ideal_endpoints_of_loop():
    t2 = punctured_disk_orb().flip("r1")
    assert t2.ideal_endpoints("r1") == ("W", "W")
    assert t2.ideal_endpoints("r2") in (("W", "P"), ("P", "W"))
