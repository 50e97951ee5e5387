"""Pairwise contact classification against the recomputed reference."""

import pytest
from fractions import Fraction

from contactgeom.errors import DegeneracyError
from contactgeom.geometry import Curve, CurveFamily, pt
from contactgeom.generators import GeneratorSpec, generate
from contactgeom.incidence import (compute_incidences, curve_pair_incidences,
                                   is_touching_pair,
                                   validate_general_position)

import oracles

F = Fraction


def square(cid, x, y, r=2, closed=True):
    return Curve(id=cid, points=(pt(x - r, y - r), pt(x + r, y - r),
                                 pt(x + r, y + r), pt(x - r, y + r)),
                 closed=closed)


def diamond(cid, x, y, r=2):
    return Curve(id=cid, points=(pt(x - r, y), pt(x, y - r),
                                 pt(x + r, y), pt(x, y + r)), closed=True)


def test_crossing_pair_two_proper_points():
    a = square(1, 0, 0)
    b = square(2, 2, 2)
    incs = curve_pair_incidences(a, b)
    assert len(incs) == 2
    assert all(x.kind == "crossing" for x in incs)
    assert {x.point for x in incs} == {pt(0, 2), pt(2, 0)}


def test_tangency_at_shared_vertex():
    # diamonds meeting tip to tip: one common point, same side wedges
    a = diamond(1, 0, 0)
    b = diamond(2, 4, 0)
    incs = curve_pair_incidences(a, b)
    assert len(incs) == 1
    assert incs[0].kind == "tangency"
    assert incs[0].point == pt(2, 0)
    assert is_touching_pair(a, b)


def test_vertex_resting_on_edge_interior_rejected():
    # contacts must be proper interior crossings or shared vertices
    a = square(1, 0, 0)
    b = diamond(2, 4, 0)
    with pytest.raises(DegeneracyError):
        curve_pair_incidences(a, b)


def test_open_arc_crossing_and_tangency():
    base = Curve(id=1, points=(pt(-4, 0), pt(0, 0), pt(4, 1)), closed=False)
    vee = Curve(id=2, points=(pt(-2, 2), pt(0, 0), pt(2, 2)), closed=False)
    incs = curve_pair_incidences(base, vee)
    assert [x.kind for x in incs] == ["tangency"]
    slash = Curve(id=3, points=(pt(1, -1), pt(3, 1)), closed=False)
    incs = curve_pair_incidences(base, slash)
    assert [x.kind for x in incs] == ["crossing"]
    assert incs[0].point == pt("8/3", "2/3")


def test_incidence_pattern_only_at_shared_vertices():
    a = square(1, 0, 0)
    b = square(2, 2, 2)
    for x in curve_pair_incidences(a, b):
        assert {x.a, x.b} == {1, 2}
        assert x.pattern is None         # interior crossings carry no rays
    tip = curve_pair_incidences(diamond(1, 0, 0), diamond(2, 4, 0))[0]
    assert sorted(tip.pattern) == ["A", "A", "B", "B"]


def test_overlapping_edges_rejected_in_strict_mode():
    a = square(1, 0, 0)
    shifted = Curve(id=2, points=(pt(0, -2), pt(4, -2), pt(4, 2), pt(0, 2)),
                    closed=True)
    with pytest.raises(DegeneracyError):
        curve_pair_incidences(a, shifted)


def test_endpoint_contact_rejected_in_strict_mode():
    base = Curve(id=1, points=(pt(-4, 0), pt(4, 0)), closed=False)
    stub = Curve(id=2, points=(pt(0, 0), pt(0, 3)), closed=False)
    with pytest.raises(DegeneracyError):
        curve_pair_incidences(base, stub)


def test_family_incidences_totals():
    fam = CurveFamily(curves=(diamond(1, 0, 0), diamond(2, 4, 0),
                              diamond(3, 8, 0), square(4, 2, 6)), m=2)
    fi = compute_incidences(fam)
    table = oracles.family_contacts(fam)
    want_T = sum(1 for v in table.values()
                 if len(v) == 1 and v[0][1] == "tangency")
    want_X = sum(len(v) for v in table.values())
    assert fi.T == want_T
    assert fi.X == want_X
    assert fi.crossing_count == sum(
        1 for v in table.values() for _, kind in v if kind == "crossing")


@pytest.mark.parametrize("kind,n,seed", [
    ("UnitCirclesGrid", 9, 1),
    ("TangentChain", 6, 2),
    ("RandomCircles", 7, 3),
    ("PseudoParabolas", 6, 4),
    ("PerturbedPencil", 5, 5),
])
def test_generated_families_match_reference(kind, n, seed):
    fam = generate(GeneratorSpec(kind=kind, n=n, m=2, seed=seed))
    fi = compute_incidences(fam)
    table = oracles.family_contacts(fam)
    got = {}
    for (i, j), incs in fi.pairs.items():
        got[(i, j)] = sorted(((x.point.x, x.point.y), x.kind) for x in incs)
    assert got == table


def test_validate_general_position_accepts_generated():
    fam = generate(GeneratorSpec(kind="RandomCircles", n=6, m=2, seed=11))
    rep = validate_general_position(fam)
    assert rep.ok and not rep.violations


def test_validate_flags_triple_point():
    # three lines through the origin
    fam = CurveFamily(curves=(
        Curve(id=1, points=(pt(-3, 0), pt(3, 0)), closed=False),
        Curve(id=2, points=(pt(0, -3), pt(0, 3)), closed=False),
        Curve(id=3, points=(pt(-3, -3), pt(3, 3)), closed=False)), m=3)
    rep = validate_general_position(fam)
    assert not rep.ok
    assert any(v.kind == "triple_point" for v in rep.violations)


def test_validate_flags_intersection_budget():
    # two squares crossing twice exceed an m=1 budget
    fam = CurveFamily(curves=(square(1, 0, 0), square(2, 2, 2)), m=1)
    rep = validate_general_position(fam)
    assert not rep.ok
    assert any(v.kind == "intersection_budget" for v in rep.violations)
