"""Arrangement construction, face topology, and point location."""

from fractions import Fraction

import pytest

from contactgeom.arrangement import (boundary_edge_cycle, build_arrangement,
                                     build_mixed_arrangement, cells_of_pair,
                                     chain_point, curve_portion, locate_cell,
                                     pair_arrangement, split_arcs_by_pair,
                                     split_curve_at)
from contactgeom.errors import OnCurveError
from contactgeom.geometry import Curve, CurveFamily, pt
from contactgeom.generators import GeneratorSpec, generate

import oracles

F = Fraction


def sq(cid, x, y, r=2):
    return Curve(id=cid, points=(pt(x - r, y - r), pt(x + r, y - r),
                                 pt(x + r, y + r), pt(x - r, y + r)),
                 closed=True)


def components(curves):
    """Connected components of the union, from the reference contacts."""
    fam = CurveFamily(curves=tuple(curves), m=50)
    parent = {c.id: c.id for c in curves}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in oracles.family_contacts(fam):
        parent[find(i)] = find(j)
    return len({find(c.id) for c in curves})


def euler_holds(arr, curves):
    return arr.V - arr.E + arr.F == 1 + components(curves)


def test_single_closed_curve_topology():
    arr = build_mixed_arrangement([sq(1, 0, 0)])
    assert (arr.V, arr.E, arr.F) == (1, 1, 2)
    assert euler_holds(arr, [sq(1, 0, 0)])
    assert locate_cell(arr, pt(0, 0)) != locate_cell(arr, pt(9, 9))
    assert locate_cell(arr, pt(9, 9)) == arr.unbounded_face_id


def test_two_crossing_squares_topology():
    curves = [sq(1, 0, 0), sq(2, 2, 2)]
    arr = build_mixed_arrangement(curves)
    assert (arr.V, arr.E, arr.F) == (2, 4, 4)
    assert euler_holds(arr, curves)
    lens = locate_cell(arr, pt(1, 1))
    assert arr.faces[lens].interior is not None
    assert arr.faces[lens].depth > 0
    # four faces, four distinct probe answers
    probes = [pt(1, 1), pt(-1, -1), pt(3, 3), pt(9, 9)]
    assert len({locate_cell(arr, p) for p in probes}) == 4


def test_disjoint_curves_topology():
    curves = [sq(1, 0, 0), sq(2, 20, 0)]
    arr = build_mixed_arrangement(curves)
    assert arr.F == 3
    assert euler_holds(arr, curves)


def test_locate_cell_rejects_boundary_points():
    arr = build_mixed_arrangement([sq(1, 0, 0)])
    with pytest.raises(OnCurveError):
        locate_cell(arr, pt(2, 0))
    with pytest.raises(OnCurveError):
        locate_cell(arr, pt(2, 2))       # vertex


def test_boundary_walks_cover_every_half_edge_once():
    curves = [sq(1, 0, 0), sq(2, 2, 2), sq(3, 30, 0)]
    arr = build_mixed_arrangement(curves)
    seen = []
    for f in range(arr.F):
        for walk in boundary_edge_cycle(arr, f):
            seen.extend(walk)
    assert sorted(seen) == sorted(h.id for h in arr.half_edges)
    assert len(seen) == len(set(seen))


def test_twins_are_involutive_and_opposite():
    arr = build_mixed_arrangement([sq(1, 0, 0), sq(2, 2, 2)])
    for h in arr.half_edges:
        tw = arr.half_edges[h.twin]
        assert tw.twin == h.id
        assert (h.origin, h.target) == (tw.target, tw.origin)
        assert h.curve == tw.curve


def test_euler_on_generated_families():
    for kind, n, seed in (("UnitCirclesGrid", 9, 1), ("TangentChain", 7, 2),
                          ("RandomCircles", 8, 3), ("PseudoParabolas", 6, 4)):
        fam = generate(GeneratorSpec(kind=kind, n=n, m=2, seed=seed))
        arr = build_arrangement(fam)
        assert euler_holds(arr, fam.curves), (kind, n, seed)


def test_locate_cell_constant_on_raster_regions():
    fam = generate(GeneratorSpec(kind="RandomCircles", n=5, m=2, seed=6))
    arr = build_arrangement(fam)
    raster = oracles.Raster(fam.curves, k=20)
    region_face = {}
    checked = 0
    for p, region in raster.probes(300):
        try:
            f = locate_cell(arr, p)
        except OnCurveError:
            continue
        checked += 1
        if region in region_face:
            assert region_face[region] == f
        else:
            region_face[region] = f
    assert checked >= 100
    assert len(region_face) >= 2


def test_cells_of_pair_counts():
    fam = CurveFamily(curves=(sq(1, 0, 0), sq(2, 2, 2)), m=2)
    cells = cells_of_pair(fam, 1, 2)
    assert len(cells) == 4               # lens, two crescents, outside
    fam2 = generate(GeneratorSpec(kind="TangentChain", n=4, m=1, seed=1))
    cells = cells_of_pair(fam2, 1, 2)
    assert len(cells) <= fam2.m + 2


def test_chain_point_and_portion():
    c = sq(1, 0, 0)
    assert chain_point(c, F(0)) == pt(-2, -2)
    assert chain_point(c, F(1, 2)) == pt(0, -2)
    assert chain_point(c, F(3)) == pt(-2, 2)
    portion = curve_portion(c, F(1, 2), F(2))
    assert portion[0] == pt(0, -2) and portion[-1] == pt(2, 2)
    assert split_curve_at(c, [F(1, 2), F(2)]) == [
        (F(1, 2), F(2)), (F(2), F(9, 2))]


def test_split_arcs_by_pair_on_chain():
    fam = generate(GeneratorSpec(kind="TangentChain", n=6, m=1, seed=1))
    arr = pair_arrangement(fam, 2, 5)
    subs = split_arcs_by_pair(fam, 2, 5, {1, 3}, {4, 6},
                              arr.unbounded_face_id)
    assert {sa.parent for sa in subs} == {1, 3, 4, 6}
    # chain neighbours never cross the ground pair, so arcs stay whole
    for sa in subs:
        assert sa.geometry.closed
        assert sa.endpoint_kinds == ()
    # sub-arc ids are renumbered densely
    assert sorted(sa.geometry.id for sa in subs) == list(range(len(subs)))
