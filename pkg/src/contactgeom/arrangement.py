"""Planar arrangement of a curve set as a half-edge structure.

Vertices are contact points, arc endpoints, and one anchor per otherwise
vertex-free closed curve. Edges are the curve portions between consecutive
vertices along each curve. Face cycles keep their face on the LEFT of the
walk direction; the boundary_edge_cycle query re-orients walks so the face
interior is on the right, matching the tracing convention the signature
machinery needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import DegeneracyError, OnCurveError, PreconditionError
from .geometry import (Curve, CurveFamily, Point, midpoint, on_segment,
                       pseudo_angle_key, signed_area2, winding_parity)
from .incidence import (FamilyIncidences, compute_incidences,
                        curve_pair_incidences, mixed_contacts)


def chain_point(c: Curve, s: Fraction) -> Point:
    """Point at chain parameter s (segment index + in-segment fraction)."""
    n = c.n_segments
    if c.closed:
        s = s % n
    elif s == n:
        return c.points[-1]
    k = int(s)
    return c.point_at(k, s - k)


def curve_portion(c: Curve, s0: Fraction, s1: Fraction) -> Tuple[Point, ...]:
    """Polyline of c from parameter s0 to s1 (s0 < s1; for closed curves s1
    may wrap past the segment count by at most one full turn)."""
    if not s0 < s1:
        raise ValueError("need s0 < s1")
    pts = [chain_point(c, s0)]
    nv = len(c.points)
    k = int(s0) + 1
    while k < s1:
        pts.append(c.points[k % nv] if c.closed else c.points[k])
        k += 1
    pts.append(chain_point(c, s1))
    return tuple(pts)


def split_curve_at(c: Curve, params: Sequence[Fraction]) -> List[Tuple[Fraction, Fraction]]:
    """Chain-parameter intervals of the pieces of c cut at params.

    Open: pieces cover [0, n_seg]. Closed with k >= 1 cuts: k wrap-around
    intervals; the piece spanning the seam has hi = lo' + n_seg.
    """
    ps = sorted(set(params))
    n = Fraction(c.n_segments)
    if c.closed:
        if not ps:
            return [(Fraction(0), n)]
        out = []
        for i, lo in enumerate(ps):
            hi = ps[i + 1] if i + 1 < len(ps) else ps[0] + n
            out.append((lo, hi))
        return out
    bounds = [Fraction(0)] + [p for p in ps if 0 < p < n] + [n]
    return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


@dataclass(frozen=True)
class ArrVertex:
    id: int
    point: Point
    out: Tuple[int, ...]  # outgoing half-edge ids, CCW by exact pseudo-angle


@dataclass
class HalfEdge:
    id: int
    origin: int
    target: int
    twin: int
    curve: int
    geometry: Tuple[Point, ...]  # oriented origin -> target
    next: int = -1
    face: int = -1


@dataclass(frozen=True)
class Face:
    id: int
    cycles: Tuple[Tuple[int, ...], ...]  # half-edge cycles, face on left
    outer_index: Optional[int]  # which cycle is the outer one; None if unbounded
    depth: int
    interior: Optional[Point] = None  # a point strictly inside (bounded faces)


class Arrangement:
    """Immutable after construction; all queries are read-only."""

    def __init__(self, curves, vertices, half_edges, faces, components,
                 cycle_polygons):
        self.curves: Tuple[Curve, ...] = tuple(curves)
        self.vertices: List[ArrVertex] = vertices
        self.half_edges: List[HalfEdge] = half_edges
        self.faces: List[Face] = faces
        self.unbounded_face_id = 0
        self.components = components
        self._cycle_polygons: Dict[Tuple[int, ...], Tuple[Point, ...]] = cycle_polygons

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.half_edges) // 2

    @property
    def F(self) -> int:
        return len(self.faces)

    def euler_defect(self) -> int:
        """V - E + F - (1 + C); zero on every well-formed arrangement."""
        return self.V - self.E + self.F - (1 + self.components)

    def cycle_polygon(self, cycle: Tuple[int, ...]) -> Tuple[Point, ...]:
        return self._cycle_polygons[cycle]

    def face(self, fid: int) -> Face:
        return self.faces[fid]

    def half_edges_of_curve(self, cid: int) -> List[HalfEdge]:
        return [h for h in self.half_edges if h.curve == cid]

    def curve_by_id(self, cid: int) -> Curve:
        for c in self.curves:
            if c.id == cid:
                return c
        raise KeyError(cid)


def _assemble(curves: Sequence[Curve], fi: FamilyIncidences) -> Arrangement:
    curves = tuple(curves)
    by_id = {c.id: c for c in curves}

    # chain parameters carrying a vertex, per curve
    params: Dict[int, List[Fraction]] = {}
    param_points: Dict[int, Dict[Fraction, Point]] = {}
    for c in curves:
        got: Dict[Fraction, Point] = {}
        for inc in fi.on_curve(c.id):
            got[inc.s_on(c.id)] = inc.point
        if not c.closed:
            got.setdefault(Fraction(0), c.points[0])
            got.setdefault(Fraction(c.n_segments), c.points[-1])
        elif not got:
            got[Fraction(0)] = c.points[0]  # anchor for a free-floating loop
        params[c.id] = sorted(got)
        param_points[c.id] = got

    # vertex table, ordered by point for determinism
    all_points = sorted({p for pts in param_points.values() for p in pts.values()},
                        key=lambda p: (p.x, p.y))
    vid_of: Dict[Point, int] = {p: i for i, p in enumerate(all_points)}

    half_edges: List[HalfEdge] = []
    for c in curves:
        ps = params[c.id]
        if c.closed:
            pairs = [(ps[i], ps[i + 1] if i + 1 < len(ps) else ps[0] + c.n_segments)
                     for i in range(len(ps))]
        else:
            pairs = [(ps[i], ps[i + 1]) for i in range(len(ps) - 1)]
        for s0, s1 in pairs:
            geom = curve_portion(c, s0, s1)
            a = vid_of[param_points[c.id][s0]]
            b_param = s1 - c.n_segments if (c.closed and s1 >= c.n_segments and
                                            s1 - c.n_segments in param_points[c.id]) else s1
            b = vid_of[param_points[c.id][b_param]]
            hf = HalfEdge(id=len(half_edges), origin=a, target=b,
                          twin=len(half_edges) + 1, curve=c.id, geometry=geom)
            hb = HalfEdge(id=len(half_edges) + 1, origin=b, target=a,
                          twin=len(half_edges), curve=c.id,
                          geometry=tuple(reversed(geom)))
            half_edges.extend([hf, hb])

    # rotation order at each vertex
    out_at: Dict[int, List[int]] = {i: [] for i in range(len(all_points))}
    for h in half_edges:
        out_at[h.origin].append(h.id)
    vertices: List[ArrVertex] = []
    for vid, p in enumerate(all_points):
        hs = out_at[vid]

        def angle(hid):
            g = half_edges[hid].geometry
            return pseudo_angle_key(g[1].x - g[0].x, g[1].y - g[0].y)

        keys = {}
        for hid in hs:
            k = angle(hid)
            if k in keys:
                raise DegeneracyError(
                    f"coincident edge directions at vertex {p}")
            keys[hid] = k
        hs_sorted = tuple(sorted(hs, key=lambda hid: keys[hid]))
        vertices.append(ArrVertex(id=vid, point=p, out=hs_sorted))

    # next pointers: continue the face-on-left walk
    for h in half_edges:
        v = vertices[h.target]
        idx = v.out.index(h.twin)
        h.next = v.out[idx - 1]

    # face cycles
    cycles: List[Tuple[int, ...]] = []
    seen = [False] * len(half_edges)
    for h in half_edges:
        if seen[h.id]:
            continue
        cyc = []
        cur = h.id
        while not seen[cur]:
            seen[cur] = True
            cyc.append(cur)
            cur = half_edges[cur].next
        cycles.append(tuple(cyc))

    polygons: Dict[Tuple[int, ...], Tuple[Point, ...]] = {}
    areas: Dict[Tuple[int, ...], Fraction] = {}
    for cyc in cycles:
        poly: List[Point] = []
        for hid in cyc:
            poly.extend(half_edges[hid].geometry[:-1])
        polygons[cyc] = tuple(poly)
        areas[cyc] = signed_area2(poly)

    outers = [cyc for cyc in cycles if areas[cyc] > 0]
    inners = [cyc for cyc in cycles if areas[cyc] <= 0]

    def probe(cyc) -> Point:
        poly = polygons[cyc]
        return midpoint(poly[0], poly[1 % len(poly)])

    # attach every inner cycle to the smallest outer cycle strictly around it
    holes_of: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {o: [] for o in outers}
    orphan: List[Tuple[int, ...]] = []
    for cyc in inners:
        q = probe(cyc)
        best = None
        for o in outers:
            if winding_parity(q, polygons[o]):
                if best is None or areas[o] < areas[best]:
                    best = o
        if best is None:
            orphan.append(cyc)
        else:
            holes_of[best].append(cyc)

    def interior_point(o, holes) -> Point:
        g = half_edges[o[0]].geometry
        a, b = g[0], g[1]
        mid = midpoint(a, b)
        nx, ny = a.y - b.y, b.x - a.x  # left normal, where the face lies
        eps = Fraction(1, 2)
        for _ in range(256):
            q = Point(mid.x + eps * nx, mid.y + eps * ny)
            if (not any(c.contains_point(q) for c in curves)
                    and winding_parity(q, polygons[o])
                    and not any(winding_parity(q, polygons[h]) for h in holes)):
                return q
            eps /= 2
        raise AssertionError("interior probe did not converge")

    faces: List[Face] = []
    orphan.sort(key=min)
    faces.append(Face(id=0, cycles=tuple(orphan), outer_index=None, depth=0))
    for o in sorted(outers, key=min):
        holes = sorted(holes_of[o], key=min)
        q = interior_point(o, holes)
        depth = 1 + sum(1 for o2 in outers
                        if o2 is not o and winding_parity(q, polygons[o2]))
        faces.append(Face(id=len(faces), cycles=(o,) + tuple(holes),
                          outer_index=0, depth=depth, interior=q))

    for f in faces:
        for cyc in f.cycles:
            for hid in cyc:
                half_edges[hid].face = f.id

    # connected components of the curve union
    root: Dict[int, int] = {c.id: c.id for c in curves}

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    owners_at: Dict[Point, List[int]] = {}
    for cid, got in param_points.items():
        for p in got.values():
            owners_at.setdefault(p, []).append(cid)
    for ids in owners_at.values():
        for other in ids[1:]:
            root[find(ids[0])] = find(other)
    components = len({find(c.id) for c in curves})

    return Arrangement(curves, vertices, half_edges, faces, components, polygons)


def build_arrangement(family: CurveFamily) -> Arrangement:
    """Arrangement of a validated family (strict contact model)."""
    return _assemble(family.curves, compute_incidences(family))


def build_mixed_arrangement(curves: Sequence[Curve]) -> Arrangement:
    """Arrangement of an ad-hoc curve set; open-arc endpoints may rest on
    other curves (T-joints become degree-3 vertices)."""
    return _assemble(curves, mixed_contacts(curves))


def pair_arrangement(family: CurveFamily, i: int, j: int) -> Arrangement:
    a, b = family.curve(i), family.curve(j)
    sub = CurveFamily(curves=(a, b), m=family.m)
    return _assemble(sub.curves, compute_incidences(sub))


def cells_of_pair(family: CurveFamily, i: int, j: int) -> List[Face]:
    """Faces of the two-curve arrangement. For a closed-closed pair the count
    is at most m+2; open-arc pairs are measured, not constrained."""
    arr = pair_arrangement(family, i, j)
    a, b = family.curve(i), family.curve(j)
    if a.closed and b.closed:
        assert arr.F <= family.m + 2, (
            f"pair ({i},{j}): {arr.F} cells exceeds m+2={family.m + 2}")
    return list(arr.faces)


def locate_cell(arr: Arrangement, p: Point) -> int:
    """Face id containing p; OnCurveError when p lies on a curve."""
    for c in arr.curves:
        if c.contains_point(p):
            raise OnCurveError(f"point {p} lies on curve {c.id}")
    hit = None
    for f in arr.faces:
        if f.outer_index is None:
            continue
        outer = f.cycles[f.outer_index]
        if not winding_parity(p, arr.cycle_polygon(outer)):
            continue
        if any(winding_parity(p, arr.cycle_polygon(cyc))
               for k, cyc in enumerate(f.cycles) if k != f.outer_index):
            continue
        assert hit is None, "point claimed by two faces"
        hit = f.id
    return arr.unbounded_face_id if hit is None else hit


def boundary_edge_cycle(arr: Arrangement, face_id: int) -> Tuple[Tuple[int, ...], ...]:
    """Boundary walks of a face with the interior kept on the RIGHT.

    Labels are the face's own half-edge ids; an edge bordering the face on
    both sides contributes two labels. One tuple per boundary component
    (simply bounded faces yield exactly one).
    """
    f = arr.faces[face_id]
    return tuple(tuple(reversed(cyc)) for cyc in f.cycles)


def point_param_on_half_edge(arr: Arrangement, hid: int, p: Point) -> Optional[Fraction]:
    """Chain parameter of p along the half-edge's stored geometry, or None."""
    g = arr.half_edges[hid].geometry
    for k in range(len(g) - 1):
        a, b = g[k], g[k + 1]
        if on_segment(p, a, b):
            if b.x != a.x:
                t = Fraction(p.x - a.x, 1) / (b.x - a.x)
            else:
                t = Fraction(p.y - a.y, 1) / (b.y - a.y)
            return k + t
    return None


@dataclass(frozen=True)
class SubArc:
    """A contiguous piece of a parent curve cut at its contacts with the
    ground pair. endpoint_kinds matches geometry.endpoints ('on_boundary'
    or 'free'); a closed-loop piece has no endpoints and records its single
    boundary contact in cut_points."""
    parent: int
    geometry: Curve
    endpoint_kinds: Tuple[str, ...]
    cut_points: Tuple[Point, ...]
    interval: Tuple[Fraction, Fraction]

    @property
    def free_end_count(self) -> int:
        return sum(1 for k in self.endpoint_kinds if k == "free")


def split_arcs_by_pair(family: CurveFamily, i: int, j: int,
                       A: Set[int], B: Set[int], cell: int) -> List[SubArc]:
    """Cut every curve of A and B at its contacts with the ground pair and
    keep the pieces lying inside the closure of the given cell."""
    gi, gj = family.curve(i), family.curve(j)
    arr = pair_arrangement(family, i, j)
    if cell < 0 or cell >= arr.F:
        raise PreconditionError(f"no face {cell} in the pair arrangement")

    out: List[SubArc] = []
    next_id = 0
    for cid in sorted(set(A) | set(B)):
        if cid in (i, j):
            raise PreconditionError("ground curves cannot be split members")
        c = family.curve(cid)
        ground = gi if cid in A else gj
        incs_g = curve_pair_incidences(c, ground)
        if not (len(incs_g) == 1 and incs_g[0].kind == "tangency"):
            raise PreconditionError(
                f"curve {cid} does not touch its ground curve {ground.id}")
        cuts: Dict[Fraction, Point] = {}
        for g in (gi, gj):
            for inc in curve_pair_incidences(c, g):
                cuts[inc.s_on(cid)] = inc.point
        for lo, hi in split_curve_at(c, list(cuts)):
            loop = c.closed and hi - lo == c.n_segments
            mid = (lo + hi) / 2
            probe = chain_point(c, mid)
            try:
                where = locate_cell(arr, probe)
            except OnCurveError:
                raise DegeneracyError(
                    f"curve {cid} runs along the ground pair") from None
            if where != cell:
                continue
            if loop:
                shift = int(lo)
                assert lo == shift, "loop piece must start at a polyline vertex"
                pts = c.points[shift:] + c.points[:shift]
                geom = Curve(id=next_id, points=pts, closed=True)
                kinds: Tuple[str, ...] = ()
                cut_pts = (cuts[lo],) if lo in cuts else ()
            else:
                geom = Curve(id=next_id, points=curve_portion(c, lo, hi),
                             closed=False)
                hi_n = hi % c.n_segments if c.closed else hi
                kinds = tuple("on_boundary" if s in cuts else "free"
                              for s in (lo, hi_n))
                cut_pts = tuple(cuts[s] for s in (lo, hi_n) if s in cuts)
            out.append(SubArc(parent=cid, geometry=geom, endpoint_kinds=kinds,
                              cut_points=cut_pts, interval=(lo, hi)))
            next_id += 1
    return out


def dump_arrangement(arr: Arrangement) -> str:
    lines = ["VERTICES"]
    for v in arr.vertices:
        lines.append(f"{v.id} {v.point.x} {v.point.y}")
    lines.append("HALFEDGES")
    for h in arr.half_edges:
        lines.append(f"{h.id} origin={h.origin} twin={h.twin} next={h.next} "
                     f"curve={h.curve} face={h.face}")
    lines.append("FACES")
    for f in arr.faces:
        cyc = ";".join(",".join(str(h) for h in c) for c in f.cycles)
        lines.append(f"{f.id} depth={f.depth} cycles={cyc}")
    return "\n".join(lines) + "\n"
