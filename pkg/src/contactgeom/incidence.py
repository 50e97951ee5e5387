"""Pairwise contact detection, classification, and family validation.

Two operating modes share one engine:

* ``strict``: the family model. Curves meet only in proper crossings of
  segment interiors or at shared polyline vertices where the four outgoing
  directions alternate (crossing) or do not (tangency). Everything else is
  a violation.
* ``arrangement``: additionally admits open-curve endpoints resting on
  another curve (``tjoint``) and shared endpoints of two open curves
  (``joint``). Needed when sub-arcs cut from family curves are assembled
  into an arrangement together with intact curves.

All computation happens on integer-scaled coordinates, so every predicate
is an exact integer sign test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegeneracyError, EndpointError, ValidationError
from .geometry import Curve, CurveFamily, Point, coordinate_scale, pseudo_angle_key


@dataclass(frozen=True)
class Incidence:
    """One contact point between two curves.

    kind is "crossing" or "tangency" in the strict model; arrangement mode
    adds "tjoint" and "joint". s_a and s_b are chain parameters along each
    curve: segment index plus in-segment fraction, so integral values are
    polyline vertices.
    """
    kind: str
    point: Point
    a: int
    b: int
    s_a: Fraction
    s_b: Fraction
    pattern: Optional[str] = None

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def s_on(self, cid: int) -> Fraction:
        if cid == self.a:
            return self.s_a
        if cid == self.b:
            return self.s_b
        raise KeyError(cid)

    def other(self, cid: int) -> int:
        if cid == self.a:
            return self.b
        if cid == self.b:
            return self.a
        raise KeyError(cid)


@dataclass(frozen=True)
class Violation:
    kind: str
    curves: Tuple[int, ...]
    point: Optional[Point]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    n: int
    m: int
    violations: Tuple[Violation, ...]

    def kinds(self) -> Tuple[str, ...]:
        return tuple(sorted({v.kind for v in self.violations}))


VIOLATION_KINDS = (
    "self_intersection",
    "overlap",
    "degenerate_contact",
    "endpoint_contact",
    "triple_point",
    "intersection_budget",
)


class _ScaledCurve:
    """Integer-coordinate view of a curve plus lookup tables."""

    __slots__ = ("curve", "pts", "nseg", "closed", "vmap", "segbox", "box")

    def __init__(self, curve: Curve, scale: int):
        self.curve = curve
        pts = []
        for p in curve.points:
            x = p.x * scale
            y = p.y * scale
            if x.denominator != 1 or y.denominator != 1:
                raise ValueError("scale does not clear coordinate denominators")
            pts.append((x.numerator, y.numerator))
        self.pts = pts
        self.closed = curve.closed
        self.nseg = curve.n_segments
        vmap: Dict[Tuple[int, int], int] = {}
        for k, q in enumerate(pts):
            vmap.setdefault(q, k)
        self.vmap = vmap
        boxes = []
        for i in range(self.nseg):
            (ax, ay), (bx, by) = self.seg(i)
            boxes.append((min(ax, bx), min(ay, by), max(ax, bx), max(ay, by)))
        self.segbox = boxes
        self.box = (
            min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes),
        )

    def seg(self, i: int):
        pts = self.pts
        return pts[i], pts[(i + 1) % len(pts)]

    def is_endpoint_vertex(self, k: int) -> bool:
        return (not self.closed) and (k == 0 or k == len(self.pts) - 1)

    def vertex_directions(self, k: int):
        """Outgoing integer directions at vertex k (1 for open endpoints,
        2 for interior vertices)."""
        pts = self.pts
        n = len(pts)
        vx, vy = pts[k]
        out = []
        if self.closed:
            nbrs = [pts[(k + 1) % n], pts[(k - 1) % n]]
        else:
            nbrs = []
            if k + 1 < n:
                nbrs.append(pts[k + 1])
            if k - 1 >= 0:
                nbrs.append(pts[k - 1])
        for nx, ny in nbrs:
            out.append((nx - vx, ny - vy))
        return out


def _between(p, u, v) -> bool:
    """p collinear with uv assumed; closed bbox membership."""
    return (min(u[0], v[0]) <= p[0] <= max(u[0], v[0])
            and min(u[1], v[1]) <= p[1] <= max(u[1], v[1]))


def _seg_events(pa, pb, pc, pd):
    """Classify closed integer segments ab and cd.

    Returns ("none",), ("proper", t, u), ("touch", point) with the point an
    integer pair, or ("overlap", lo, hi) for a collinear shared piece.
    """
    ax, ay = pa
    bx, by = pb
    cx, cy = pc
    dx, dy = pd
    d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    if d1 or d2 or d3 or d4:
        if d1 and d2 and d3 and d4 and (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
            denom = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
            t = Fraction((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx), denom)
            u = Fraction((cx - ax) * (by - ay) - (cy - ay) * (bx - ax), denom)
            return ("proper", t, u)
        if d1 == 0 and _between(pa, pc, pd):
            return ("touch", pa)
        if d2 == 0 and _between(pb, pc, pd):
            return ("touch", pb)
        if d3 == 0 and _between(pc, pa, pb):
            return ("touch", pc)
        if d4 == 0 and _between(pd, pa, pb):
            return ("touch", pd)
        return ("none",)
    axis = 0 if ax != bx else 1
    s1 = sorted((pa, pb), key=lambda p: p[axis])
    s2 = sorted((pc, pd), key=lambda p: p[axis])
    lo = max(s1[0], s2[0], key=lambda p: p[axis])
    hi = min(s1[1], s2[1], key=lambda p: p[axis])
    if lo[axis] > hi[axis]:
        return ("none",)
    if lo == hi:
        return ("touch", lo)
    return ("overlap", lo, hi)


def _locate_on(sc: _ScaledCurve, seg_index: int, p) -> Fraction:
    """Chain parameter of integer point p, known to lie on segment seg_index."""
    k = sc.vmap.get(p)
    if k is not None:
        return Fraction(k)
    (ax, ay), (bx, by) = sc.seg(seg_index)
    if bx != ax:
        t = Fraction(p[0] - ax, bx - ax)
    else:
        t = Fraction(p[1] - ay, by - ay)
    return seg_index + t


def _boxes_meet(b1, b2) -> bool:
    return not (b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1])


def _pair_events(sa: _ScaledCurve, sb: _ScaledCurve):
    """All meeting points of two scaled curves, grouped by point.

    Returns (events, overlaps): events maps a scaled Fraction point to
    {"proper": count, "sa": set of chain params, "sb": set}, and overlaps
    lists collinear shared pieces as (lo, hi) integer pairs.
    """
    events: Dict[Tuple[Fraction, Fraction], dict] = {}
    overlaps: List[tuple] = []
    if not _boxes_meet(sa.box, sb.box):
        return events, overlaps
    for i in range(sa.nseg):
        ib = sa.segbox[i]
        if not _boxes_meet(ib, sb.box):
            continue
        for j in range(sb.nseg):
            if not _boxes_meet(ib, sb.segbox[j]):
                continue
            res = _seg_events(*sa.seg(i), *sb.seg(j))
            tag = res[0]
            if tag == "none":
                continue
            if tag == "proper":
                t, u = res[1], res[2]
                (ax, ay), (bx, by) = sa.seg(i)
                key = (ax + t * (bx - ax), ay + t * (by - ay))
                ev = events.setdefault(key, {"proper": 0, "sa": set(), "sb": set()})
                ev["proper"] += 1
                ev["sa"].add(i + t)
                ev["sb"].add(j + u)
            elif tag == "touch":
                p = res[1]
                key = (Fraction(p[0]), Fraction(p[1]))
                ev = events.setdefault(key, {"proper": 0, "sa": set(), "sb": set()})
                ev["sa"].add(_locate_on(sa, i, p))
                ev["sb"].add(_locate_on(sb, j, p))
            else:
                overlaps.append((res[1], res[2]))
    return events, overlaps


def _unscale(key, scale: int) -> Point:
    return Point(key[0] / scale, key[1] / scale)


def _classify_pair(sa: _ScaledCurve, sb: _ScaledCurve, scale: int, mode: str):
    """Turn grouped events into incidences and violations for one pair."""
    ida, idb = sa.curve.id, sb.curve.id
    events, overlaps = _pair_events(sa, sb)
    incidences: List[Incidence] = []
    violations: List[Violation] = []

    for lo, hi in overlaps:
        violations.append(Violation(
            "overlap", (ida, idb), _unscale((Fraction(lo[0]), Fraction(lo[1])), scale),
            "curves share a collinear piece"))

    for key in sorted(events):
        ev = events[key]
        point = _unscale(key, scale)
        if len(ev["sa"]) > 1 or len(ev["sb"]) > 1:
            violations.append(Violation(
                "degenerate_contact", (ida, idb), point,
                "multiple passages through one contact point"))
            continue
        s_a = next(iter(ev["sa"]))
        s_b = next(iter(ev["sb"]))
        a_vertex = s_a.denominator == 1
        b_vertex = s_b.denominator == 1

        if not a_vertex and not b_vertex:
            if ev["proper"] >= 1:
                incidences.append(Incidence("crossing", point, ida, idb, s_a, s_b))
            else:
                violations.append(Violation(
                    "degenerate_contact", (ida, idb), point,
                    "interior contact without a proper crossing"))
            continue

        if a_vertex != b_vertex:
            vc, other_id = (sa, idb) if a_vertex else (sb, ida)
            k = int(s_a if a_vertex else s_b)
            if vc.is_endpoint_vertex(k):
                if mode == "arrangement":
                    incidences.append(Incidence("tjoint", point, ida, idb, s_a, s_b))
                else:
                    violations.append(Violation(
                        "endpoint_contact", (ida, idb), point,
                        "arc endpoint rests on another curve"))
            else:
                violations.append(Violation(
                    "degenerate_contact", (ida, idb), point,
                    "polyline vertex rests on another curve interior"))
            continue

        ka, kb = int(s_a), int(s_b)
        a_end = sa.is_endpoint_vertex(ka)
        b_end = sb.is_endpoint_vertex(kb)
        if a_end or b_end:
            if mode == "arrangement":
                kind = "joint" if (a_end and b_end) else "tjoint"
                incidences.append(Incidence(kind, point, ida, idb, s_a, s_b))
            else:
                violations.append(Violation(
                    "endpoint_contact", (ida, idb), point,
                    "arc endpoint meets another curve at a vertex"))
            continue

        dirs = ([(d, "A") for d in sa.vertex_directions(ka)]
                + [(d, "B") for d in sb.vertex_directions(kb)])
        keyed = [(pseudo_angle_key(Fraction(dx), Fraction(dy)), owner)
                 for (dx, dy), owner in dirs]
        if len({k for k, _ in keyed}) != 4:
            violations.append(Violation(
                "overlap", (ida, idb), point,
                "parallel germs at a shared vertex"))
            continue
        keyed.sort()
        owners = "".join(owner for _, owner in keyed)
        alternating = owners in ("ABAB", "BABA")
        incidences.append(Incidence(
            "crossing" if alternating else "tangency",
            point, ida, idb, s_a, s_b, pattern=owners))

    return incidences, violations


def _self_violations(sc: _ScaledCurve, scale: int) -> List[Violation]:
    viols: List[Violation] = []
    n = sc.nseg
    cid = sc.curve.id
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (sc.closed and i == 0 and j == n - 1):
                continue
            res = _seg_events(*sc.seg(i), *sc.seg(j))
            tag = res[0]
            if tag == "none":
                continue
            if tag == "proper":
                t = res[1]
                (ax, ay), (bx, by) = sc.seg(i)
                pkey = (ax + t * (bx - ax), ay + t * (by - ay))
            elif tag == "touch":
                pkey = (Fraction(res[1][0]), Fraction(res[1][1]))
            else:
                pkey = (Fraction(res[1][0]), Fraction(res[1][1]))
            viols.append(Violation(
                "self_intersection", (cid,), _unscale(pkey, scale),
                f"segments {i} and {j} meet"))
    return viols


def _run_engine(curves: Sequence[Curve], m: Optional[int], mode: str):
    """Shared core: returns (pair incidence dict, violations)."""
    scale = coordinate_scale(curves)
    scaled = [_ScaledCurve(c, scale) for c in curves]
    violations: List[Violation] = []
    for sc in scaled:
        violations.extend(_self_violations(sc, scale))

    pairs: Dict[Tuple[int, int], Tuple[Incidence, ...]] = {}
    point_owners: Dict[Tuple[Fraction, Fraction], set] = {}
    for i in range(len(scaled)):
        for j in range(i + 1, len(scaled)):
            sa, sb = scaled[i], scaled[j]
            events, _ = _pair_events(sa, sb)
            for key in events:
                point_owners.setdefault(key, set()).update(
                    (sa.curve.id, sb.curve.id))
            incs, viols = _classify_pair(sa, sb, scale, mode)
            violations.extend(viols)
            if incs:
                pairs[(sa.curve.id, sb.curve.id)] = tuple(incs)
            if m is not None and len(incs) > m:
                violations.append(Violation(
                    "intersection_budget",
                    (sa.curve.id, sb.curve.id), incs[0].point,
                    f"{len(incs)} contacts exceed budget {m}"))

    for key in sorted(point_owners):
        owners = point_owners[key]
        if len(owners) >= 3:
            violations.append(Violation(
                "triple_point", tuple(sorted(owners)), _unscale(key, scale),
                "three or more curves through one point"))
    return pairs, violations


_RAISE_MAP = {
    "endpoint_contact": EndpointError,
    "intersection_budget": ValidationError,
}


def _raise_first(violations: Sequence[Violation]):
    if not violations:
        return
    v = violations[0]
    exc = _RAISE_MAP.get(v.kind, DegeneracyError)
    raise exc(f"{v.kind} involving curves {v.curves}: {v.detail}")


def curve_pair_incidences(a: Curve, b: Curve, mode: str = "strict") -> Tuple[Incidence, ...]:
    """Contacts between two individually simple curves, ordered by point.

    Raises on any configuration outside the chosen mode's model.
    """
    pairs, violations = _run_engine([a, b], None, mode)
    _raise_first(violations)
    incs = pairs.get((a.id, b.id), ())
    return tuple(sorted(incs, key=lambda inc: (inc.point.x, inc.point.y)))


def is_touching_pair(a: Curve, b: Curve) -> bool:
    """True iff the pair meets exactly once and that contact is a tangency."""
    incs = curve_pair_incidences(a, b)
    return len(incs) == 1 and incs[0].kind == "tangency"


def classify_shared_vertex(a: Curve, b: Curve, v: Point) -> str:
    """'crossing' or 'tangency' for a vertex v shared by both polylines.

    The four outgoing directions at v are cyclically sorted by exact
    pseudo-angle; alternating ownership means the curves cross.
    """
    scale = coordinate_scale([a, b])
    sa, sb = _ScaledCurve(a, scale), _ScaledCurve(b, scale)
    key = (v.x * scale, v.y * scale)
    if key[0].denominator != 1 or key[1].denominator != 1:
        raise DegeneracyError("v is not a vertex of both curves")
    ipt = (key[0].numerator, key[1].numerator)
    if ipt not in sa.vmap or ipt not in sb.vmap:
        raise DegeneracyError("v is not a vertex of both curves")
    ka, kb = sa.vmap[ipt], sb.vmap[ipt]
    if sa.is_endpoint_vertex(ka) or sb.is_endpoint_vertex(kb):
        raise EndpointError("shared vertex is an arc endpoint")
    keyed = []
    for sc, owner in ((sa, "A"), (sb, "B")):
        k = ka if owner == "A" else kb
        for dx, dy in sc.vertex_directions(k):
            keyed.append((pseudo_angle_key(Fraction(dx), Fraction(dy)), owner))
    if len({k for k, _ in keyed}) != 4:
        raise DegeneracyError("coincident directions at shared vertex")
    keyed.sort()
    owners = "".join(owner for _, owner in keyed)
    return "crossing" if owners in ("ABAB", "BABA") else "tangency"


@dataclass(frozen=True)
class FamilyIncidences:
    """All pairwise contacts of a family plus the headline counts."""
    m: int
    curve_ids: Tuple[int, ...]
    pairs: Dict[Tuple[int, int], Tuple[Incidence, ...]] = field(hash=False)

    @property
    def T(self) -> int:
        """Number of touching pairs: exactly one contact and it is a tangency."""
        return len(self.touching_pairs())

    @property
    def X(self) -> int:
        """Total number of contact points over all pairs, tangencies included."""
        return sum(len(incs) for incs in self.pairs.values())

    @property
    def crossing_count(self) -> int:
        return sum(1 for incs in self.pairs.values()
                   for inc in incs if inc.kind == "crossing")

    def touching_pairs(self) -> Tuple[Tuple[int, int], ...]:
        out = [pair for pair, incs in sorted(self.pairs.items())
               if len(incs) == 1 and incs[0].kind == "tangency"]
        return tuple(out)

    def all_incidences(self) -> Tuple[Incidence, ...]:
        out: List[Incidence] = []
        for pair in sorted(self.pairs):
            out.extend(self.pairs[pair])
        return tuple(out)

    def on_curve(self, cid: int) -> Tuple[Incidence, ...]:
        """Contacts involving cid, ordered by chain parameter along cid."""
        out = [inc for incs in self.pairs.values() for inc in incs
               if cid in (inc.a, inc.b)]
        out.sort(key=lambda inc: (inc.s_on(cid), inc.other(cid)))
        return tuple(out)

    def crossing_degree(self, cid: int) -> int:
        return sum(1 for inc in self.on_curve(cid) if inc.kind == "crossing")

    def between(self, a: int, b: int) -> Tuple[Incidence, ...]:
        key = (a, b) if (a, b) in self.pairs else (b, a)
        return self.pairs.get(key, ())


def validate_general_position(family: CurveFamily) -> ValidationReport:
    """Check the whole strict family model, collecting every violation."""
    _, violations = _run_engine(family.curves, family.m, "strict")
    return ValidationReport(
        ok=not violations, n=family.n, m=family.m, violations=tuple(violations))


def compute_incidences(family: CurveFamily, mode: str = "strict") -> FamilyIncidences:
    """Contact catalog of a family; raises if the model is violated."""
    budget = family.m if mode == "strict" else None
    pairs, violations = _run_engine(family.curves, budget, mode)
    _raise_first(violations)
    return FamilyIncidences(
        m=family.m,
        curve_ids=tuple(c.id for c in family.curves),
        pairs=pairs)


def mixed_contacts(curves: Sequence[Curve]) -> FamilyIncidences:
    """Arrangement-mode catalog for an ad-hoc curve set (sub-arcs allowed)."""
    pairs, violations = _run_engine(curves, None, "arrangement")
    _raise_first(violations)
    return FamilyIncidences(
        m=0, curve_ids=tuple(c.id for c in curves), pairs=pairs)
