"""Seeded constructions of valid curve families.

Tangencies are synthesised exactly: the contact point is placed as a shared
polyline vertex of both curves, so the four local directions split into the
side-separated pattern the incidence engine classifies as a tangency. Every
generated family is post-checked with the full validator before it is
returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import GenerationError, PreconditionError
from .geometry import Curve, CurveFamily, Point, pt
from .incidence import validate_general_position

KINDS = ("UnitCirclesGrid", "TangentChain", "RandomCircles",
         "PseudoParabolas", "PerturbedPencil")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    m: int
    resolution: int = 8
    seed: int = 42

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown generator kind {self.kind!r}")
        if self.n < 1 or self.m < 1:
            raise PreconditionError("need n >= 1 and m >= 1")
        if self.resolution < 8:
            raise PreconditionError("resolution must be at least 8")


def rational_circle(center: Point, resolution: int) -> Tuple[Point, ...]:
    """Vertices of a convex polygon inscribed in the unit circle at center.

    Quarter-symmetric, so (+-1, 0) and (0, +-1) offsets are always vertices;
    those are the only spots where grid-aligned tangencies land. The vertex
    count is resolution rounded up to a multiple of 4.
    """
    q = (resolution + 3) // 4
    quadrant = []
    for j in range(q):
        t = Fraction(j, q)
        den = 1 + t * t
        quadrant.append(((1 - t * t) / den, 2 * t / den))
    pts = list(quadrant)
    pts += [(-y, x) for x, y in quadrant]
    pts += [(-x, -y) for x, y in quadrant]
    pts += [(y, -x) for x, y in quadrant]
    return tuple(Point(center.x + x, center.y + y) for x, y in pts)


def _circle(cid: int, center: Point, resolution: int) -> Curve:
    return Curve(id=cid, points=rational_circle(center, resolution), closed=True)


def _unit_circles_grid(spec: GeneratorSpec) -> CurveFamily:
    k = 1
    while k * k < spec.n:
        k += 1
    curves = []
    for t in range(spec.n):
        i, j = t % k, t // k
        curves.append(_circle(t + 1, pt(2 * i, 2 * j), spec.resolution))
    return CurveFamily(curves=tuple(curves), m=spec.m)


def _tangent_chain(spec: GeneratorSpec) -> CurveFamily:
    curves = [_circle(i + 1, pt(2 * i, 0), spec.resolution)
              for i in range(spec.n)]
    return CurveFamily(curves=tuple(curves), m=spec.m)


# center offsets for the unanchored circles; each lands deep inside a
# neighbour (center distance well clear of 2) so polygon crossings are
# transversal at any supported resolution
_FREE_OFFSETS = tuple(
    (Fraction(sx * 8, 7), Fraction(sy, 5)) for sx in (1, -1) for sy in (1, -1)
) + tuple(
    (Fraction(sx, 5), Fraction(sy * 8, 7)) for sx in (1, -1) for sy in (1, -1)
)


def _random_circles(spec: GeneratorSpec) -> CurveFamily:
    rng = random.Random(spec.seed)
    n_free = 0 if spec.m < 2 else spec.n // 5
    n_lat = spec.n - n_free
    k = 1
    while k * k * 4 < n_lat * 5:  # occupancy about 4/5
        k += 1
    sites = sorted(rng.sample([(a, b) for a in range(k) for b in range(k)],
                              n_lat))
    for attempt in range(20):
        curves: List[Curve] = []
        for idx, (a, b) in enumerate(sites):
            curves.append(_circle(idx + 1, pt(2 * a, 2 * b), spec.resolution))
        for j in range(n_free):
            a, b = sites[rng.randrange(len(sites))]
            ux, uy = _FREE_OFFSETS[rng.randrange(len(_FREE_OFFSETS))]
            center = Point(2 * a + ux, 2 * b + uy)
            curves.append(_circle(n_lat + j + 1, center, spec.resolution))
        family = CurveFamily(curves=tuple(curves), m=spec.m)
        if validate_general_position(family).ok:
            return family
    raise GenerationError(
        f"RandomCircles n={spec.n} seed={spec.seed}: no valid placement in 20 attempts")


def _pseudo_parabolas(spec: GeneratorSpec) -> CurveFamily:
    q = (spec.resolution + 1) // 2
    curves = []
    for i in range(spec.n):
        c = i - spec.n // 2
        base = Fraction(c, 3)
        pts = tuple(Point(Fraction(x), Fraction((x - c) ** 2) + base)
                    for x in range(-q, q + 1))
        curves.append(Curve(id=i + 1, points=pts, closed=False))
    return CurveFamily(curves=tuple(curves), m=spec.m)


def _perturbed_pencil(spec: GeneratorSpec) -> CurveFamily:
    rng = random.Random(spec.seed)
    r = spec.resolution + (0 if spec.resolution % 2 else 1)
    bend = Fraction(1, 4)
    scale = spec.n ** 3 + 1
    for attempt in range(20):
        order = rng.sample(range(1, spec.n + 1), spec.n)
        curves = []
        for i in range(spec.n):
            slope = i + 1
            shift = Fraction(order[i], scale)
            pts = []
            for kk in range(r + 1):
                x = Fraction(2 * kk, r) - 1
                pts.append(Point(x, bend * x * x + slope * x + shift))
            curves.append(Curve(id=i + 1, points=tuple(pts), closed=False))
        family = CurveFamily(curves=tuple(curves), m=spec.m)
        if validate_general_position(family).ok:
            return family
    raise GenerationError(
        f"PerturbedPencil n={spec.n} seed={spec.seed}: no valid shifts in 20 attempts")


_BUILDERS = {
    "UnitCirclesGrid": _unit_circles_grid,
    "TangentChain": _tangent_chain,
    "RandomCircles": _random_circles,
    "PseudoParabolas": _pseudo_parabolas,
    "PerturbedPencil": _perturbed_pencil,
}


def generate(spec: GeneratorSpec) -> CurveFamily:
    family = _BUILDERS[spec.kind](spec)
    report = validate_general_position(family)
    if not report.ok:
        kinds = ", ".join(sorted(report.kinds()))
        raise GenerationError(f"{spec.kind} produced violations: {kinds}")
    return family
