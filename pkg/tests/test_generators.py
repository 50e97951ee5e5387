"""Generated families: model compliance, determinism, kind peculiarities."""

import pytest

from contactgeom.errors import GenerationError
from contactgeom.familyio import dumps_family
from contactgeom.generators import KINDS, GeneratorSpec, generate
from contactgeom.incidence import compute_incidences, validate_general_position


def test_kind_catalog():
    assert set(KINDS) == {"UnitCirclesGrid", "TangentChain", "RandomCircles",
                          "PseudoParabolas", "PerturbedPencil"}


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_respects_the_model(kind):
    n = 6 if kind == "PerturbedPencil" else 10
    fam = generate(GeneratorSpec(kind=kind, n=n, m=2, seed=3))
    assert fam.n == n
    rep = validate_general_position(fam)
    assert rep.ok, (kind, rep.violations)
    ids = [c.id for c in fam.curves]
    assert len(set(ids)) == n


@pytest.mark.parametrize("kind", KINDS)
def test_same_seed_same_family(kind):
    n = 5 if kind == "PerturbedPencil" else 8
    a = generate(GeneratorSpec(kind=kind, n=n, m=1, seed=9))
    b = generate(GeneratorSpec(kind=kind, n=n, m=1, seed=9))
    assert dumps_family(a) == dumps_family(b)


def test_different_seeds_differ_for_random_kinds():
    a = generate(GeneratorSpec(kind="RandomCircles", n=8, m=1, seed=1))
    b = generate(GeneratorSpec(kind="RandomCircles", n=8, m=1, seed=2))
    assert dumps_family(a) != dumps_family(b)


def test_closedness_per_kind():
    for kind in ("UnitCirclesGrid", "TangentChain", "RandomCircles"):
        fam = generate(GeneratorSpec(kind=kind, n=6, m=1, seed=4))
        assert all(c.closed for c in fam.curves), kind
    for kind in ("PseudoParabolas", "PerturbedPencil"):
        fam = generate(GeneratorSpec(kind=kind, n=5, m=1, seed=4))
        assert all(not c.closed for c in fam.curves), kind


def test_tangent_chain_touches_in_a_path():
    fam = generate(GeneratorSpec(kind="TangentChain", n=7, m=1, seed=0))
    fi = compute_incidences(fam)
    assert fi.T == 6
    assert fi.crossing_count == 0


def test_unit_circles_grid_touching_count():
    # a 3x3 grid of unit circles touches along grid lines
    fam = generate(GeneratorSpec(kind="UnitCirclesGrid", n=9, m=1, seed=0))
    fi = compute_incidences(fam)
    assert fi.T == 12                    # 2 * 3 * (3-1)
    assert fi.crossing_count == 0


def test_resolution_changes_vertex_count():
    lo = generate(GeneratorSpec(kind="RandomCircles", n=4, m=1, seed=5,
                                resolution=8))
    hi = generate(GeneratorSpec(kind="RandomCircles", n=4, m=1, seed=5,
                                resolution=16))
    assert lo.curves[0].n_vertices < hi.curves[0].n_vertices


def test_resolution_floor_enforced():
    from contactgeom.errors import PreconditionError
    with pytest.raises(PreconditionError):
        generate(GeneratorSpec(kind="RandomCircles", n=4, m=1, seed=5,
                               resolution=6))


def test_unknown_kind_raises():
    with pytest.raises(Exception):
        generate(GeneratorSpec(kind="NoSuchKind", n=4, m=1, seed=0))


def test_impossible_spec_raises_generation_error():
    with pytest.raises(GenerationError):
        generate(GeneratorSpec(kind="PerturbedPencil", n=30, m=1, seed=0))
