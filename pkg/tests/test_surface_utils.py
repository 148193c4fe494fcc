from fractions import Fraction

import numpy as np
import pytest

from src.utils.exceptions import InvalidInput, NoConvergence
from src.utils.surface_utils import (SheetAssignment, SurfaceFamily, SurfaceKind, ambient_dof, h_gradient, h_value,
                                     point_from_parameters, project, sample_point, surface_from_dict,
                                     surface_to_dict, to_fraction)

PLANES = SurfaceFamily.parallel_planes(0, 1)
SPHERES = SurfaceFamily.concentric_spheres(1, 2)
CYLINDERS = SurfaceFamily.concentric_cylinders("1", "3/2")


@pytest.mark.parametrize("surface, sheet, point, expected", [
    (PLANES, 1, (5, 7, 1), 0),
    (PLANES, 1, (0, 0, 3), 2),
    (SPHERES, 1, (2, 0, 0), 0),
    (SPHERES, 1, (1, 1, 1), -1),
    (CYLINDERS, 0, (0, 1, 7), 0),
    (CYLINDERS, 1, (0, 0, 4), Fraction(-9, 4)),
])
def test_h_value(surface, sheet, point, expected):
    assert h_value(surface, sheet, point) == expected


def test_h_gradient():
    assert h_gradient(PLANES, 0, (3, 4, 0)) == (0, 0, 1)
    assert h_gradient(SPHERES, 0, (1, 2, 3)) == (2, 4, 6)
    assert h_gradient(CYLINDERS, 0, (1, 2, 3)) == (2, 4, 0)


def test_ambient_dof():
    assert (ambient_dof(PLANES), ambient_dof(SPHERES), ambient_dof(CYLINDERS)) == (3, 3, 2)


@pytest.mark.parametrize("surface", [PLANES, SPHERES, CYLINDERS])
def test_parametrised_points_lie_exactly_on_their_sheet(surface):
    for sheet in range(surface.sheet_count):
        for t, s in [(Fraction(0), Fraction(0)), (Fraction(1, 3), Fraction(-5, 2)), (Fraction(7), Fraction(2, 9))]:
            point = point_from_parameters(surface, sheet, t, s)
            assert point.is_exact
            assert h_value(surface, sheet, point.coordinates) == 0


def test_sample_point_is_reproducible():
    first = sample_point(CYLINDERS, 1, 42)
    assert first == sample_point(CYLINDERS, 1, 42)
    assert first.sheet == 1 and first.is_exact
    assert h_value(CYLINDERS, 1, first.coordinates) == 0


def test_project_onto_cylinder():
    point = project(CYLINDERS, 0, [2.0, 0.0, 5.0])
    np.testing.assert_allclose(point, [1.0, 0.0, 5.0], atol=1e-10)


def test_project_fails_at_the_centre():
    with pytest.raises(NoConvergence):
        project(SPHERES, 0, [0.0, 0.0, 0.0])


def test_family_validation():
    with pytest.raises(InvalidInput):
        SurfaceFamily.concentric_spheres(1, 1)
    with pytest.raises(InvalidInput):
        SurfaceFamily.concentric_cylinders(-1)
    with pytest.raises(InvalidInput):
        SurfaceFamily.parallel_planes()
    assert SurfaceFamily.parallel_planes(-2).parameters == (Fraction(-2),)
    with pytest.raises(InvalidInput):
        h_value(PLANES, 2, (0, 0, 0))


def test_assignment_validation():
    SheetAssignment((0, 1, 1)).validate_for(CYLINDERS, 3)
    with pytest.raises(InvalidInput):
        SheetAssignment((0, 1)).validate_for(CYLINDERS, 3)
    with pytest.raises(InvalidInput):
        SheetAssignment((0, 2)).validate_for(CYLINDERS, 2)
    assert SheetAssignment.uniform(3, 1).sheets == (1, 1, 1)


def test_surface_json():
    data = surface_to_dict(CYLINDERS)
    assert data == {"kind": "cylinders", "params": ["1", "3/2"]}
    assert surface_from_dict(data) == CYLINDERS
    assert surface_from_dict({"kind": "planes", "params": [0, "1/2"]}).kind == SurfaceKind.PLANES
    with pytest.raises(InvalidInput):
        surface_from_dict({"kind": "tori", "params": ["1"]})
    with pytest.raises(InvalidInput):
        to_fraction("one")


@pytest.mark.parametrize("surface", [PLANES, SPHERES, CYLINDERS])
def test_sampled_points_lie_exactly_on_their_sheet(surface):
    rng = np.random.default_rng(0)
    for i in range(1000):
        sheet = i % surface.sheet_count
        assert h_value(surface, sheet, sample_point(surface, sheet, rng).coordinates) == 0


@pytest.mark.parametrize("surface", [PLANES, SPHERES, CYLINDERS])
def test_gradient_matches_central_differences(surface):
    rng = np.random.default_rng(1)
    step = 1e-6
    for _ in range(50):
        q = rng.uniform(-2, 2, size=3)
        sheet = int(rng.integers(surface.sheet_count))
        numeric = [
            (float(h_value(surface, sheet, (q + step * e).tolist())) -
             float(h_value(surface, sheet, (q - step * e).tolist()))) / (2 * step)
            for e in np.eye(3)
        ]
        np.testing.assert_allclose(numeric, np.asarray(h_gradient(surface, sheet, q.tolist()), dtype=float), atol=1e-6)


@pytest.mark.parametrize("surface", [PLANES, SPHERES, CYLINDERS])
def test_project_is_idempotent(surface):
    rng = np.random.default_rng(2)
    for _ in range(50):
        sheet = int(rng.integers(surface.sheet_count))
        on_sheet = project(surface, sheet, rng.uniform(0.5, 2, size=3))
        assert abs(float(h_value(surface, sheet, on_sheet.tolist()))) <= 1e-12 * 2
        np.testing.assert_array_equal(project(surface, sheet, on_sheet), on_sheet)
