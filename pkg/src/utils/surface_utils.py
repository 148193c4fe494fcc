import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Sequence, Tuple, Union

import jsonschema
import numpy as np

from src.utils.constants import (NEWTON_MAX_ITER, PROJECTION_TOL, SAMPLE_DENOMINATOR, SAMPLE_NUMERATOR_RANGE,
                                 surface_kind_map)
from src.utils.exceptions import InvalidInput, NoConvergence

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]
Point = Tuple[Scalar, Scalar, Scalar]


class SurfaceKind(str, Enum):
    PLANES = "ParallelPlanes"
    SPHERES = "ConcentricSpheres"
    CYLINDERS = "ConcentricCylinders"


# JSON names
KIND_BY_NAME = {name: SurfaceKind(kind) for name, kind in surface_kind_map.items()}
NAME_BY_KIND = {kind: name for name, kind in KIND_BY_NAME.items()}

SURFACE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "kind": {"enum": sorted(KIND_BY_NAME)},
        "params": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 1},
    },
    "required": ["kind", "params"],
}


def to_fraction(value: Union[str, int, float, Fraction]) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidInput(f"Could not read {value!r} as a rational - Error: {exc}")


@dataclass(frozen=True)
class SurfaceFamily:
    """
    Union of sheets in a canonical frame: planes z = c_i, spheres of radius r_i about the
    origin, or cylinders of radius r_i about the z-axis.
    """
    kind: SurfaceKind
    parameters: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.parameters:
            raise InvalidInput("A surface family needs at least one sheet")
        if len(set(self.parameters)) != len(self.parameters):
            raise InvalidInput(f"Sheet parameters must be pairwise distinct, got {self.parameters}")
        if self.kind != SurfaceKind.PLANES and any(r <= 0 for r in self.parameters):
            raise InvalidInput(f"Radii must be positive, got {self.parameters}")

    @classmethod
    def parallel_planes(cls, *offsets) -> "SurfaceFamily":
        return cls(SurfaceKind.PLANES, tuple(to_fraction(c) for c in offsets))

    @classmethod
    def concentric_spheres(cls, *radii) -> "SurfaceFamily":
        return cls(SurfaceKind.SPHERES, tuple(to_fraction(r) for r in radii))

    @classmethod
    def concentric_cylinders(cls, *radii) -> "SurfaceFamily":
        return cls(SurfaceKind.CYLINDERS, tuple(to_fraction(r) for r in radii))

    @property
    def sheet_count(self) -> int:
        return len(self.parameters)

    def check_sheet(self, sheet: int):
        if not 0 <= sheet < self.sheet_count:
            raise InvalidInput(f"Sheet {sheet} is not one of the {self.sheet_count} sheets of {self.kind.value}")


@dataclass(frozen=True)
class SheetAssignment:
    sheets: Tuple[int, ...]

    @classmethod
    def uniform(cls, vertex_count: int, sheet: int = 0) -> "SheetAssignment":
        return cls(tuple([sheet] * vertex_count))

    def validate_for(self, M: SurfaceFamily, vertex_count: int):
        if len(self.sheets) != vertex_count:
            raise InvalidInput(f"Assignment covers {len(self.sheets)} vertices, graph has {vertex_count}")
        for sheet in self.sheets:
            M.check_sheet(sheet)

    def __getitem__(self, vertex: int) -> int:
        return self.sheets[vertex]


@dataclass(frozen=True)
class SurfacePoint:
    coordinates: Point
    sheet: int

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coordinates)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coordinates])


def h_value(M: SurfaceFamily, sheet: int, q: Sequence[Scalar]) -> Scalar:
    M.check_sheet(sheet)
    x, y, z = q
    c = M.parameters[sheet]
    if M.kind == SurfaceKind.PLANES:
        return z - c
    if M.kind == SurfaceKind.SPHERES:
        return x * x + y * y + z * z - c * c
    return x * x + y * y - c * c


def h_gradient(M: SurfaceFamily, sheet: int, q: Sequence[Scalar]) -> Point:
    M.check_sheet(sheet)
    x, y, z = q
    if M.kind == SurfaceKind.PLANES:
        return (0, 0, 1)
    if M.kind == SurfaceKind.SPHERES:
        return (2 * x, 2 * y, 2 * z)
    return (2 * x, 2 * y, 0)


def ambient_dof(M: SurfaceFamily) -> int:
    """Isometries of R^3 preserving every sheet: 3 for planes and spheres, 2 for cylinders"""
    return 2 if M.kind == SurfaceKind.CYLINDERS else 3


def sheet_scale(M: SurfaceFamily, sheet: int) -> float:
    M.check_sheet(sheet)
    return max(1.0, abs(float(M.parameters[sheet])))


def _unit_circle(t: Fraction) -> Tuple[Fraction, Fraction]:
    """Rational point on the unit circle by the tan-half-angle substitution"""
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def point_from_parameters(M: SurfaceFamily, sheet: int, t: Fraction, s: Fraction) -> SurfacePoint:
    """
    Exact point on a sheet from two rational parameters: (t, s, c) on a plane, the circle
    point of t at height s on a cylinder, and the circle points of t and s composed on a sphere.
    """
    M.check_sheet(sheet)
    t, s = Fraction(t), Fraction(s)
    c = M.parameters[sheet]
    if M.kind == SurfaceKind.PLANES:
        return SurfacePoint((t, s, c), sheet)
    cos_t, sin_t = _unit_circle(t)
    if M.kind == SurfaceKind.CYLINDERS:
        return SurfacePoint((c * cos_t, c * sin_t, s), sheet)
    cos_s, sin_s = _unit_circle(s)
    return SurfacePoint((c * cos_t * cos_s, c * sin_t * cos_s, c * sin_s), sheet)


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-SAMPLE_NUMERATOR_RANGE, SAMPLE_NUMERATOR_RANGE + 1)), SAMPLE_DENOMINATOR)


def sample_point(M: SurfaceFamily, sheet: int, rng: Union[int, np.random.Generator]) -> SurfacePoint:
    """Random rational point lying exactly on the sheet"""
    generator = np.random.default_rng(rng) if isinstance(rng, (int, np.integer)) else rng
    return point_from_parameters(M, sheet, _random_rational(generator), _random_rational(generator))


def project(M: SurfaceFamily, sheet: int, q: Sequence[float]) -> np.ndarray:
    """Newton projection onto the sheet along the gradient"""
    point = np.asarray(q, dtype=float).copy()
    tolerance = PROJECTION_TOL * sheet_scale(M, sheet)
    for _ in range(NEWTON_MAX_ITER):
        residual = float(h_value(M, sheet, point.tolist()))
        if abs(residual) <= tolerance:
            return point
        gradient = np.asarray(h_gradient(M, sheet, point.tolist()), dtype=float)
        norm_sq = float(gradient @ gradient)
        if norm_sq < PROJECTION_TOL:
            raise NoConvergence(f"Gradient vanishes at {point.tolist()}; cannot project onto sheet {sheet}")
        point = point - residual * gradient / norm_sq
    if abs(float(h_value(M, sheet, point.tolist()))) <= tolerance:
        return point
    raise NoConvergence(f"Projection onto sheet {sheet} did not converge in {NEWTON_MAX_ITER} iterations")


def surface_to_dict(M: SurfaceFamily) -> Dict[str, Any]:
    return {"kind": NAME_BY_KIND[M.kind], "params": [str(c) for c in M.parameters]}


def surface_from_dict(data: Dict[str, Any]) -> SurfaceFamily:
    try:
        jsonschema.validate(data, SURFACE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidInput(f"Surface JSON does not match schema - Error: {exc.message}")
    return SurfaceFamily(KIND_BY_NAME[data["kind"]], tuple(to_fraction(c) for c in data["params"]))
