import concurrent.futures
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np
import pandas as pd
from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt

from src.utils.constants import (DEFAULT_TRIALS, FLOAT_RANK_TOL, MIN_POINT_SEPARATION, SAMPLER_MAX_RETRIES,
                                 SCHEMA_VERSION, SURFACE_DRIFT_TOL, THREADS)
from src.utils.exceptions import (DegenerateSample, DimensionMismatch, InvalidInput, NotType2Maximal,
                                  PointOffSurface, SamplingFailed)
from src.utils.graph_io import graph_from_dict
from src.utils.graph_utils import Graph, SubgraphRef, complete_graph, contract
from src.utils.linalg_utils import kernel_exact, kernel_float, rank_exact, rank_float, to_exact_array
from src.utils.sparsity_utils import check_type
from src.utils.surface_utils import (SheetAssignment, SurfaceFamily, SurfacePoint, ambient_dof, h_gradient, h_value,
                                     sample_point, sheet_scale, surface_from_dict, surface_to_dict, to_fraction)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Framework:
    graph: Graph
    surface: SurfaceFamily
    assignment: SheetAssignment
    points: Tuple[SurfacePoint, ...]

    def __post_init__(self):
        self.assignment.validate_for(self.surface, self.graph.vertex_count)
        if len(self.points) != self.graph.vertex_count:
            raise DimensionMismatch(f"{len(self.points)} points for {self.graph.vertex_count} vertices")
        for k, point in enumerate(self.points):
            sheet = self.assignment[k]
            if point.sheet != sheet:
                raise PointOffSurface(f"Point {k} is tagged with sheet {point.sheet}, assignment says {sheet}")
            residual = h_value(self.surface, sheet, point.coordinates)
            if point.is_exact:
                off = residual != 0
            else:
                off = abs(float(residual)) > SURFACE_DRIFT_TOL * sheet_scale(self.surface, sheet) ** 2
            if off:
                raise PointOffSurface(f"Point {k} = {point.coordinates} is off sheet {sheet} (h = {residual})")
        if len(set(p.coordinates for p in self.points)) != len(self.points):
            raise InvalidInput("Framework points must be pairwise distinct")

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.points)

    def coordinates(self) -> List[Tuple]:
        return [p.coordinates for p in self.points]

    def with_graph(self, graph: Graph) -> "Framework":
        return Framework(graph, self.surface, self.assignment, self.points)


@dataclass(frozen=True)
class RelativeRigidityMatrix:
    """|E| edge rows then |V| surface rows over 3|V| columns"""
    entries: np.ndarray
    row_labels: Tuple[str, ...]
    column_labels: Tuple[str, ...]
    exact: bool

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.row_labels), len(self.column_labels))

    @property
    def float_view(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float).reshape(self.shape)


@dataclass
class RigidityReport:
    rank: int
    nullity: int
    ambient_dof: int
    infinitesimally_rigid: bool
    isostatic: bool
    flex_basis: List[List[Any]]
    method: str
    samples_used: int = 1
    pointwise_dof: Optional[int] = None
    trial_ranks: List[int] = field(default_factory=list)
    framework: Optional[Framework] = field(default=None, repr=False, compare=False)

    @property
    def irregular_suspect(self) -> bool:
        """Trials disagreed on rank, or the sampled point has extra rigid motions"""
        spread = len(set(self.trial_ranks)) > 1
        return spread or (self.pointwise_dof is not None and self.pointwise_dof != self.ambient_dof)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "rank": self.rank,
            "nullity": self.nullity,
            "ambient_dof": self.ambient_dof,
            "pointwise_dof": self.pointwise_dof,
            "infinitesimally_rigid": self.infinitesimally_rigid,
            "isostatic": self.isostatic,
            "method": self.method,
            "samples_used": self.samples_used,
            "trial_ranks": self.trial_ranks,
            "irregular_suspect": self.irregular_suspect,
            "flex_basis": [[str(x) for x in vector] for vector in self.flex_basis],
        }


def _column_labels(vertex_count: int, dim: int) -> Tuple[str, ...]:
    axes = "xyz"[:dim]
    return tuple(f"{axis}{k}" for k in range(vertex_count) for axis in axes)


def _edge_rows(G: Graph, p: Sequence[Sequence], dim: int) -> List[List]:
    rows = []
    for i, j in G.edges:
        row = [0] * (dim * G.vertex_count)
        for axis in range(dim):
            delta = p[i][axis] - p[j][axis]
            row[dim * i + axis] = delta
            row[dim * j + axis] = -delta
        rows.append(row)
    return rows


def free_rigidity_matrix(G: Graph, p: Sequence[Sequence], dim: int) -> np.ndarray:
    """|E| x dim|V| rigidity matrix of a bar-joint framework in R^dim"""
    if dim not in (2, 3):
        raise DimensionMismatch(f"Only dimensions 2 and 3 are supported, got {dim}")
    if len(p) != G.vertex_count or any(len(q) != dim for q in p):
        raise DimensionMismatch(f"Expected {G.vertex_count} points in R^{dim}")
    exact = all(isinstance(x, (int, Fraction)) for q in p for x in q)
    rows = _edge_rows(G, p, dim)
    if exact:
        return to_exact_array(rows, columns=dim * G.vertex_count)
    return np.array(rows, dtype=float).reshape(len(rows), dim * G.vertex_count)


def relative_rigidity_matrix(F: Framework) -> RelativeRigidityMatrix:
    n = F.graph.vertex_count
    p = F.coordinates()
    rows = _edge_rows(F.graph, p, 3)
    for k in range(n):
        row = [0] * (3 * n)
        gradient = h_gradient(F.surface, F.assignment[k], p[k])
        for axis in range(3):
            row[3 * k + axis] = Fraction(gradient[axis]) / 2 if F.is_exact else float(gradient[axis]) / 2
        rows.append(row)
    labels = tuple(f"e{i}-{j}" for i, j in F.graph.edges) + tuple(f"h{k}" for k in range(n))
    if F.is_exact:
        entries = to_exact_array(rows, columns=3 * n)
    else:
        entries = np.array(rows, dtype=float)
    return RelativeRigidityMatrix(entries, labels, _column_labels(n, 3), F.is_exact)


def rigid_motion_dof(F: Framework) -> int:
    """d(M, p): nullity of the complete graph's matrix at the framework's own points"""
    complete = relative_rigidity_matrix(F.with_graph(complete_graph(F.graph.vertex_count)))
    rank = rank_exact(complete.entries) if complete.exact else rank_float(complete.float_view)
    return 3 * F.graph.vertex_count - rank


def analyze(F: Framework, method: Optional[str] = None) -> RigidityReport:
    """Rank, kernel and rigidity verdicts at the framework's points; exact whenever the points are rational"""
    matrix = relative_rigidity_matrix(F)
    method = method or ("exact" if matrix.exact else "float")
    if method == "exact":
        if not matrix.exact:
            raise InvalidInput("Exact analysis needs rational points")
        rank = rank_exact(matrix.entries)
        flex_basis = kernel_exact(matrix.entries, columns=matrix.shape[1])
    else:
        rank = rank_float(matrix.float_view, FLOAT_RANK_TOL)
        flex_basis = kernel_float(matrix.float_view, FLOAT_RANK_TOL).T.tolist()
    n = F.graph.vertex_count
    dof = ambient_dof(F.surface)
    nullity = 3 * n - rank
    rigid = nullity == dof
    report = RigidityReport(
        rank=rank,
        nullity=nullity,
        ambient_dof=dof,
        infinitesimally_rigid=rigid,
        isostatic=rigid and 2 * n - F.graph.edge_count == dof,
        flex_basis=flex_basis,
        method=method,
        pointwise_dof=rigid_motion_dof(F),
        trial_ranks=[rank],
        framework=F,
    )
    logger.debug(f"{F.graph} on {F.surface.kind.value}: rank {rank}, nullity {nullity}")
    return report


# Generic rank by sampling

def _check_separation(points: Sequence[SurfacePoint], scale: float):
    for a, b in combinations(points, 2):
        if float(np.linalg.norm(a.as_array() - b.as_array())) < MIN_POINT_SEPARATION * scale:
            raise DegenerateSample(f"Points {a.coordinates} and {b.coordinates} nearly coincide")


@retry(retry=retry_if_exception_type(DegenerateSample), stop=stop_after_attempt(SAMPLER_MAX_RETRIES))
def _sample_points(M: SurfaceFamily, assignment: SheetAssignment, vertex_count: int,
                   rng: np.random.Generator) -> Tuple[SurfacePoint, ...]:
    points = tuple(sample_point(M, assignment[k], rng) for k in range(vertex_count))
    scale = max(sheet_scale(M, sheet) for sheet in range(M.sheet_count))
    _check_separation(points, scale)
    return points


def sample_framework(G: Graph, M: SurfaceFamily, assignment: SheetAssignment,
                     rng: np.random.Generator) -> Framework:
    assignment.validate_for(M, G.vertex_count)
    try:
        points = _sample_points(M, assignment, G.vertex_count, rng)
    except RetryError as exc:
        raise SamplingFailed(f"No separated sample after {SAMPLER_MAX_RETRIES} attempts - Error: {exc}")
    return Framework(G, M, assignment, points)


def generic_analyze(G: Graph, M: SurfaceFamily, assignment: SheetAssignment, trials: int = DEFAULT_TRIALS,
                    seed: int = 0, threads: Optional[int] = None) -> RigidityReport:
    """
    Exact analysis at `trials` independent rational samples; the report of the sample with
    the largest rank wins, ties going to the lowest trial index.
    """
    if trials < 1:
        raise InvalidInput(f"trials must be positive, got {trials}")
    children = np.random.SeedSequence(seed).spawn(trials)

    def run_trial(index: int) -> RigidityReport:
        framework = sample_framework(G, M, assignment, np.random.default_rng(children[index]))
        return analyze(framework, "exact")

    reports: Dict[int, RigidityReport] = {}
    with ThreadPoolExecutor(max_workers=min(trials, threads or THREADS)) as executor:
        future_to_trial = {executor.submit(run_trial, index): index for index in range(trials)}
        for future in concurrent.futures.as_completed(future_to_trial):
            reports[future_to_trial[future]] = future.result()

    best_index = max(range(trials), key=lambda index: (reports[index].rank, -index))
    best = reports[best_index]
    best.samples_used = trials
    best.trial_ranks = [reports[index].rank for index in range(trials)]
    if best.irregular_suspect:
        logger.warning(f"Trials disagree or hit extra rigid motions for {G}: ranks {best.trial_ranks}")
    return best


def generic_free_rank(G: Graph, dim: int = 3, trials: int = DEFAULT_TRIALS, seed: int = 0) -> int:
    """Max exact rank of the free rigidity matrix over random integer placements in R^dim"""
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        p = [[Fraction(int(x)) for x in rng.integers(-1000, 1001, size=dim)] for _ in G.vertices]
        best = max(best, rank_exact(free_rigidity_matrix(G, p, dim)))
    return best


def cone_base_framework(G0: Graph, seed: int = 0) -> Framework:
    """
    Base of a cone graph placed on concentric spheres about the apex: vertex k gets its own
    rational radius, so the point distances to the apex are the cone edges.
    """
    rng = np.random.default_rng(seed)
    radii = sorted(set(Fraction(int(r), 7) for r in rng.choice(np.arange(7, 70), size=G0.vertex_count,
                                                                  replace=False)))
    M = SurfaceFamily.concentric_spheres(*radii)
    assignment = SheetAssignment(tuple(range(G0.vertex_count)))
    return sample_framework(G0, M, assignment, rng)


def verify_extension_lemma(H: SubgraphRef, G: Graph, M: SurfaceFamily, seed: int = 0,
                           trials: int = DEFAULT_TRIALS) -> bool:
    """
    Generic isostaticity of H, G/H and G on a single-sheet family, for a vertex-induced
    type-2 maximal H whose contraction is simple and type-2 maximal.
    """
    if not H.is_induced_in(G):
        raise InvalidInput("The extension subgraph must be vertex-induced")
    quotient = contract(G, H).graph
    sub_graph, _ = H.as_graph()
    checks = {}
    for name, graph in (("H", sub_graph), ("G/H", quotient), ("G", G)):
        if not check_type(graph, 2).maximal:
            raise NotType2Maximal(f"{name} = {graph} is not maximally independent of type 2")
        report = generic_analyze(graph, M, SheetAssignment.uniform(graph.vertex_count), trials, seed)
        checks[name] = report.isostatic
    logger.info(f"Extension check on {G}: {checks}")
    return all(checks.values())


# Serialization

FRAMEWORK_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "graph": {"type": "object"},
        "surface": {"type": "object"},
        "assignment": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "points": {
            "type": "array",
            "items": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 3, "maxItems": 3},
        },
    },
    "required": ["graph", "surface", "assignment", "points"],
}


def framework_to_dict(F: Framework) -> Dict[str, Any]:
    return {
        "graph": F.graph.to_dict(),
        "surface": surface_to_dict(F.surface),
        "assignment": list(F.assignment.sheets),
        "points": [[str(c) for c in p.coordinates] for p in F.points],
    }


def framework_from_dict(data: Dict[str, Any]) -> Framework:
    try:
        jsonschema.validate(data, FRAMEWORK_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InvalidInput(f"Framework JSON does not match schema - Error: {exc.message}")
    graph = graph_from_dict(data["graph"])
    surface = surface_from_dict(data["surface"])
    assignment = SheetAssignment(tuple(data["assignment"]))
    points = tuple(SurfacePoint(tuple(to_fraction(c) for c in coordinates), sheet)
                   for coordinates, sheet in zip(data["points"], assignment.sheets))
    return Framework(graph, surface, assignment, points)


def matrix_to_frame(matrix: RelativeRigidityMatrix) -> pd.DataFrame:
    values = [[str(x) for x in row] for row in matrix.entries]
    return pd.DataFrame(values, index=list(matrix.row_labels), columns=list(matrix.column_labels))


def matrix_to_csv(matrix: RelativeRigidityMatrix) -> str:
    buffer = io.StringIO()
    matrix_to_frame(matrix).to_csv(buffer)
    return buffer.getvalue()
