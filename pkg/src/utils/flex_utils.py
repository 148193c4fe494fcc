import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.utils.constants import (DEFAULT_STEP_SIZE, EDGE_DRIFT_TOL, FLOAT_RANK_TOL, NEWTON_MAX_ITER, PROJECTION_TOL,
                                 STEP_HALVINGS, SURFACE_DRIFT_TOL, WITNESS_DELTA)
from src.utils.exceptions import CorrectionDiverged, NoConvergence, NoNontrivialFlex
from src.utils.graph_utils import Edge, Graph, complete_graph
from src.utils.linalg_utils import kernel_float
from src.utils.rigidity_utils import Framework, analyze, free_rigidity_matrix
from src.utils.surface_utils import SheetAssignment, SurfaceFamily, h_gradient, h_value, project

logger = logging.getLogger(__name__)


@dataclass
class FlexPath:
    samples: List[np.ndarray]
    step_size: float
    max_edge_error: float = 0.0
    max_surface_error: float = 0.0
    step_sizes: List[float] = field(default_factory=list)

    @property
    def vertex_count(self) -> int:
        return self.samples[0].shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step_size": self.step_size,
            "max_edge_error": self.max_edge_error,
            "max_surface_error": self.max_surface_error,
            "samples": [sample.tolist() for sample in self.samples],
        }


class _Constraints:
    """Edge lengths and sheet equations of a framework, in float arithmetic"""

    def __init__(self, G: Graph, M: SurfaceFamily, assignment: SheetAssignment, start: np.ndarray):
        self.graph = G
        self.surface = M
        self.assignment = assignment
        self.lengths = np.array([np.sum((start[i] - start[j]) ** 2) for i, j in G.edges])
        self.scale = max(1.0, float(np.max(np.abs(start))))

    def residual(self, x: np.ndarray) -> np.ndarray:
        edges = [np.sum((x[i] - x[j]) ** 2) for i, j in self.graph.edges] - self.lengths
        sheets = [float(h_value(self.surface, self.assignment[k], x[k].tolist())) for k in range(len(x))]
        return np.concatenate([np.atleast_1d(edges), sheets])

    def matrix(self, x: np.ndarray, graph: Optional[Graph] = None) -> np.ndarray:
        """R(G, x, M) with half-gradient surface rows"""
        graph = graph or self.graph
        edge_block = free_rigidity_matrix(graph, x.tolist(), 3).reshape(graph.edge_count, 3 * len(x))
        surface_block = np.zeros((len(x), 3 * len(x)))
        for k in range(len(x)):
            surface_block[k, 3 * k:3 * k + 3] = np.asarray(h_gradient(self.surface, self.assignment[k], x[k].tolist()),
                                                           dtype=float) / 2
        return np.vstack([edge_block, surface_block])

    def edge_error(self, x: np.ndarray) -> float:
        if not self.graph.edges:
            return 0.0
        current = np.sqrt([np.sum((x[i] - x[j]) ** 2) for i, j in self.graph.edges])
        return float(np.max(np.abs(current - np.sqrt(self.lengths))))

    def surface_error(self, x: np.ndarray) -> float:
        return float(np.max(np.abs(self.residual(x)[self.graph.edge_count:])))


def _nontrivial_directions(constraints: _Constraints, x: np.ndarray) -> np.ndarray:
    """Kernel of R(G,x,M) with the rigid motions ker R(K_n,x,M) projected out; columns are directions"""
    kernel = kernel_float(constraints.matrix(x), FLOAT_RANK_TOL)
    motions = kernel_float(constraints.matrix(x, complete_graph(len(x))), FLOAT_RANK_TOL)
    projected = kernel - motions @ (motions.T @ kernel)
    if projected.size == 0:
        return projected
    u, s, _ = np.linalg.svd(projected, full_matrices=False)
    keep = s > FLOAT_RANK_TOL ** 0.5 * max(1.0, s[0])
    return u[:, keep]


def _choose_direction(directions: np.ndarray, previous: Optional[np.ndarray], sign: float) -> np.ndarray:
    if previous is not None:
        follow = directions @ (directions.T @ previous)
        if np.linalg.norm(follow) > 1e-8:
            return follow / np.linalg.norm(follow)
    direction = directions[:, 0].copy()
    # sign convention: largest component positive, then flipped by the seed
    if direction[np.argmax(np.abs(direction))] < 0:
        direction = -direction
    if previous is not None and direction @ previous < 0:
        direction = -direction
    return sign * direction if previous is None else direction


def _snap(constraints: _Constraints, y: np.ndarray) -> np.ndarray:
    """Project every point onto its own sheet"""
    return np.array([project(constraints.surface, constraints.assignment[k], y[k]) for k in range(len(y))])


def _correct(constraints: _Constraints, y: np.ndarray) -> np.ndarray:
    """Gauss-Newton on the full constraint system, least-squares steps"""
    tolerance = PROJECTION_TOL * constraints.scale
    for _ in range(NEWTON_MAX_ITER):
        residual = constraints.residual(y)
        if not np.all(np.isfinite(residual)):
            break
        if np.max(np.abs(residual)) <= tolerance:
            return y
        jacobian = 2 * constraints.matrix(y)
        delta, *_ = np.linalg.lstsq(jacobian, -residual, rcond=None)
        y = y + delta.reshape(y.shape)
    residual = constraints.residual(y)
    if np.all(np.isfinite(residual)) and np.max(np.abs(residual)) <= tolerance:
        return y
    raise CorrectionDiverged(f"Corrector did not reach {tolerance:.1e} in {NEWTON_MAX_ITER} iterations")


def trace_flex(F: Framework, steps: int = 200, step_size: float = DEFAULT_STEP_SIZE,
               direction_seed: int = 1) -> FlexPath:
    """
    Predictor-corrector continuation along a nontrivial flex. The sign of direction_seed
    picks which way the path leaves the start.
    """
    report = analyze(F)
    trivial = max(report.ambient_dof, report.pointwise_dof or 0)
    if report.nullity <= trivial:
        raise NoNontrivialFlex(f"{F.graph} is infinitesimally rigid on {F.surface.kind.value} "
                               f"(nullity {report.nullity})")

    x = np.array([[float(c) for c in p.coordinates] for p in F.points])
    constraints = _Constraints(F.graph, F.surface, F.assignment, x)
    if not F.is_exact:
        x = _snap(constraints, x)
    sign = -1.0 if direction_seed < 0 else 1.0
    h = step_size * constraints.scale
    path = FlexPath(samples=[x.copy()], step_size=h)
    previous: Optional[np.ndarray] = None

    for step in range(steps):
        directions = _nontrivial_directions(constraints, x)
        if directions.shape[1] == 0:
            logger.warning(f"Flex space collapsed at step {step}; stopping the path early")
            break
        direction = _choose_direction(directions, previous, sign)
        trial = h
        for attempt in range(STEP_HALVINGS + 1):
            try:
                y = _correct(constraints, _snap(constraints, x + trial * direction.reshape(x.shape)))
                break
            except (CorrectionDiverged, NoConvergence) as exc:
                if attempt == STEP_HALVINGS:
                    raise CorrectionDiverged(f"Could not trace flex at step {step} - Error: {exc}")
                trial /= 2
                logger.debug(f"Step {step}: halving step to {trial:.2e}")
        previous = (y - x).reshape(-1)
        previous /= np.linalg.norm(previous)
        x = y
        path.samples.append(x.copy())
        path.step_sizes.append(trial)
        path.max_edge_error = max(path.max_edge_error, constraints.edge_error(x))
        path.max_surface_error = max(path.max_surface_error, constraints.surface_error(x))

    if path.max_edge_error > EDGE_DRIFT_TOL * constraints.scale or \
            path.max_surface_error > SURFACE_DRIFT_TOL * constraints.scale:
        raise CorrectionDiverged(f"Path drifted off the constraint set (edge {path.max_edge_error:.1e}, "
                                 f"surface {path.max_surface_error:.1e})")
    logger.info(f"Traced {len(path.samples) - 1} flex steps for {F.graph}")
    return path


def noncongruence_witness(path: FlexPath, F: Framework) -> Optional[Tuple[Edge, float]]:
    """The non-edge pair whose distance moves most along the path, if it moves more than the witness threshold"""
    best: Optional[Tuple[Edge, float]] = None
    start = path.samples[0]
    for i in range(F.graph.vertex_count):
        for j in range(i + 1, F.graph.vertex_count):
            if F.graph.has_edge(i, j):
                continue
            initial = np.linalg.norm(start[i] - start[j])
            delta = max(abs(np.linalg.norm(s[i] - s[j]) - initial) for s in path.samples)
            if best is None or delta > best[1]:
                best = ((i, j), float(delta))
    if best is None or best[1] <= WITNESS_DELTA:
        return None
    return best


def flex_path_to_frame(path: FlexPath) -> pd.DataFrame:
    rows = [
        {"step": step, "vertex": k, "x": point[0], "y": point[1], "z": point[2]}
        for step, sample in enumerate(path.samples)
        for k, point in enumerate(sample)
    ]
    return pd.DataFrame(rows, columns=["step", "vertex", "x", "y", "z"])
