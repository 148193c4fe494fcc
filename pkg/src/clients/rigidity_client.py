import logging
from typing import Optional, Sequence, Union

import numpy as np

from src.utils.constants import DEFAULT_TRIALS
from src.utils.graph_utils import Graph
from src.utils.rigidity_utils import Framework, RigidityReport, analyze, generic_analyze, sample_framework
from src.utils.sparsity_utils import check_type, is_laman
from src.utils.surface_utils import SheetAssignment, SurfaceFamily, ambient_dof

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


class BaseSurfaceConfig:
    def __init__(self, params: Sequence[Union[str, int]]):
        self.params = list(params)
        self.surface = self.build_surface()

    def build_surface(self) -> SurfaceFamily:
        raise NotImplementedError("This method should be implemented by subclasses")

    def combinatorial_verdict(self, G: Graph) -> bool:
        """Generic isostaticity predicted from the graph alone"""
        raise NotImplementedError("This method should be implemented by subclasses")

    @property
    def freedom(self) -> int:
        return ambient_dof(self.surface)

    def random_assignment(self, vertex_count: int, rng: np.random.Generator) -> SheetAssignment:
        """Uniformly random sheets; a single-sheet family puts every vertex on it"""
        sheets = rng.integers(0, self.surface.sheet_count, size=vertex_count)
        return SheetAssignment(tuple(int(s) for s in sheets))


class PlanesConfig(BaseSurfaceConfig):
    def __init__(self, params: Sequence[Union[str, int]] = ("0", "1")):
        super().__init__(params)
        self.surface_name = "planes"

    def build_surface(self) -> SurfaceFamily:
        return SurfaceFamily.parallel_planes(*self.params)

    def combinatorial_verdict(self, G: Graph) -> bool:
        return is_laman(G)


class SpheresConfig(BaseSurfaceConfig):
    def __init__(self, params: Sequence[Union[str, int]] = ("1", "2")):
        super().__init__(params)
        self.surface_name = "spheres"

    def build_surface(self) -> SurfaceFamily:
        return SurfaceFamily.concentric_spheres(*self.params)

    def combinatorial_verdict(self, G: Graph) -> bool:
        return is_laman(G)


class CylindersConfig(BaseSurfaceConfig):
    def __init__(self, params: Sequence[Union[str, int]] = ("1",)):
        super().__init__(params)
        self.surface_name = "cylinders"

    def build_surface(self) -> SurfaceFamily:
        return SurfaceFamily.concentric_cylinders(*self.params)

    def combinatorial_verdict(self, G: Graph) -> bool:
        return check_type(G, 2).maximal


class RigidityClient:
    """Generic and pointwise rigidity of graphs on one surface family"""
    def __init__(self, surface: str, params: Optional[Sequence[Union[str, int]]] = None,
                 trials: int = DEFAULT_TRIALS, seed: int = 0, verbose: bool = False):
        self.config = self._get_surface_config(surface, params)
        self.trials = trials
        self.seed = seed
        logger.setLevel(logging.INFO if verbose else logging.WARNING)

    def _get_surface_config(self, surface: str, params: Optional[Sequence[Union[str, int]]]) -> BaseSurfaceConfig:
        config_map = {"planes": PlanesConfig, "spheres": SpheresConfig, "cylinders": CylindersConfig}
        if surface.lower() not in config_map:
            raise ValueError(f"Unsupported surface: {surface}. Available surfaces are: {', '.join(config_map)}")
        config_class = config_map[surface.lower()]
        return config_class(params) if params else config_class()

    @property
    def surface(self) -> SurfaceFamily:
        return self.config.surface

    def assignment_for(self, G: Graph, assignment: Optional[Sequence[int]] = None,
                       seed: Optional[int] = None) -> SheetAssignment:
        if assignment is not None:
            return SheetAssignment(tuple(int(s) for s in assignment))
        rng = np.random.default_rng(self.seed if seed is None else seed)
        return self.config.random_assignment(G.vertex_count, rng)

    def analyze_graph(self, G: Graph, assignment: Optional[Sequence[int]] = None,
                      seed: Optional[int] = None) -> RigidityReport:
        seed = self.seed if seed is None else seed
        sheets = self.assignment_for(G, assignment, seed)
        report = generic_analyze(G, self.surface, sheets, self.trials, seed)
        logger.info(f"{G} on {self.config.surface_name} {self.config.params}: rank {report.rank}, "
                    f"isostatic {report.isostatic}")
        return report

    def analyze_framework(self, F: Framework) -> RigidityReport:
        return analyze(F)

    def combinatorial_verdict(self, G: Graph) -> bool:
        return self.config.combinatorial_verdict(G)

    def sample(self, G: Graph, assignment: Optional[Sequence[int]] = None,
               seed: Optional[int] = None) -> Framework:
        seed = self.seed if seed is None else seed
        return sample_framework(G, self.surface, self.assignment_for(G, assignment, seed),
                                np.random.default_rng(seed))

