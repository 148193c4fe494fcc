import concurrent.futures
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.clients.rigidity_client import RigidityClient
from src.utils.constants import DEFAULT_TRIALS, SCHEMA_VERSION, THREADS
from src.utils.enumeration import graphs_with_freedom
from src.utils.graph_io import graph_to_graph6, iter_graph6_stream
from src.utils.graph_utils import Graph, cone, freedom_number
from src.utils.sparsity_utils import check_point_line, check_tight_3_6, check_type, is_laman
from src.utils.tree_utils import (decompose_laman_plus_edge, decompose_type2, laman_plus_edge_multiset,
                                  verify_decomposition)

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


@dataclass
class VerificationSummary:
    theorem: str
    graphs_checked: int = 0
    agreements: int = 0
    disagreements: List[Tuple[str, bool, bool]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "theorem": self.theorem,
            "graphs_checked": self.graphs_checked,
            "agreements": self.agreements,
            "disagreements": [
                {"graph6": g6, "combinatorial": comb, "numerical": num} for g6, comb, num in self.disagreements
            ],
        }


@dataclass(frozen=True)
class TheoremCheck:
    """Graphs with 2|V| - |E| = freedom on at least min_n vertices, and the two verdicts to compare"""
    freedom: int
    min_n: int
    combinatorial: Callable[[Graph, int], bool]
    numerical: Callable[[Graph, int], bool]


def _trees_hold(G: Graph) -> bool:
    if freedom_number(G) == 2:
        return verify_decomposition(G, decompose_type2(G))
    for u, v in combinations(G.vertices, 2):
        multiset = laman_plus_edge_multiset(G, (u, v))
        if not verify_decomposition(multiset, decompose_laman_plus_edge(G, (u, v)), G.vertex_count):
            return False
    return True


class VerificationClient:
    """Exhaustive comparison of combinatorial characterisations against numerical rank"""
    def __init__(self, max_n: int = 7, seed: int = 0, trials: int = DEFAULT_TRIALS,
                 threads: Optional[int] = None, verbose: bool = False):
        self.max_n = max_n
        self.seed = seed
        self.trials = trials
        self.threads = threads or THREADS
        self.verbose = verbose
        logger.setLevel(logging.INFO if verbose else logging.WARNING)
        self.clients = {
            "planes": RigidityClient("planes", ("0", "1"), trials, seed, verbose),
            "spheres": RigidityClient("spheres", ("1", "2"), trials, seed, verbose),
            "cylinder": RigidityClient("cylinders", ("1",), trials, seed, verbose),
            "concentric-cylinders": RigidityClient("cylinders", ("1", "2"), trials, seed, verbose),
        }
        self.theorems = self._build_theorems()

    def _surface_check(self, name: str) -> TheoremCheck:
        client = self.clients[name]
        return TheoremCheck(
            freedom=client.config.freedom,
            min_n=1,
            combinatorial=lambda G, seed: client.combinatorial_verdict(G),
            numerical=lambda G, seed: client.analyze_graph(G, seed=seed).isostatic,
        )

    def _build_theorems(self) -> Dict[str, TheoremCheck]:
        theorems = {name: self._surface_check(name) for name in self.clients}
        theorems["cone"] = TheoremCheck(
            freedom=3,
            min_n=4,
            combinatorial=lambda G, seed: is_laman(G),
            numerical=lambda G, seed: check_tight_3_6(cone(G)),
        )
        theorems["point-line"] = TheoremCheck(
            freedom=2,
            min_n=4,
            combinatorial=lambda G, seed: check_type(G, 2).maximal,
            numerical=lambda G, seed: check_point_line(cone(G), G.vertex_count),
        )
        theorems["trees"] = TheoremCheck(
            freedom=2,
            min_n=2,
            combinatorial=lambda G, seed: check_type(G, 2).maximal,
            numerical=lambda G, seed: check_type(G, 2).maximal and _trees_hold(G),
        )
        theorems["laman-trees"] = TheoremCheck(
            freedom=3,
            min_n=2,
            combinatorial=lambda G, seed: is_laman(G),
            numerical=lambda G, seed: is_laman(G) and _trees_hold(G),
        )
        return theorems

    def candidate_graphs(self, theorem: str, graphs_file: Optional[str] = None) -> List[Graph]:
        check = self.theorems[theorem]
        if graphs_file:
            source: Iterable[Graph] = iter_graph6_stream(graphs_file)
        else:
            source = graphs_with_freedom(self.max_n, check.freedom, min_n=check.min_n)
        graphs = [G for G in source
                  if freedom_number(G) == check.freedom and G.vertex_count >= check.min_n and G.is_connected()]
        return sorted(graphs, key=lambda G: (G.vertex_count, graph_to_graph6(G)))

    def _graph_seed(self, index: int) -> int:
        return int(np.random.SeedSequence([self.seed, index]).generate_state(1)[0])

    def run(self, theorem: str, graphs_file: Optional[str] = None) -> pd.DataFrame:
        """One row per graph: theorem, n, graph6, combinatorial, numerical, agrees"""
        if theorem not in self.theorems:
            raise ValueError(f"Unsupported theorem: {theorem}. Available theorems are: {', '.join(self.theorems)}")
        check = self.theorems[theorem]
        graphs = self.candidate_graphs(theorem, graphs_file)
        logger.info(f"Checking {theorem} on {len(graphs)} graphs")

        def verify_graph(index: int) -> Dict[str, Any]:
            G = graphs[index]
            seed = self._graph_seed(index)
            combinatorial = check.combinatorial(G, seed)
            numerical = check.numerical(G, seed)
            return {
                "theorem": theorem,
                "n": G.vertex_count,
                "graph6": graph_to_graph6(G),
                "combinatorial": combinatorial,
                "numerical": numerical,
                "agrees": combinatorial == numerical,
            }

        rows = []
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            future_to_index = {executor.submit(verify_graph, index): index for index in range(len(graphs))}
            for future in concurrent.futures.as_completed(future_to_index):
                index = future_to_index[future]
                try:
                    rows.append(future.result())
                except Exception as e:
                    logger.error(f"Error verifying graph {graph_to_graph6(graphs[index])}: {str(e)}")
                    raise

        columns = ["theorem", "n", "graph6", "combinatorial", "numerical", "agrees"]
        df = pd.DataFrame(rows, columns=columns)
        if not df.empty:
            df = df.sort_values(["n", "graph6"]).reset_index(drop=True)
        return df

    def summarize(self, theorem: str, results_df: pd.DataFrame) -> VerificationSummary:
        summary = VerificationSummary(theorem=theorem, graphs_checked=len(results_df))
        summary.agreements = int(results_df["agrees"].sum()) if not results_df.empty else 0
        disagreeing = results_df[~results_df["agrees"]] if not results_df.empty else results_df
        summary.disagreements = [
            (row.graph6, bool(row.combinatorial), bool(row.numerical)) for row in disagreeing.itertuples()
        ]
        if summary.disagreements:
            logger.error(f"{theorem}: {len(summary.disagreements)} disagreements out of {summary.graphs_checked}")
        return summary

    def verify(self, theorem: str, graphs_file: Optional[str] = None) -> VerificationSummary:
        return self.summarize(theorem, self.run(theorem, graphs_file))
