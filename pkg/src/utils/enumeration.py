import logging
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from src.utils.constants import MAX_ENUMERATION_VERTICES
from src.utils.exceptions import SizeLimitExceeded
from src.utils.graph_io import graph_from_networkx, graph_to_graph6
from src.utils.graph_utils import Graph, are_isomorphic

logger = logging.getLogger(__name__)

ATLAS_MAX_VERTICES = 7


@lru_cache(maxsize=None)
def _atlas_connected(n: int) -> Tuple[Graph, ...]:
    graphs = [graph_from_networkx(g) for g in nx.graph_atlas_g()
              if g.number_of_nodes() == n and nx.is_connected(g)]
    return tuple(graphs)


@lru_cache(maxsize=None)
def _extend_by_one_vertex(n: int) -> Tuple[Graph, ...]:
    """
    Connected graphs on n vertices from connected graphs on n - 1 vertices plus a vertex with
    every nonempty neighbour set. Complete because every connected graph has a non-cut vertex.
    """
    buckets: Dict[str, List[Graph]] = {}
    for base in connected_graphs(n - 1):
        for size in range(1, n):
            for neighbours in combinations(range(n - 1), size):
                candidate = Graph.from_edges(n, list(base.edges) + [(v, n - 1) for v in neighbours])
                key = nx.weisfeiler_lehman_graph_hash(candidate.to_networkx(), iterations=3)
                bucket = buckets.setdefault(key, [])
                if not any(are_isomorphic(candidate, other, max_vertices=n) for other in bucket):
                    bucket.append(candidate)
    graphs = [g for bucket in buckets.values() for g in bucket]
    logger.info(f"Generated {len(graphs)} connected graphs on {n} vertices")
    return tuple(sorted(graphs, key=graph_to_graph6))


def connected_graphs(n: int, edge_count: Optional[int] = None) -> Iterator[Graph]:
    """Connected graphs on n vertices, one per isomorphism class"""
    if n > MAX_ENUMERATION_VERTICES:
        raise SizeLimitExceeded(f"Built-in enumeration stops at {MAX_ENUMERATION_VERTICES} vertices (got {n}); "
                                f"feed a graph6 stream instead")
    if n < 1:
        return
    graphs = _atlas_connected(n) if n <= ATLAS_MAX_VERTICES else _extend_by_one_vertex(n)
    for G in graphs:
        if edge_count is None or G.edge_count == edge_count:
            yield G


def connected_graphs_up_to(max_n: int, min_n: int = 1) -> Iterator[Graph]:
    for n in range(min_n, max_n + 1):
        yield from connected_graphs(n)


def graphs_with_freedom(max_n: int, freedom: int, min_n: int = 1) -> Iterator[Graph]:
    """Connected graphs with 2|V| - |E| = freedom"""
    for n in range(min_n, max_n + 1):
        yield from connected_graphs(n, edge_count=2 * n - freedom)
