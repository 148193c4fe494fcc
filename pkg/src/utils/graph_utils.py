import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from src.utils.constants import MAX_ISOMORPHISM_VERTICES
from src.utils.exceptions import ImproperSubgraph, InvalidEdge, InvalidVertices, NotSimple, SizeLimitExceeded

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple labeled graph on vertices 0..vertex_count-1, edges stored as sorted (i, j) with i < j"""
    vertex_count: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InvalidVertices(f"A graph needs at least one vertex, got {self.vertex_count}")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise NotSimple(f"Loop edge ({u},{v}) is not allowed")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidEdge(f"Edge ({u},{v}) has an endpoint outside 0..{self.vertex_count - 1}")
            if u > v:
                raise InvalidEdge(f"Edge ({u},{v}) is not in canonical form; use Graph.from_edges")
            if (u, v) in seen:
                raise NotSimple(f"Duplicate edge ({u},{v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise InvalidEdge("Edges must be lexicographically sorted; use Graph.from_edges")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        canonical = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise NotSimple(f"Loop edge ({u},{v}) is not allowed")
            edge = canonical_edge(u, v)
            if edge in canonical:
                raise NotSimple(f"Duplicate edge {edge}")
            canonical.add(edge)
        return cls(vertex_count, tuple(sorted(canonical)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> Tuple[FrozenSet[int], ...]:
        adjacency: List[set] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adjacency[u].add(v)
            adjacency[v].add(u)
        return tuple(frozenset(a) for a in adjacency)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edge_set

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    def to_dict(self) -> Dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, edges={list(self.edges)})"


@dataclass(frozen=True)
class SubgraphRef:
    """A subgraph of some host graph, kept in the host's vertex labels"""
    vertex_subset: FrozenSet[int]
    edge_subset: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        for u, v in self.edge_subset:
            if u not in self.vertex_subset or v not in self.vertex_subset:
                raise ImproperSubgraph(f"Edge ({u},{v}) has an endpoint outside the vertex subset")

    @classmethod
    def induced(cls, G: Graph, vertices: Iterable[int]) -> "SubgraphRef":
        vs = frozenset(vertices)
        return cls(vs, frozenset(e for e in G.edges if e[0] in vs and e[1] in vs))

    @classmethod
    def whole(cls, G: Graph) -> "SubgraphRef":
        return cls(frozenset(G.vertices), G.edge_set)

    def union(self, other: "SubgraphRef") -> "SubgraphRef":
        return SubgraphRef(self.vertex_subset | other.vertex_subset, self.edge_subset | other.edge_subset)

    def intersection(self, other: "SubgraphRef") -> "SubgraphRef":
        return SubgraphRef(self.vertex_subset & other.vertex_subset, self.edge_subset & other.edge_subset)

    def is_induced_in(self, G: Graph) -> bool:
        return self.edge_subset == SubgraphRef.induced(G, self.vertex_subset).edge_subset

    def as_graph(self) -> Tuple[Graph, Dict[int, int]]:
        """Relabel to a standalone Graph; returns (graph, host vertex -> new vertex)"""
        mapping = {v: i for i, v in enumerate(sorted(self.vertex_subset))}
        graph = Graph.from_edges(len(mapping), [(mapping[u], mapping[v]) for u, v in self.edge_subset])
        return graph, mapping

    def to_dict(self) -> Dict:
        return {"vertices": sorted(self.vertex_subset), "edges": [list(e) for e in sorted(self.edge_subset)]}


def freedom_number(H: Union[Graph, SubgraphRef]) -> int:
    if isinstance(H, Graph):
        return 2 * H.vertex_count - H.edge_count
    return 2 * len(H.vertex_subset) - len(H.edge_subset)


@dataclass(frozen=True)
class Contraction:
    graph: Graph
    vertex_map: Dict[int, int]
    star: int


def contract(G: Graph, H: SubgraphRef) -> Contraction:
    """
    Contract H to a single vertex v*.

    Vertices outside H keep their relative order and are relabeled 0..m-2; v* becomes m-1.
    Raises NotSimple if the quotient would carry a loop or a parallel edge.
    """
    inside = H.vertex_subset
    if not inside or not inside < frozenset(G.vertices):
        raise ImproperSubgraph("Contraction needs a nonempty proper vertex subset")
    if not H.edge_subset <= G.edge_set:
        raise ImproperSubgraph("Subgraph edges are not edges of the host graph")
    sub_graph, _ = H.as_graph()
    if not sub_graph.is_connected():
        raise ImproperSubgraph("Contracted subgraph must be connected")

    outside = [v for v in G.vertices if v not in inside]
    star = len(outside)
    vertex_map = {v: i for i, v in enumerate(outside)}
    for v in inside:
        vertex_map[v] = star

    new_edges = set()
    for u, v in G.edges:
        if (u, v) in H.edge_subset:
            continue
        a, b = vertex_map[u], vertex_map[v]
        if a == b:
            raise NotSimple(f"Edge ({u},{v}) joins two vertices of the contracted subgraph and would become a loop")
        edge = canonical_edge(a, b)
        if edge in new_edges:
            raise NotSimple(f"Vertex {u if a != star else v} has several edges into the contracted subgraph")
        new_edges.add(edge)
    return Contraction(Graph(star + 1, tuple(sorted(new_edges))), vertex_map, star)


def cone(G: Graph) -> Graph:
    apex = G.vertex_count
    return Graph.from_edges(apex + 1, list(G.edges) + [(v, apex) for v in G.vertices])


def delete_vertex(G: Graph, v: int) -> Tuple[Graph, Dict[int, int]]:
    if not 0 <= v < G.vertex_count or G.vertex_count == 1:
        raise InvalidVertices(f"Cannot delete vertex {v} from a graph on {G.vertex_count} vertices")
    mapping = {u: (u if u < v else u - 1) for u in G.vertices if u != v}
    edges = [(mapping[a], mapping[b]) for a, b in G.edges if v not in (a, b)]
    return Graph.from_edges(G.vertex_count - 1, edges), mapping


def add_edge(G: Graph, u: int, v: int) -> Graph:
    if G.has_edge(u, v):
        raise NotSimple(f"Edge ({u},{v}) already present")
    return Graph.from_edges(G.vertex_count, list(G.edges) + [(u, v)])


def remove_edge(G: Graph, u: int, v: int) -> Graph:
    edge = canonical_edge(u, v)
    if edge not in G.edge_set:
        raise InvalidEdge(f"Edge {edge} is not in the graph")
    return Graph(G.vertex_count, tuple(e for e in G.edges if e != edge))


def relabel(G: Graph, mapping: Dict[int, int]) -> Graph:
    return Graph.from_edges(G.vertex_count, [(mapping[u], mapping[v]) for u, v in G.edges])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    shift = G1.vertex_count
    return Graph.from_edges(shift + G2.vertex_count, list(G1.edges) + [(u + shift, v + shift) for u, v in G2.edges])


def join_at_vertex(G1: Graph, G2: Graph, v1: int = 0, v2: int = 0) -> Graph:
    """Identify vertex v1 of G1 with vertex v2 of G2"""
    mapping = {}
    nxt = G1.vertex_count
    for v in G2.vertices:
        if v == v2:
            mapping[v] = v1
        else:
            mapping[v] = nxt
            nxt += 1
    return Graph.from_edges(nxt, list(G1.edges) + [(mapping[u], mapping[v]) for u, v in G2.edges])


def join_by_two_edges(G1: Graph, G2: Graph, first: Edge = (0, 0), second: Edge = (1, 1)) -> Graph:
    """Disjoint union plus two disjoint connecting edges (a in G1, b in G2)"""
    if first[0] == second[0] or first[1] == second[1]:
        raise InvalidEdge("The two connecting edges must be disjoint")
    union = disjoint_union(G1, G2)
    shift = G1.vertex_count
    return Graph.from_edges(union.vertex_count, list(union.edges) + [(first[0], first[1] + shift),
                                                                      (second[0], second[1] + shift)])


def double_banana() -> Graph:
    """Two copies of K5 minus an edge glued at the endpoints of the missing edge"""
    banana = complete_graph(5)
    banana = remove_edge(banana, 0, 1)
    # 0 and 1 are the degree-3 tips of each banana
    mapping = {0: 0, 1: 1, 2: 5, 3: 6, 4: 7}
    edges = list(banana.edges) + [(mapping[u], mapping[v]) for u, v in banana.edges]
    return Graph.from_edges(8, edges)


def _invariants(G: Graph) -> Tuple:
    triangles = nx.triangles(G.to_networkx())
    return (
        G.vertex_count,
        G.edge_count,
        tuple(sorted(G.degree(v) for v in G.vertices)),
        tuple(sorted((G.degree(v), triangles[v]) for v in G.vertices)),
    )


def find_isomorphism(G1: Graph, G2: Graph, max_vertices: Optional[int] = None) -> Optional[Dict[int, int]]:
    """Edge-preserving bijection G1 -> G2, or None"""
    cap = MAX_ISOMORPHISM_VERTICES if max_vertices is None else max_vertices
    if max(G1.vertex_count, G2.vertex_count) > cap:
        raise SizeLimitExceeded(f"Isomorphism search is capped at {cap} vertices "
                                f"(got {G1.vertex_count} and {G2.vertex_count})")
    if G1.vertex_count != G2.vertex_count or G1.edge_count != G2.edge_count:
        return None
    if _invariants(G1) != _invariants(G2):
        return None
    matcher = GraphMatcher(G1.to_networkx(), G2.to_networkx())
    if not matcher.is_isomorphic():
        return None
    return dict(matcher.mapping)


def are_isomorphic(G1: Graph, G2: Graph, max_vertices: Optional[int] = None) -> bool:
    return find_isomorphism(G1, G2, max_vertices) is not None
