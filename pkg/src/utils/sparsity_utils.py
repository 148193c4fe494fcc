import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Set

from src.utils.constants import MAX_ORACLE_VERTICES
from src.utils.exceptions import InvalidInput, NotConeGraph, SizeLimitExceeded
from src.utils.graph_utils import Edge, Graph, SubgraphRef, delete_vertex, freedom_number, remove_edge

logger = logging.getLogger(__name__)

SUPPORTED_TYPES = (2, 3)


@dataclass(frozen=True)
class SparsityVerdict:
    independent: bool
    maximal: bool
    witness: Optional[SubgraphRef] = None

    def to_dict(self) -> Dict:
        return {
            "independent": self.independent,
            "maximal": self.maximal,
            "witness": self.witness.to_dict() if self.witness is not None else None,
        }


def _check_k(k: int):
    if k not in SUPPORTED_TYPES:
        raise ValueError(f"Independence type must be one of {SUPPORTED_TYPES}, got {k}")


class PebbleGame:
    """
    (2, l)-pebble game, l in {2, 3}.

    Each vertex starts with two pebbles; an accepted edge is oriented away from the
    vertex whose pebble covers it. An edge (u, v) is accepted when l + 1 pebbles can be
    gathered on u and v.
    """

    def __init__(self, vertex_count: int, l: int):
        self.l = l
        self.pebbles = [2] * vertex_count
        self.out: List[List[int]] = [[] for _ in range(vertex_count)]
        self.accepted: List[Edge] = []

    def _search(self, root: int, pinned: Set[int]) -> bool:
        """Move one free pebble to root along a directed path; pebbles on pinned vertices stay put"""
        parent: Dict[int, int] = {root: -1}
        stack = [root]
        found = -1
        while stack and found < 0:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0 and y not in pinned:
                    found = y
                    break
                stack.append(y)
        if found < 0:
            return False
        # reverse the path root -> ... -> found
        y = found
        while parent[y] != -1:
            x = parent[y]
            self.out[x].remove(y)
            self.out[y].append(x)
            y = x
        self.pebbles[found] -= 1
        self.pebbles[root] += 1
        return True

    def _gather(self, u: int, v: int) -> int:
        progress = True
        while progress and self.pebbles[u] + self.pebbles[v] < self.l + 1:
            progress = False
            while self.pebbles[u] < 2 and self._search(u, {v}):
                progress = True
            while self.pebbles[v] < 2 and self._search(v, {u}):
                progress = True
        return self.pebbles[u] + self.pebbles[v]

    def reach(self, *roots: int) -> Set[int]:
        seen = set(roots)
        stack = list(roots)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def insert(self, u: int, v: int) -> bool:
        if self._gather(u, v) < self.l + 1:
            return False
        source = u if self.pebbles[u] > 0 else v
        target = v if source == u else u
        self.pebbles[source] -= 1
        self.out[source].append(target)
        self.accepted.append((u, v))
        return True

    def _region(self, vertices: Set[int], u: int, v: int) -> SubgraphRef:
        edges = {e for e in self.accepted if e[0] in vertices and e[1] in vertices}
        edges.add((u, v))
        return SubgraphRef(frozenset(vertices), frozenset(edges))

    def witness(self, u: int, v: int) -> SubgraphRef:
        """
        Tight region blocking (u, v) plus the rejected edge; freedom number l - 1.
        When one endpoint already holds both its pebbles the region is the other endpoint's
        reach plus that endpoint.
        """
        candidates = [self.reach(u, v), self.reach(v) | {u}, self.reach(u) | {v}]
        return min((self._region(c, u, v) for c in candidates), key=freedom_number)


def check_type(G: Graph, k: int) -> SparsityVerdict:
    _check_k(k)
    game = PebbleGame(G.vertex_count, k)
    for u, v in G.edges:
        if not game.insert(u, v):
            witness = game.witness(u, v)
            logger.debug(f"Edge ({u},{v}) rejected; witness on {sorted(witness.vertex_subset)} "
                         f"with f = {freedom_number(witness)}")
            return SparsityVerdict(independent=False, maximal=False, witness=witness)
    maximal = freedom_number(G) == k
    witness = None if maximal else SubgraphRef.whole(G)
    return SparsityVerdict(independent=True, maximal=maximal, witness=witness)


def _edges_within(G: Graph, vertices: Set[int]) -> List[Edge]:
    return [e for e in G.edges if e[0] in vertices and e[1] in vertices]


def check_type_oracle(G: Graph, k: int) -> SparsityVerdict:
    """Exhaustive check over every vertex subset and its induced edges"""
    _check_k(k)
    if G.vertex_count > MAX_ORACLE_VERTICES:
        raise SizeLimitExceeded(f"Brute-force sparsity oracle is capped at {MAX_ORACLE_VERTICES} vertices "
                                f"(got {G.vertex_count})")
    for size in range(1, G.vertex_count + 1):
        for subset in combinations(G.vertices, size):
            vertices = set(subset)
            edges = _edges_within(G, vertices)
            # type 3 only constrains subgraphs with an edge
            if k == 3 and not edges:
                continue
            if 2 * size - len(edges) < k:
                witness = SubgraphRef(frozenset(vertices), frozenset(edges))
                return SparsityVerdict(independent=False, maximal=False, witness=witness)
    maximal = freedom_number(G) == k
    return SparsityVerdict(independent=True, maximal=maximal, witness=None if maximal else SubgraphRef.whole(G))


def is_laman(G: Graph) -> bool:
    return check_type(G, 3).maximal


def is_laman_plus_one(G: Graph) -> Optional[Edge]:
    """Some edge e with G minus e Laman, or None"""
    if G.edge_count != 2 * G.vertex_count - 2:
        return None
    if any(G.degree(v) == 1 for v in G.vertices):
        return None
    for e in G.edges:
        if is_laman(remove_edge(G, *e)):
            return e
    return None


def maximal_tight_subgraph(G: Graph, k: int = 2) -> Optional[SubgraphRef]:
    """
    A proper vertex-induced subgraph with f = k and at least one edge, maximal under inclusion.

    Subsets are scanned from the largest size down, so the first hit is inclusion-maximal;
    ties are broken lexicographically.
    """
    _check_k(k)
    for size in range(G.vertex_count - 1, 1, -1):
        for subset in combinations(G.vertices, size):
            vertices = set(subset)
            edges = _edges_within(G, vertices)
            if edges and 2 * size - len(edges) == k:
                return SubgraphRef(frozenset(vertices), frozenset(edges))
    return None


def check_tight_3_6(G: Graph) -> bool:
    """
    3|V| - |E| = 6 and 3|V'| - |E'| >= 6 for subgraphs on more than two vertices.

    (3, 6) counts are not matroidal, so this is an exhaustive subset scan.
    """
    if 3 * G.vertex_count - G.edge_count != 6:
        return False
    for size in range(3, G.vertex_count):
        for subset in combinations(G.vertices, size):
            if 3 * size - len(_edges_within(G, set(subset))) < 6:
                return False
    return True


def _cone_base(G: Graph, apex: int) -> Graph:
    if not 0 <= apex < G.vertex_count:
        raise NotConeGraph(f"Vertex {apex} is not in the graph")
    if G.degree(apex) != G.vertex_count - 1:
        raise NotConeGraph(f"Vertex {apex} is not adjacent to every other vertex")
    base, _ = delete_vertex(G, apex)
    return base


def check_point_line(G: Graph, line_vertex: int) -> bool:
    """
    Point-line count 3|V_p| + 4 - |E| = 6 with the subgraph inequalities, for a cone graph
    whose apex is the single line.

    Every point carries one point-line edge, so the count reduces to type-2 maximality
    of the point subgraph.
    """
    base = _cone_base(G, line_vertex)
    if base.vertex_count < 4 or not base.is_connected():
        raise InvalidInput("The point subgraph must be connected with at least 4 points")
    if 3 * base.vertex_count + 4 - G.edge_count != 6:
        return False
    return check_type(base, 2).maximal


def check_point_plane(G: Graph, plane_vertex: int) -> bool:
    """Point-plane count: the plane counts as a vertex, so 3|V| - |E| = 6 over the whole cone graph"""
    base = _cone_base(G, plane_vertex)
    if 3 * G.vertex_count - G.edge_count != 6:
        return False
    return is_laman(base)


def maxwell_subgraph_check(G: Graph, dof: int) -> Optional[SubgraphRef]:
    """
    Necessary count for minimal rigidity on a surface with `dof` ambient degrees of freedom:
    2|V| - |E| = dof and 2|V'| - |E'| >= dof on subgraphs with an edge.
    Returns a violating subgraph, or None.
    """
    verdict = check_type(G, dof)
    if not verdict.independent:
        return verdict.witness
    if freedom_number(G) != dof:
        return SubgraphRef.whole(G)
    return None
