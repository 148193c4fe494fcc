import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from src.utils.constants import MAX_BRUTE_FORCE_TREE_VERTICES
from src.utils.exceptions import InvalidVertices, NotLaman, NotType2Maximal, SizeLimitExceeded
from src.utils.graph_utils import Edge, Graph, canonical_edge, delete_vertex
from src.utils.moves_utils import (DerivationSequence, MoveKind, derive_type2_labeled, inverse_henneberg2_candidates,
                                   reverse_henneberg2)
from src.utils.sparsity_utils import is_laman

logger = logging.getLogger(__name__)

# (u, v, copy) with u < v; copy 1 marks the second copy of a doubled edge
TaggedEdge = Tuple[int, int, int]


def tag(u: int, v: int, copy: int = 0) -> TaggedEdge:
    a, b = canonical_edge(u, v)
    return (a, b, copy)


@dataclass(frozen=True)
class TreeDecomposition:
    tree1: FrozenSet[TaggedEdge]
    tree2: FrozenSet[TaggedEdge]

    def to_dict(self) -> Dict:
        return {
            "tree1": [list(e) for e in sorted(self.tree1)],
            "tree2": [list(e) for e in sorted(self.tree2)],
        }


def _as_tagged(edges: Iterable[Sequence[int]]) -> List[TaggedEdge]:
    return [tag(e[0], e[1], e[2] if len(e) > 2 else 0) for e in edges]


def is_spanning_tree(vertex_count: int, edges: Iterable[TaggedEdge]) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(range(vertex_count))
    g.add_edges_from((u, v) for u, v, _ in edges)
    return nx.is_tree(g)


def verify_decomposition(target: Union[Graph, Sequence[Sequence[int]]], d: TreeDecomposition,
                         vertex_count: Optional[int] = None) -> bool:
    """
    Check d against a graph or an edge multiset: the trees are disjoint, cover the
    multiset exactly, and each spans all vertices.
    """
    if isinstance(target, Graph):
        edges = _as_tagged(target.edges)
        vertex_count = target.vertex_count
    else:
        edges = _as_tagged(target)
        if vertex_count is None:
            vertex_count = 1 + max((max(u, v) for u, v, _ in edges), default=0)
    if len(set(edges)) != len(edges):
        logger.warning("Edge multiset repeats a tagged edge; tag the second copy with copy index 1")
        return False
    if d.tree1 & d.tree2:
        return False
    if d.tree1 | d.tree2 != set(edges):
        return False
    return is_spanning_tree(vertex_count, d.tree1) and is_spanning_tree(vertex_count, d.tree2)


# Nash-Williams for type-2 maximal graphs

K4_TREES = ({(0, 1), (0, 2), (1, 3)}, {(0, 3), (1, 2), (2, 3)})


def _trees_along(seq: DerivationSequence) -> Tuple[Set[Edge], Set[Edge]]:
    """Two spanning trees of replay(seq), in replay labels"""
    if seq.base == "K4":
        trees = (set(K4_TREES[0]), set(K4_TREES[1]))
    elif seq.base == "K1":
        trees = (set(), set())
    else:
        raise NotType2Maximal(f"Type-2 derivations start from K1 or K4, not {seq.base}")
    n = seq.base_graph.vertex_count

    for move in seq.steps:
        if move.kind == MoveKind.HENNEBERG1:
            a, b = move.vertices
            trees[0].add(canonical_edge(a, n))
            trees[1].add(canonical_edge(b, n))
            n += 1
        elif move.kind == MoveKind.HENNEBERG2:
            vi, vj, vk = move.vertices
            split = canonical_edge(vi, vj)
            host, other = trees if split in trees[0] else (trees[1], trees[0])
            host.remove(split)
            host.update({canonical_edge(vi, n), canonical_edge(vj, n)})
            other.add(canonical_edge(vk, n))
            n += 1
        else:
            star = move.vertices[0]
            attachments = dict(move.attachments)
            sub_trees = _trees_along(move.subsequence)
            mapping = {v: (v if v < star else v - 1) for v in range(n) if v != star}
            shift = n - 1
            rebuilt = []
            for tree, sub_tree in zip(trees, sub_trees):
                new_tree = set()
                for u, v in tree:
                    if star in (u, v):
                        x = v if u == star else u
                        new_tree.add(canonical_edge(mapping[x], shift + attachments[x]))
                    else:
                        new_tree.add(canonical_edge(mapping[u], mapping[v]))
                new_tree.update((u + shift, v + shift) for u, v in sub_tree)
                rebuilt.append(new_tree)
            trees = (rebuilt[0], rebuilt[1])
            n = shift + replay_size(move.subsequence)
    return trees


def replay_size(seq: DerivationSequence) -> int:
    """Vertex count of replay(seq) without building it"""
    n = seq.base_graph.vertex_count
    for move in seq.steps:
        n += replay_size(move.subsequence) - 1 if move.kind == MoveKind.SUBGRAPH_EXTENSION else 1
    return n


def decompose_type2(G: Graph) -> TreeDecomposition:
    if G.edge_count == 0:
        raise NotType2Maximal("A type-2 maximal graph with at least one edge is required")
    seq, labels = derive_type2_labeled(G)
    tree1, tree2 = _trees_along(seq)
    relabel = lambda tree: frozenset(tag(labels[u], labels[v]) for u, v in tree)
    decomposition = TreeDecomposition(relabel(tree1), relabel(tree2))
    logger.debug(f"Type-2 decomposition of {G}: {decomposition.to_dict()}")
    return decomposition


# Nash-Williams for Laman graphs plus one edge

def _lift_trees(trees: Tuple[Set[TaggedEdge], Set[TaggedEdge]],
                mapping: Dict[int, int]) -> Tuple[Set[TaggedEdge], Set[TaggedEdge]]:
    inverse = {new: old for old, new in mapping.items()}
    lift = lambda tree: {tag(inverse[u], inverse[v], c) for u, v, c in tree}
    return lift(trees[0]), lift(trees[1])


def _laman_plus(G: Graph, e: Edge) -> Tuple[Set[TaggedEdge], Set[TaggedEdge]]:
    """Trees of G plus a tagged copy (copy index 1) of e"""
    if G.vertex_count == 2:
        return {tag(0, 1, 0)}, {tag(0, 1, 1)}

    for v in G.vertices:
        if G.degree(v) != 2:
            continue
        x1, x2 = sorted(G.neighbors[v])
        reduced, mapping = delete_vertex(G, v)
        if v not in e:
            trees = _lift_trees(_laman_plus(reduced, (mapping[e[0]], mapping[e[1]])), mapping)
            trees[0].add(tag(v, x1))
            trees[1].add(tag(v, x2))
            return trees
        # e leans on v: double (x1, x2) below, then route that copy through v
        u = e[0] if e[1] == v else e[1]
        trees = _lift_trees(_laman_plus(reduced, (mapping[x1], mapping[x2])), mapping)
        ghost = tag(x1, x2, 1)
        host, other = trees if ghost in trees[0] else (trees[1], trees[0])
        host.remove(ghost)
        host.update({tag(v, x1), tag(v, x2)})
        other.add(tag(v, u, 1))
        return trees

    # no degree-2 vertex: at least six degree-3 vertices, so one avoids e
    for w in G.vertices:
        if G.degree(w) != 3 or w in e:
            continue
        candidates = inverse_henneberg2_candidates(G, w, 3)
        if not candidates:
            continue
        (a, b), _ = candidates[0]
        (c,) = G.neighbors[w] - {a, b}
        reduced, mapping = reverse_henneberg2(G, w, (a, b))
        trees = _lift_trees(_laman_plus(reduced, (mapping[e[0]], mapping[e[1]])), mapping)
        ghost = tag(a, b, 0)
        host, other = trees if ghost in trees[0] else (trees[1], trees[0])
        host.remove(ghost)
        host.update({tag(a, w), tag(b, w)})
        other.add(tag(c, w))
        return trees
    raise NotLaman(f"No reverse Henneberg move available on {G}")


def laman_plus_edge_multiset(G: Graph, e: Edge) -> List[TaggedEdge]:
    """Edges of G plus e; e carries copy index 1 only when it doubles an edge of G"""
    extra = tag(e[0], e[1], 1 if G.has_edge(*e) else 0)
    return _as_tagged(G.edges) + [extra]


def decompose_laman_plus_edge(G: Graph, e: Edge) -> TreeDecomposition:
    if not is_laman(G):
        raise NotLaman(f"{G} is not a Laman graph")
    u, v = e
    if u == v or not (0 <= u < G.vertex_count and 0 <= v < G.vertex_count):
        raise InvalidVertices(f"Added edge ({u},{v}) needs two distinct vertices of G")
    tree1, tree2 = _laman_plus(G, canonical_edge(u, v))
    if not G.has_edge(u, v):
        normalize = lambda tree: frozenset(tag(a, b, 0) for a, b, _ in tree)
        return TreeDecomposition(normalize(tree1), normalize(tree2))
    return TreeDecomposition(frozenset(tree1), frozenset(tree2))


def brute_force_decomposition(edges: Sequence[Sequence[int]], vertex_count: int) -> Optional[TreeDecomposition]:
    """Exhaustive search over 2-colourings; the first edge is pinned to tree1"""
    if vertex_count > MAX_BRUTE_FORCE_TREE_VERTICES:
        raise SizeLimitExceeded(f"Brute-force tree search is capped at {MAX_BRUTE_FORCE_TREE_VERTICES} vertices "
                                f"(got {vertex_count})")
    tagged = _as_tagged(edges)
    if len(tagged) != 2 * (vertex_count - 1):
        return None
    if not tagged:
        return TreeDecomposition(frozenset(), frozenset())
    first, rest = tagged[0], tagged[1:]
    for chosen in combinations(rest, vertex_count - 2):
        tree1 = frozenset((first,) + chosen)
        tree2 = frozenset(tagged) - tree1
        if is_spanning_tree(vertex_count, tree1) and is_spanning_tree(vertex_count, tree2):
            return TreeDecomposition(tree1, tree2)
    return None
