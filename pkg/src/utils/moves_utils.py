import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.utils.exceptions import (IllFormedStep, InvalidEdge, InvalidInput, InvalidThirdVertex, InvalidVertices,
                                  NotLaman, NotLamanPlusOne, NotType2Maximal, WrongDegree)
from src.utils.graph_utils import (Edge, Graph, add_edge, are_isomorphic, canonical_edge, complete_graph, contract,
                                   delete_vertex, find_isomorphism)
from src.utils.sparsity_utils import check_type, is_laman, is_laman_plus_one, maximal_tight_subgraph

logger = logging.getLogger(__name__)


class MoveKind(str, Enum):
    HENNEBERG1 = "Henneberg1"
    HENNEBERG2 = "Henneberg2"
    SUBGRAPH_EXTENSION = "SubgraphExtension"


BASE_GRAPHS = {"K1": 1, "K2": 2, "K4": 4}


@dataclass(frozen=True)
class Move:
    """
    One forward step of a derivation, in the labels of the graph it is applied to.

    Henneberg1: vertices = (a, b), the attachment vertices.
    Henneberg2: vertices = (v_i, v_j, v_k), split edge (v_i, v_j) and third vertex v_k.
    SubgraphExtension: vertices = (v*,); subsequence derives H; attachments pairs each
    neighbour of v* with the H vertex its edge lands on.
    """
    kind: MoveKind
    vertices: Tuple[int, ...]
    subsequence: Optional["DerivationSequence"] = None
    attachments: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def henneberg1(cls, a: int, b: int) -> "Move":
        return cls(MoveKind.HENNEBERG1, (a, b))

    @classmethod
    def henneberg2(cls, vi: int, vj: int, vk: int) -> "Move":
        return cls(MoveKind.HENNEBERG2, (vi, vj, vk))

    @classmethod
    def extension(cls, star: int, subsequence: "DerivationSequence",
                  attachments: Dict[int, int]) -> "Move":
        return cls(MoveKind.SUBGRAPH_EXTENSION, (star,), subsequence, tuple(sorted(attachments.items())))


@dataclass(frozen=True)
class DerivationSequence:
    base: str
    steps: Tuple[Move, ...] = ()

    def __post_init__(self):
        if self.base not in BASE_GRAPHS:
            raise InvalidInput(f"Unknown derivation base {self.base}; expected one of {sorted(BASE_GRAPHS)}")

    @property
    def base_graph(self) -> Graph:
        return complete_graph(BASE_GRAPHS[self.base])

    def __len__(self) -> int:
        return len(self.steps)


# Forward moves

def henneberg1(G: Graph, a: int, b: int) -> Graph:
    if a == b or not (0 <= a < G.vertex_count and 0 <= b < G.vertex_count):
        raise InvalidVertices(f"Henneberg 1 needs two distinct vertices of G, got ({a},{b})")
    w = G.vertex_count
    return Graph.from_edges(w + 1, list(G.edges) + [(a, w), (b, w)])


def henneberg2(G: Graph, e: Edge, vk: int) -> Graph:
    vi, vj = canonical_edge(*e)
    if (vi, vj) not in G.edge_set:
        raise InvalidEdge(f"Henneberg 2 split edge ({vi},{vj}) is not in G")
    if vk in (vi, vj) or not 0 <= vk < G.vertex_count:
        raise InvalidThirdVertex(f"Henneberg 2 third vertex {vk} must be a vertex of G off the split edge")
    w = G.vertex_count
    edges = [f for f in G.edges if f != (vi, vj)] + [(vi, w), (vj, w), (vk, w)]
    return Graph.from_edges(w + 1, edges)


def extend_subgraph(G: Graph, star: int, H: Graph, attachments: Dict[int, int]) -> Graph:
    """
    Replace vertex `star` of G by H. Remaining G vertices keep their order and are
    relabeled 0..m-2; H vertices follow.
    """
    if not 0 <= star < G.vertex_count:
        raise InvalidVertices(f"Extension vertex {star} is not in G")
    if set(attachments) != set(G.neighbors[star]):
        raise InvalidVertices(f"Attachments {sorted(attachments)} do not match the neighbours "
                              f"{sorted(G.neighbors[star])} of vertex {star}")
    if any(not 0 <= h < H.vertex_count for h in attachments.values()):
        raise InvalidVertices("An attachment lands outside the extension subgraph")
    mapping = {v: (v if v < star else v - 1) for v in G.vertices if v != star}
    shift = G.vertex_count - 1
    edges = [(mapping[u], mapping[v]) for u, v in G.edges if star not in (u, v)]
    edges += [(u + shift, v + shift) for u, v in H.edges]
    edges += [(mapping[x], h + shift) for x, h in attachments.items()]
    return Graph.from_edges(shift + H.vertex_count, edges)


def apply_move(G: Graph, move: Move) -> Graph:
    if move.kind == MoveKind.HENNEBERG1:
        return henneberg1(G, *move.vertices)
    if move.kind == MoveKind.HENNEBERG2:
        vi, vj, vk = move.vertices
        return henneberg2(G, (vi, vj), vk)
    H = replay(move.subsequence)
    return extend_subgraph(G, move.vertices[0], H, dict(move.attachments))


def replay(seq: DerivationSequence) -> Graph:
    G = seq.base_graph
    for index, move in enumerate(seq.steps):
        try:
            G = apply_move(G, move)
        except IllFormedStep as exc:
            raise IllFormedStep(index, f"nested derivation failed - Error: {exc}")
        except ValueError as exc:
            raise IllFormedStep(index, f"{move.kind.value} could not be applied - Error: {exc}")
        if not G.is_connected():
            raise IllFormedStep(index, f"{move.kind.value} produced a disconnected graph")
    return G


def is_derivation_valid(seq: DerivationSequence, G: Graph) -> bool:
    try:
        return are_isomorphic(replay(seq), G)
    except IllFormedStep as exc:
        logger.warning(f"Derivation does not replay - Error: {exc}")
        return False


# Reverse moves

def reverse_henneberg1(G: Graph, v: int) -> Tuple[Graph, Dict[int, int]]:
    if G.degree(v) != 2:
        raise WrongDegree(f"Reverse Henneberg 1 needs a degree-2 vertex; vertex {v} has degree {G.degree(v)}")
    return delete_vertex(G, v)


def reverse_henneberg2(G: Graph, v: int, pair: Edge) -> Tuple[Graph, Dict[int, int]]:
    if G.degree(v) != 3:
        raise WrongDegree(f"Reverse Henneberg 2 needs a degree-3 vertex; vertex {v} has degree {G.degree(v)}")
    if not set(pair) <= G.neighbors[v] or pair[0] == pair[1]:
        raise InvalidEdge(f"Ghost pair {pair} is not a pair of neighbours of {v}")
    reduced, mapping = delete_vertex(G, v)
    return add_edge(reduced, mapping[pair[0]], mapping[pair[1]]), mapping


def ghost_pairs(G: Graph, v: int) -> List[Edge]:
    x, y, z = sorted(G.neighbors[v])
    return [pair for pair in ((x, y), (x, z), (y, z)) if not G.has_edge(*pair)]


def inverse_henneberg2_candidates(G: Graph, v: int, k: int) -> List[Tuple[Edge, Graph]]:
    """Ghost pairs (a, b) among the neighbours of v for which G - v + (a, b) is maximally independent of type k"""
    if G.degree(v) != 3:
        raise WrongDegree(f"Vertex {v} has degree {G.degree(v)}, expected 3")
    candidates = []
    for pair in ghost_pairs(G, v):
        reduced, _ = reverse_henneberg2(G, v, pair)
        if check_type(reduced, k).maximal:
            candidates.append((pair, reduced))
    return candidates


@dataclass(frozen=True)
class Reduction:
    kind: MoveKind
    vertex: int
    pair: Edge
    third: int
    mapping: Dict[int, int]
    reduced: Graph


def _find_reduction(G: Graph, member: Callable[[Graph], bool], k: int) -> Optional[Reduction]:
    """Reverse H1 on the lowest degree-2 vertex, else reverse H2 on the lowest degree-3 vertex with the first valid ghost pair"""
    for v in G.vertices:
        if G.degree(v) == 2:
            reduced, mapping = delete_vertex(G, v)
            if member(reduced):
                a, b = sorted(G.neighbors[v])
                return Reduction(MoveKind.HENNEBERG1, v, (a, b), -1, mapping, reduced)
    for v in G.vertices:
        if G.degree(v) != 3:
            continue
        for pair, reduced in inverse_henneberg2_candidates(G, v, k):
            if member(reduced):
                third = next(iter(G.neighbors[v] - set(pair)))
                _, mapping = delete_vertex(G, v)
                return Reduction(MoveKind.HENNEBERG2, v, pair, third, mapping, reduced)
    return None


def _lift(reduction: Reduction, labels: List[int]) -> Tuple[Move, List[int]]:
    """Turn a reduction back into a forward move, given replay labels of the reduced graph"""
    inverse = {new: old for old, new in reduction.mapping.items()}
    lifted = [inverse[x] for x in labels] + [reduction.vertex]
    index = {v: i for i, v in enumerate(lifted)}
    a, b = reduction.pair
    if reduction.kind == MoveKind.HENNEBERG1:
        move = Move.henneberg1(index[a], index[b])
    else:
        move = Move.henneberg2(index[a], index[b], index[reduction.third])
    return move, lifted


def _derive_by_henneberg(G: Graph, base: str, member: Callable[[Graph], bool], k: int,
                         error: type) -> Tuple[List[Move], List[int]]:
    reductions: List[Reduction] = []
    current = G
    while current.vertex_count > BASE_GRAPHS[base]:
        reduction = _find_reduction(current, member, k)
        if reduction is None:
            raise error(f"No reverse Henneberg move stays in the class from {current}")
        reductions.append(reduction)
        current = reduction.reduced
    base_graph = complete_graph(BASE_GRAPHS[base])
    iso = find_isomorphism(base_graph, current)
    if iso is None:
        raise error(f"Reverse moves ended at {current}, not {base}")
    labels = [iso[i] for i in base_graph.vertices]
    steps: List[Move] = []
    for reduction in reversed(reductions):
        move, labels = _lift(reduction, labels)
        steps.append(move)
    return steps, labels


def derive_laman_labeled(G: Graph) -> Tuple[DerivationSequence, List[int]]:
    """Derivation from K2 plus labels: replay vertex i corresponds to G vertex labels[i]"""
    if not is_laman(G):
        raise NotLaman(f"{G} is not a Laman graph")
    steps, labels = _derive_by_henneberg(G, "K2", is_laman, 3, NotLaman)
    logger.debug(f"Laman derivation of {G.vertex_count}-vertex graph: {len(steps)} steps")
    return DerivationSequence("K2", tuple(steps)), labels


def derive_laman(G: Graph) -> DerivationSequence:
    return derive_laman_labeled(G)[0]


def _laman_plus_one_member(G: Graph) -> bool:
    return is_laman_plus_one(G) is not None


def derive_laman_plus_one_labeled(G: Graph) -> Tuple[DerivationSequence, List[int]]:
    if not _laman_plus_one_member(G):
        raise NotLamanPlusOne(f"{G} is not a Laman plus one graph")
    steps, labels = _derive_by_henneberg(G, "K4", _laman_plus_one_member, 2, NotLamanPlusOne)
    return DerivationSequence("K4", tuple(steps)), labels


def derive_laman_plus_one(G: Graph) -> DerivationSequence:
    return derive_laman_plus_one_labeled(G)[0]


def _derive_type2(G: Graph, depth: int) -> Tuple[DerivationSequence, List[int]]:
    if G.vertex_count == 1:
        return DerivationSequence("K1"), [0]

    for v in G.vertices:
        if G.degree(v) == 2:
            reduced, mapping = delete_vertex(G, v)
            seq, labels = _derive_type2(reduced, depth + 1)
            a, b = sorted(G.neighbors[v])
            move, lifted = _lift(Reduction(MoveKind.HENNEBERG1, v, (a, b), -1, mapping, reduced), labels)
            return DerivationSequence(seq.base, seq.steps + (move,)), lifted

    if _laman_plus_one_member(G):
        return derive_laman_plus_one_labeled(G)

    H = maximal_tight_subgraph(G, 2)
    if H is None:
        raise NotType2Maximal(f"{G} has no proper tight subgraph and is not Laman plus one")
    quotient = contract(G, H)
    sub_graph, sub_map = H.as_graph()
    logger.debug(f"{'  ' * depth}Contracting tight subgraph on {sorted(H.vertex_subset)}")

    quotient_seq, quotient_labels = _derive_type2(quotient.graph, depth + 1)
    sub_seq, sub_labels = _derive_type2(sub_graph, depth + 1)

    star = quotient_labels.index(quotient.star)
    quotient_index = {q: i for i, q in enumerate(quotient_labels)}
    sub_index = {h: i for i, h in enumerate(sub_labels)}
    outside = {q: g for g, q in quotient.vertex_map.items() if q != quotient.star}

    attachments: Dict[int, int] = {}
    for q in quotient.graph.neighbors[quotient.star]:
        g = outside[q]
        (h,) = [u for u in G.neighbors[g] if u in H.vertex_subset]
        attachments[quotient_index[q]] = sub_index[sub_map[h]]

    sub_inverse = {new: old for old, new in sub_map.items()}
    labels = [outside[q] for i, q in enumerate(quotient_labels) if i != star]
    labels += [sub_inverse[h] for h in sub_labels]
    move = Move.extension(star, sub_seq, attachments)
    return DerivationSequence(quotient_seq.base, quotient_seq.steps + (move,)), labels


def derive_type2_labeled(G: Graph) -> Tuple[DerivationSequence, List[int]]:
    if not check_type(G, 2).maximal:
        raise NotType2Maximal(f"{G} is not maximally independent of type 2")
    return _derive_type2(G, 0)


def derive_type2(G: Graph) -> DerivationSequence:
    return derive_type2_labeled(G)[0]


@dataclass(frozen=True)
class Trichotomy:
    case: str
    vertex: Optional[int] = None
    pair: Optional[Edge] = None
    reduced: Optional[Graph] = None


def proposition_trichotomy(G: Graph) -> Trichotomy:
    """
    For a type-2 maximal graph with an edge: a degree-2 vertex exists ("degree-two"),
    every degree-3 vertex lies in a K4 ("k4-covered"), or a reverse Henneberg 2 move onto
    a ghost edge stays type-2 maximal ("reducible").
    """
    if G.edge_count == 0 or not check_type(G, 2).maximal:
        raise NotType2Maximal(f"{G} is not a maximally independent type-2 graph with an edge")
    degree_two = [v for v in G.vertices if G.degree(v) == 2]
    if degree_two:
        return Trichotomy("degree-two", vertex=degree_two[0])
    for v in G.vertices:
        if G.degree(v) != 3 or not ghost_pairs(G, v):
            continue
        candidates = inverse_henneberg2_candidates(G, v, 2)
        if not candidates:
            raise NotType2Maximal(f"Degree-3 vertex {v} outside any K4 has no valid ghost edge")
        pair, reduced = candidates[0]
        return Trichotomy("reducible", vertex=v, pair=pair, reduced=reduced)
    return Trichotomy("k4-covered")


# Serialization

def move_to_dict(move: Move) -> Dict[str, Any]:
    if move.kind == MoveKind.HENNEBERG1:
        return {"kind": move.kind.value, "vertices": list(move.vertices)}
    if move.kind == MoveKind.HENNEBERG2:
        vi, vj, vk = move.vertices
        return {"kind": move.kind.value, "edge": [vi, vj], "third": vk}
    return {
        "kind": move.kind.value,
        "vertex": move.vertices[0],
        "subgraph": sequence_to_dict(move.subsequence),
        "attachments": [list(pair) for pair in move.attachments],
    }


def sequence_to_dict(seq: DerivationSequence) -> Dict[str, Any]:
    return {"base": seq.base, "steps": [move_to_dict(m) for m in seq.steps]}


def move_from_dict(data: Dict[str, Any]) -> Move:
    try:
        kind = MoveKind(data["kind"])
        if kind == MoveKind.HENNEBERG1:
            a, b = data["vertices"]
            return Move.henneberg1(int(a), int(b))
        if kind == MoveKind.HENNEBERG2:
            vi, vj = data["edge"]
            return Move.henneberg2(int(vi), int(vj), int(data["third"]))
        attachments = {int(x): int(h) for x, h in data["attachments"]}
        return Move.extension(int(data["vertex"]), sequence_from_dict(data["subgraph"]), attachments)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"Could not parse derivation step {data} - Error: {exc}")


def sequence_from_dict(data: Dict[str, Any]) -> DerivationSequence:
    try:
        return DerivationSequence(data["base"], tuple(move_from_dict(m) for m in data["steps"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"Could not parse derivation - Error: {exc}")
