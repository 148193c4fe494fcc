import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, List, Union

import jsonschema
import networkx as nx

from src.utils.exceptions import InvalidInput
from src.utils.graph_utils import Graph

logger = logging.getLogger(__name__)

GRAPH_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
    "required": ["n", "edges"],
}

GRAPH6_HEADER = ">>graph6<<"


def graph_from_dict(data: Dict[str, Any]) -> Graph:
    try:
        jsonschema.validate(data, GRAPH_SCHEMA)
        return Graph.from_edges(data["n"], data["edges"])
    except jsonschema.ValidationError as exc:
        raise InvalidInput(f"Graph JSON does not match schema - Error: {exc.message}")
    except ValueError as exc:
        raise InvalidInput(f"Graph JSON is not a simple graph - Error: {exc}")


def graph_from_networkx(g: nx.Graph) -> Graph:
    order = {v: i for i, v in enumerate(sorted(g.nodes()))}
    return Graph.from_edges(len(order), [(order[u], order[v]) for u, v in g.edges()])


def graph_from_graph6(text: Union[str, bytes]) -> Graph:
    raw = text.encode("ascii") if isinstance(text, str) else text
    raw = raw.strip()
    if raw.startswith(GRAPH6_HEADER.encode("ascii")):
        raw = raw[len(GRAPH6_HEADER):]
    try:
        return graph_from_networkx(nx.from_graph6_bytes(raw))
    except Exception as exc:
        raise InvalidInput(f"Could not parse graph6 string {raw!r} - Error: {exc}")


def graph_to_graph6(G: Graph) -> str:
    return nx.to_graph6_bytes(G.to_networkx(), header=False).decode("ascii").strip()


def parse_graph_text(text: str) -> Graph:
    """Auto-detect JSON vs graph6"""
    stripped = text.strip()
    if not stripped:
        raise InvalidInput("Empty graph input")
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"Could not load graph JSON - Error: {exc}")
        return graph_from_dict(data)
    return graph_from_graph6(stripped.splitlines()[0])


def read_graph_file(path: Union[str, Path]) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"Could not read graph file {path} - Error: {exc}")
    return parse_graph_text(text)


def iter_graph6_stream(path: Union[str, Path]) -> Iterator[Graph]:
    """One graph6 string per line, blank lines skipped"""
    try:
        lines: List[str] = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InvalidInput(f"Could not read graph6 stream {path} - Error: {exc}")
    for line in lines:
        if line.strip():
            yield graph_from_graph6(line)


def graph_to_json(G: Graph) -> str:
    return json.dumps(G.to_dict())
