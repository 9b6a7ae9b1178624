"""Temporal hypergraphs: data model, JSON ingestion and adjacency tensors."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import Poly, PolyError, as_rational
from .tensor import NORMALIZATIONS, VERBATIM, SymTensor, from_hyperedges


class HypergraphError(ValueError):
    """Invalid hypergraph document or structure."""


@dataclass(frozen=True)
class Hyperedge:
    nodes: Tuple[int, ...]
    weight: Poly

    def __post_init__(self):
        if list(self.nodes) != sorted(set(self.nodes)):
            raise HypergraphError(f"hyperedge nodes must be sorted and distinct: {list(self.nodes)}")
        if self.weight.is_zero():
            raise HypergraphError(f"hyperedge {list(self.nodes)} has zero weight")
        if self.weight.depends_on_state():
            raise HypergraphError(f"hyperedge {list(self.nodes)} weight depends on the state")

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TemporalHypergraph:
    n: int
    edges: Tuple[Hyperedge, ...] = ()
    labels: Optional[Tuple[str, ...]] = None
    normalization: str = VERBATIM

    def __post_init__(self):
        if self.n < 1:
            raise HypergraphError(f"node count must be positive, got {self.n}")
        if self.normalization not in NORMALIZATIONS:
            raise HypergraphError(f"normalization must be one of {NORMALIZATIONS}")
        if self.labels is not None and len(self.labels) != self.n:
            raise HypergraphError(f"labels: expected {self.n} names, got {len(self.labels)}")
        seen = set()
        for e in self.edges:
            if not 2 <= len(e.nodes) <= self.n:
                raise HypergraphError(f"hyperedge {list(e.nodes)} must have 2..{self.n} nodes")
            if e.nodes[0] < 1 or e.nodes[-1] > self.n:
                raise HypergraphError(f"hyperedge {list(e.nodes)}: node index out of range 1..{self.n}")
            if e.weight.nvars != self.n:
                raise HypergraphError(f"hyperedge {list(e.nodes)} weight has wrong variable count")
            if e.nodes in seen:
                raise HypergraphError(f"duplicate hyperedge {list(e.nodes)}")
            seen.add(e.nodes)

    @classmethod
    def build(cls, n: int, edges: Iterable[Tuple[Sequence[int], Poly | None]] | Iterable[Sequence[int]],
              labels: Sequence[str] | None = None, normalization: str = VERBATIM,
              weight: Poly | None = None) -> "TemporalHypergraph":
        """Convenience constructor.

        ``edges`` holds either bare node lists (all given ``weight``, default
        the constant 1) or ``(nodes, weight)`` pairs.
        """
        default = weight if weight is not None else Poly.const(n, 1)
        out = []
        for item in edges:
            if len(item) == 2 and isinstance(item[1], Poly):
                nodes, w = item
            else:
                nodes, w = item, default
            nodes = list(nodes)
            if len(set(nodes)) != len(nodes):
                raise HypergraphError(f"duplicate node in edge {nodes}")
            out.append(Hyperedge(tuple(sorted(nodes)), w))
        return cls(n, tuple(out), tuple(labels) if labels else None, normalization)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        """Maximum hyperedge cardinality (0 with no edges)."""
        return max((len(e) for e in self.edges), default=0)

    def label(self, node: int) -> str:
        return self.labels[node - 1] if self.labels else str(node)

    def with_normalization(self, normalization: str) -> "TemporalHypergraph":
        return TemporalHypergraph(self.n, self.edges, self.labels, normalization)


def adjacency_tensors(H: TemporalHypergraph) -> Dict[int, SymTensor]:
    """Order j -> adjacency tensor for every order that has at least one edge."""
    by_order: Dict[int, List[Tuple[Tuple[int, ...], Poly]]] = {}
    for e in H.edges:
        by_order.setdefault(len(e), []).append((e.nodes, e.weight))
    return {j: from_hyperedges(H.n, j, by_order[j], H.normalization) for j in sorted(by_order)}


def node_degrees(H: TemporalHypergraph) -> List[int]:
    """Number of hyperedges containing each node, in node order."""
    deg = [0] * H.n
    for e in H.edges:
        for v in e.nodes:
            deg[v - 1] += 1
    return deg


# ---------------------------------------------------------------------------
# JSON document format

def parse_weight(spec: Any, n: int, where: str = "weight") -> Poly:
    """Decode a list of ``{"pow": k, "coef": "p/q"}`` terms into a Poly in t."""
    if spec is None:
        return Poly.const(n, 1)
    if isinstance(spec, (int, str)) and not isinstance(spec, bool):
        try:
            return Poly.const(n, spec)
        except PolyError as exc:
            raise HypergraphError(f"{where}: {exc}") from None
    if not isinstance(spec, list):
        raise HypergraphError(f"{where}: expected a list of {{pow, coef}} terms")
    coeffs: Dict[int, Any] = {}
    for term in spec:
        if not isinstance(term, dict) or set(term) - {"pow", "coef"}:
            raise HypergraphError(f"{where}: each term needs exactly 'pow' and 'coef'")
        power = term.get("pow", 0)
        if not isinstance(power, int) or isinstance(power, bool) or power < 0:
            raise HypergraphError(f"{where}.pow: must be a non-negative integer")
        coef = term.get("coef", "1")
        if isinstance(coef, float) or isinstance(coef, bool):
            raise HypergraphError(f"{where}.coef: use an integer or a rational string")
        try:
            c = as_rational(coef)
        except PolyError as exc:
            raise HypergraphError(f"{where}.coef: {exc}") from None
        coeffs[power] = coeffs.get(power, 0) + c
    return Poly.time_poly(n, coeffs)


def weight_to_json(w: Poly) -> List[Dict[str, Any]]:
    out = []
    for exp in sorted(w.terms, key=lambda e: e[-1]):
        out.append({"pow": exp[-1], "coef": str(w.terms[exp])})
    return out


def from_dict(doc: Dict[str, Any]) -> TemporalHypergraph:
    if not isinstance(doc, dict):
        raise HypergraphError("document must be an object")
    unknown = set(doc) - {"nodes", "labels", "normalization", "hyperedges"}
    if unknown:
        raise HypergraphError(f"unknown field(s): {sorted(unknown)}")
    n = doc.get("nodes")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise HypergraphError("nodes: must be a positive integer")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise HypergraphError("labels: must be a list of strings")
        if len(labels) != n:
            raise HypergraphError(f"labels: expected {n} names, got {len(labels)}")
    norm = doc.get("normalization", VERBATIM)
    if norm not in NORMALIZATIONS:
        raise HypergraphError(f"normalization: must be one of {list(NORMALIZATIONS)}")
    raw_edges = doc.get("hyperedges", [])
    if not isinstance(raw_edges, list):
        raise HypergraphError("hyperedges: must be a list")
    edges = []
    seen = set()
    for i, e in enumerate(raw_edges):
        where = f"hyperedges[{i}]"
        if not isinstance(e, dict) or "nodes" not in e:
            raise HypergraphError(f"{where}: expected an object with 'nodes'")
        if set(e) - {"nodes", "weight"}:
            raise HypergraphError(f"{where}: unknown field(s) {sorted(set(e) - {'nodes', 'weight'})}")
        nodes = e["nodes"]
        if not isinstance(nodes, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in nodes):
            raise HypergraphError(f"{where}.nodes: must be a list of integers")
        if len(set(nodes)) != len(nodes):
            raise HypergraphError(f"{where}.nodes: duplicate node in edge {nodes}")
        if any(v < 1 or v > n for v in nodes):
            raise HypergraphError(f"{where}.nodes: node index out of range 1..{n}")
        if not 2 <= len(nodes) <= n:
            raise HypergraphError(f"{where}.nodes: need between 2 and {n} nodes")
        key = tuple(sorted(nodes))
        if key in seen:
            raise HypergraphError(f"{where}.nodes: duplicate edge {list(key)}")
        seen.add(key)
        w = parse_weight(e.get("weight"), n, f"{where}.weight")
        if w.is_zero():
            raise HypergraphError(f"{where}.weight: zero weight")
        edges.append(Hyperedge(key, w))
    return TemporalHypergraph(n, tuple(edges), tuple(labels) if labels else None, norm)


def parse(text: str) -> TemporalHypergraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"malformed document: {exc}") from None
    return from_dict(doc)


def load(path: str | Path) -> TemporalHypergraph:
    return parse(Path(path).read_text())


def to_dict(H: TemporalHypergraph) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"nodes": H.n}
    if H.labels:
        doc["labels"] = list(H.labels)
    doc["normalization"] = H.normalization
    doc["hyperedges"] = [{"nodes": list(e.nodes), "weight": weight_to_json(e.weight)} for e in H.edges]
    return doc


def serialize(H: TemporalHypergraph) -> str:
    return json.dumps(to_dict(H), indent=2)
