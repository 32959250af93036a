"""Value types for process-generated hypergraphs and for fixed target patterns.

Vertices are dense integers: ``1..n`` for hosts, ``1..k`` for patterns.
Edges are multisets, stored as sorted tuples, so parallel edges and edges
with a repeated vertex (the hypergraph analogue of a loop) are representable.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class PatternFormatError(ValueError):
    """Raised when a JSON document does not describe a valid (hyper)graph."""


class EdgeRecord(NamedTuple):
    """One edge of a process hypergraph.

    ``square`` holds the randomly drawn vertices, ``circle`` the player's
    reply. Patterns parsed from plain edge lists put every vertex in
    ``circle`` and leave ``square`` empty.
    """

    square: tuple[int, ...]
    circle: tuple[int, ...]
    time: int

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.square + self.circle))


class Hypergraph:
    """An ``s``-uniform multi-hypergraph on ``1..n`` with timestamped edges.

    Parameters
    ----------
    n : int
        Number of vertices.
    s : int
        Edge size, counted with multiplicity.
    r : int, optional
        Size of the random (square) part of every edge. ``None`` for
        patterns, where the split is meaningless.
    """

    def __init__(self, n: int, s: int, r: int | None = None):
        if n < 0 or s < 1:
            raise ValueError(f"need n >= 0 and s >= 1, got n={n}, s={s}")
        if r is not None and not 0 <= r <= s:
            raise ValueError(f"need 0 <= r <= s, got r={r}, s={s}")
        self.n = n
        self.s = s
        self.r = r
        self.edges: list[EdgeRecord] = []
        self._multisets: list[tuple[int, ...]] = []
        self._degree = [0] * (n + 1)

    @classmethod
    def from_edges(cls, n: int, s: int, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        """Build a pattern (no square/circle split) from plain vertex lists."""
        h = cls(n, s)
        for i, e in enumerate(edges, start=1):
            h.add_edge((), tuple(e), i)
        return h

    def add_edge(self, square: Sequence[int], circle: Sequence[int], time: int) -> "Hypergraph":
        square = tuple(square)
        circle = tuple(circle)
        if self.r is not None and (len(square) != self.r or len(circle) != self.s - self.r):
            raise ValueError(
                f"edge split must be ({self.r}, {self.s - self.r}), got ({len(square)}, {len(circle)})"
            )
        if len(square) + len(circle) != self.s:
            raise ValueError(f"edge must have {self.s} vertex slots, got {len(square) + len(circle)}")
        if self.edges and time <= self.edges[-1].time:
            raise ValueError(f"edge time {time} not after last time {self.edges[-1].time}")
        verts = tuple(sorted(square + circle))
        if verts and (verts[0] < 1 or verts[-1] > self.n):
            raise ValueError(f"vertex out of range 1..{self.n}: {verts}")
        self.edges.append(EdgeRecord(square, circle, time))
        self._multisets.append(verts)
        deg = self._degree
        prev = None
        for v in verts:
            if v != prev:
                deg[v] += 1
                prev = v
        return self

    def degree(self, v: int) -> int:
        """Number of edges containing ``v``; a repeated vertex counts once per edge."""
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range 1..{self.n}")
        return self._degree[v]

    @property
    def multisets(self) -> list[tuple[int, ...]]:
        """Sorted vertex multiset of every edge, in insertion order."""
        return self._multisets

    def multiplicity(self, edge: Iterable[int]) -> int:
        key = tuple(sorted(edge))
        return sum(1 for m in self._multisets if m == key)

    def edge_counter(self) -> Counter:
        return Counter(self._multisets)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.s, self.r, self.edges) == (other.n, other.s, other.r, other.edges)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, s={self.s}, r={self.r}, edges={len(self.edges)})"

    def copy(self) -> "Hypergraph":
        h = Hypergraph(self.n, self.s, self.r)
        h.edges = list(self.edges)
        h._multisets = list(self._multisets)
        h._degree = list(self._degree)
        return h


def induced(h: Hypergraph, vertices: Iterable[int]) -> Hypergraph:
    """Edges of ``h`` whose support lies inside ``vertices``; ids are kept."""
    keep = set(vertices)
    out = Hypergraph(h.n, h.s, h.r)
    for rec, ms in zip(h.edges, h.multisets):
        if keep.issuperset(ms):
            out.add_edge(rec.square, rec.circle, rec.time)
    return out


@dataclass(frozen=True)
class OrientedOrderedGraph:
    """A graph pattern with a fixed edge order and an orientation ``x -> y`` per edge.

    Loops (``x == y``) and parallel edges are allowed.
    """

    k: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(x), int(y)) for x, y in self.edges))
        for x, y in self.edges:
            if not (1 <= x <= self.k and 1 <= y <= self.k):
                raise ValueError(f"edge {x}->{y} outside 1..{self.k}")

    def prefix(self, i: int) -> "OrientedOrderedGraph":
        return OrientedOrderedGraph(self.k, self.edges[:i])

    def to_leading(self) -> "LeadingEdgeHypergraph":
        return LeadingEdgeHypergraph(
            self.k, 2, tuple((tuple(sorted((x, y))), x) for x, y in self.edges)
        )


@dataclass(frozen=True)
class LeadingEdgeHypergraph:
    """A hypergraph pattern with a fixed edge order and a leading vertex per edge."""

    k: int
    s: int
    edges: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        norm = tuple((tuple(sorted(int(v) for v in verts)), int(lead)) for verts, lead in self.edges)
        object.__setattr__(self, "edges", norm)
        for verts, lead in norm:
            if lead not in verts:
                raise ValueError(f"leading vertex {lead} not in edge {verts}")
            if any(not 1 <= v <= self.k for v in verts):
                raise ValueError(f"edge {verts} outside 1..{self.k}")

    def prefix(self, i: int) -> "LeadingEdgeHypergraph":
        return LeadingEdgeHypergraph(self.k, self.s, self.edges[:i])


# ---------------------------------------------------------------------------
# JSON documents

def _dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"))


def serialize(obj: Hypergraph | OrientedOrderedGraph | LeadingEdgeHypergraph) -> str:
    """Canonical compact JSON text for any of the three value types."""
    if isinstance(obj, Hypergraph):
        if obj.r is None:
            return _dumps({"n": obj.n, "s": obj.s, "edges": [list(m) for m in obj.multisets]})
        edges = [
            {"square": list(rec.square), "circle": list(rec.circle), "t": rec.time}
            for rec in obj.edges
        ]
        return _dumps({"n": obj.n, "s": obj.s, "r": obj.r, "edges": edges})
    if isinstance(obj, OrientedOrderedGraph):
        return _dumps({"k": obj.k, "edges": [{"from": x, "to": y} for x, y in obj.edges]})
    if isinstance(obj, LeadingEdgeHypergraph):
        return _dumps(
            {"k": obj.k, "s": obj.s, "edges": [{"verts": list(v), "lead": x} for v, x in obj.edges]}
        )
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _int(doc: dict, key: str) -> int:
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise PatternFormatError(f"field {key!r} must be an integer")
    return value


def parse(text: str) -> Hypergraph | OrientedOrderedGraph | LeadingEdgeHypergraph:
    """Parse a JSON document, dispatching on its shape.

    ``{"n", "s", "edges": [[...]]}`` gives a :class:`Hypergraph`,
    ``{"k", "edges": [{"from", "to"}]}`` an :class:`OrientedOrderedGraph` and
    ``{"k", "s", "edges": [{"verts", "lead"}]}`` a :class:`LeadingEdgeHypergraph`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("edges"), list):
        raise PatternFormatError("document must be an object with an 'edges' list")
    edges = doc["edges"]
    try:
        if "n" in doc:
            return _parse_hypergraph(doc, edges)
        k = _int(doc, "k")
        if "s" in doc:
            s = _int(doc, "s")
            out = []
            for e in edges:
                verts = e["verts"]
                if len(verts) != s:
                    raise PatternFormatError(f"edge {verts} is not {s}-uniform")
                out.append((tuple(verts), e["lead"]))
            return LeadingEdgeHypergraph(k, s, tuple(out))
        return OrientedOrderedGraph(k, tuple((e["from"], e["to"]) for e in edges))
    except PatternFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PatternFormatError(str(exc)) from exc


def _parse_hypergraph(doc: dict, edges: list) -> Hypergraph:
    n, s = _int(doc, "n"), _int(doc, "s")
    r = doc.get("r")
    h = Hypergraph(n, s, r)
    for i, e in enumerate(edges, start=1):
        if isinstance(e, dict):
            h.add_edge(tuple(e["square"]), tuple(e["circle"]), e["t"])
        else:
            if r is not None:
                raise PatternFormatError("edges of a split hypergraph need square/circle parts")
            if len(e) != s:
                raise PatternFormatError(f"edge {e} is not {s}-uniform")
            h.add_edge((), tuple(e), i)
    return h


def load(path) -> Hypergraph | OrientedOrderedGraph | LeadingEdgeHypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
