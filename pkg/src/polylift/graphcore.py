"""Graph and digraph types plus the clone-node auxiliary constructions.

Three auxiliary graphs drive the lifting pipelines: the matching double
(two copies of a graph joined by one linking edge per node), the path
split (in/out clones of every node plus a return arc) and the clique
digraph (two clone layers between an extra source and sink). Constructed
nodes carry ``CloneLabel`` ids so callers and tests can address specific
clones symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import NotAcyclic, NotASource, SameNodes, UnknownNode
from .exactnum import F0, F1, RatMatrix

_TAGS = ("copy1", "copy2", "in", "out", "source", "sink")
_TAG_SUFFIX = {"copy1": "1", "copy2": "2", "in": "in", "out": "out"}


@dataclass(frozen=True)
class CloneLabel:
    """Node id of a constructed auxiliary graph, keeping its provenance."""

    base: object
    tag: str

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown clone tag {self.tag!r}")

    def __str__(self):
        if self.tag == "source":
            return "s"
        if self.tag == "sink":
            return "t"
        return f"{self.base}^{_TAG_SUFFIX[self.tag]}"


CLIQUE_SOURCE = CloneLabel(None, "source")
CLIQUE_SINK = CloneLabel(None, "sink")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: no loops, no parallel edges.

    ``nodes`` fixes the canonical node order; edges are stored as pairs
    ordered by node position, and ``edge_list`` is the canonical edge
    order used for edge-indexed vectors.
    """

    nodes: tuple
    edges: frozenset

    @classmethod
    def build(cls, nodes: Iterable, edges: Iterable = ()) -> "Graph":
        nodes = tuple(nodes)
        index = {}
        for v in nodes:
            if v in index:
                raise ValueError(f"duplicate node {v!r}")
            index[v] = len(index)
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at node {u!r}")
            if u not in index:
                raise UnknownNode(f"unknown node {u!r}")
            if v not in index:
                raise UnknownNode(f"unknown node {v!r}")
            canon.add((u, v) if index[u] < index[v] else (v, u))
        return cls(nodes, frozenset(canon))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def edge_list(self) -> tuple:
        return tuple(
            sorted(self.edges, key=lambda e: (self.index[e[0]], self.index[e[1]]))
        )

    @cached_property
    def _adjacency(self) -> dict:
        adj = {v: [] for v in self.nodes}
        for u, v in self.edge_list:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(ws) for v, ws in adj.items()}

    @cached_property
    def _incident(self) -> dict:
        inc = {v: [] for v in self.nodes}
        for e in self.edge_list:
            inc[e[0]].append(e)
            inc[e[1]].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def require_node(self, v):
        if v not in self.index:
            raise UnknownNode(f"unknown node {v!r}")

    def adjacent(self, v) -> tuple:
        self.require_node(v)
        return self._adjacency[v]

    def incident_edges(self, v) -> tuple:
        """The edge star of ``v`` in canonical edge order."""
        self.require_node(v)
        return self._incident[v]

    def has_edge(self, u, v) -> bool:
        self.require_node(u)
        self.require_node(v)
        key = (u, v) if self.index[u] < self.index[v] else (v, u)
        return key in self.edges

    def canonical_edge(self, u, v) -> tuple:
        self.require_node(u)
        self.require_node(v)
        return (u, v) if self.index[u] < self.index[v] else (v, u)


@dataclass(frozen=True)
class Digraph:
    """Simple digraph: no loops, no parallel arcs (antiparallel pairs allowed)."""

    nodes: tuple
    arcs: frozenset

    @classmethod
    def build(cls, nodes: Iterable, arcs: Iterable = ()) -> "Digraph":
        nodes = tuple(nodes)
        index = {}
        for v in nodes:
            if v in index:
                raise ValueError(f"duplicate node {v!r}")
            index[v] = len(index)
        arcset = set()
        for u, v in arcs:
            if u == v:
                raise ValueError(f"loop at node {u!r}")
            if u not in index:
                raise UnknownNode(f"unknown node {u!r}")
            if v not in index:
                raise UnknownNode(f"unknown node {v!r}")
            arcset.add((u, v))
        return cls(nodes, frozenset(arcset))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def arc_list(self) -> tuple:
        return tuple(
            sorted(self.arcs, key=lambda a: (self.index[a[0]], self.index[a[1]]))
        )

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.nodes}
        for a in self.arc_list:
            out[a[0]].append(a)
        return {v: tuple(arcs) for v, arcs in out.items()}

    @cached_property
    def _in(self) -> dict:
        inc = {v: [] for v in self.nodes}
        for a in self.arc_list:
            inc[a[1]].append(a)
        return {v: tuple(arcs) for v, arcs in inc.items()}

    def require_node(self, v):
        if v not in self.index:
            raise UnknownNode(f"unknown node {v!r}")

    def out_arcs(self, v) -> tuple:
        self.require_node(v)
        return self._out[v]

    def in_arcs(self, v) -> tuple:
        self.require_node(v)
        return self._in[v]


def _require_subset(container, T):
    for v in T:
        container.require_node(v)


def topological_order(d: Digraph) -> tuple | None:
    """A topological order of ``d``, or None if it has a directed cycle.

    Ties are broken by node position, so the result is deterministic.
    """
    indeg = {v: len(d.in_arcs(v)) for v in d.nodes}
    ready = [v for v in d.nodes if indeg[v] == 0]
    order = []
    while ready:
        v = min(ready, key=d.index.__getitem__)
        ready.remove(v)
        order.append(v)
        for (_, w) in d.out_arcs(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    if len(order) != len(d.nodes):
        return None
    return tuple(order)


def is_acyclic(d: Digraph) -> bool:
    return topological_order(d) is not None


def matching_double(g: Graph) -> Graph:
    """Two disjoint copies of ``g`` with a linking edge per original node."""
    c1 = {v: CloneLabel(v, "copy1") for v in g.nodes}
    c2 = {v: CloneLabel(v, "copy2") for v in g.nodes}
    nodes = [c1[v] for v in g.nodes] + [c2[v] for v in g.nodes]
    edges = (
        [(c1[u], c1[v]) for u, v in g.edge_list]
        + [(c2[u], c2[v]) for u, v in g.edge_list]
        + [(c1[v], c2[v]) for v in g.nodes]
    )
    return Graph.build(nodes, edges)


def path_split(d: Digraph, s, t) -> Digraph:
    """In/out clones of every node, plus the return arc from t^out to s^in.

    Every original arc (v, w) becomes the "real" arc (v^out, w^in); every
    node contributes its internal arc (v^in, v^out). Requires an acyclic
    digraph whose designated start node is a source.
    """
    d.require_node(s)
    d.require_node(t)
    if s == t:
        raise SameNodes("start and end node coincide")
    if topological_order(d) is None:
        raise NotAcyclic("digraph has a directed cycle")
    if d.in_arcs(s):
        raise NotASource(f"node {s!r} has incoming arcs")
    vin = {v: CloneLabel(v, "in") for v in d.nodes}
    vout = {v: CloneLabel(v, "out") for v in d.nodes}
    nodes = []
    for v in d.nodes:
        nodes.append(vin[v])
        nodes.append(vout[v])
    arcs = [(vout[u], vin[w]) for u, w in d.arc_list]
    arcs += [(vin[v], vout[v]) for v in d.nodes]
    arcs.append((vout[t], vin[s]))
    return Digraph.build(nodes, arcs)


def classify_split_arc(arc, s, t) -> str:
    """Label a path-split arc as ``real``, ``internal`` or ``return``."""
    tail, head = arc
    if tail == CloneLabel(t, "out") and head == CloneLabel(s, "in"):
        return "return"
    if tail.tag == "in" and head.tag == "out" and tail.base == head.base:
        return "internal"
    if tail.tag == "out" and head.tag == "in":
        return "real"
    raise ValueError(f"not a path-split arc: {arc!r}")


def clique_digraph(g: Graph) -> Digraph:
    """Two clone layers between a source and a sink; one arc pair per edge."""
    c1 = {v: CloneLabel(v, "copy1") for v in g.nodes}
    c2 = {v: CloneLabel(v, "copy2") for v in g.nodes}
    s, t = CLIQUE_SOURCE, CLIQUE_SINK
    nodes = [c1[v] for v in g.nodes] + [c2[v] for v in g.nodes] + [s, t]
    arcs = [(t, s)]
    arcs += [(s, c1[v]) for v in g.nodes] + [(s, c2[v]) for v in g.nodes]
    arcs += [(c1[v], t) for v in g.nodes] + [(c2[v], t) for v in g.nodes]
    for u, v in g.edge_list:
        arcs.append((c1[u], c2[v]))
        arcs.append((c1[v], c2[u]))
    return Digraph.build(nodes, arcs)


def successors(d: Digraph, T: Iterable) -> frozenset:
    """All heads of arcs leaving ``T`` (T itself is not implicitly included)."""
    T = frozenset(T)
    _require_subset(d, T)
    return frozenset(w for (v, w) in d.arcs if v in T)


def neighbors(g: Graph, T: Iterable) -> frozenset:
    """Nodes outside ``T`` adjacent to at least one node of ``T``."""
    T = frozenset(T)
    _require_subset(g, T)
    out = set()
    for v in T:
        out.update(g._adjacency[v])
    return frozenset(out - T)


def non_neighbors(g: Graph, T: Iterable) -> frozenset:
    """Nodes outside ``T`` adjacent to no node of ``T``."""
    T = frozenset(T)
    _require_subset(g, T)
    return frozenset(g.nodes) - T - neighbors(g, T)


def edges_between(g: Graph, S: Iterable, T: Iterable) -> frozenset:
    """Edges with one endpoint in ``S`` and the other in ``T``."""
    S = frozenset(S)
    T = frozenset(T)
    _require_subset(g, S)
    _require_subset(g, T)
    return frozenset(
        e
        for e in g.edges
        if (e[0] in S and e[1] in T) or (e[0] in T and e[1] in S)
    )


def edges_inside(g: Graph, S: Iterable) -> frozenset:
    """Edges with both endpoints in ``S``."""
    S = frozenset(S)
    _require_subset(g, S)
    return frozenset(e for e in g.edges if e[0] in S and e[1] in S)


def _components(g: Graph) -> list:
    seen = set()
    comps = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g._adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def bipartite_components(g: Graph) -> tuple:
    """Count of bipartite connected components, plus their shore pairs.

    An isolated node is a bipartite component with shores ({v}, {}).
    The shore containing the component's smallest node comes first.
    """
    shores = []
    for comp in _components(g):
        color = {comp[0]: 0}
        queue = [comp[0]]
        ok = True
        while queue and ok:
            v = queue.pop()
            for w in g._adjacency[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    ok = False
                    break
        if ok:
            side0 = frozenset(v for v in comp if color[v] == 0)
            side1 = frozenset(v for v in comp if color[v] == 1)
            shores.append((side0, side1))
    beta = len(shores)
    return beta, tuple(shores)


def induced_subgraph(g: Graph, keep: Iterable) -> Graph:
    keep = frozenset(keep)
    _require_subset(g, keep)
    nodes = [v for v in g.nodes if v in keep]
    edges = [e for e in g.edge_list if e[0] in keep and e[1] in keep]
    return Graph.build(nodes, edges)


def remove_edges(g: Graph, drop: Iterable) -> Graph:
    dropped = frozenset(g.canonical_edge(u, v) for u, v in drop)
    return Graph.build(g.nodes, g.edges - dropped)


def remove_node(g: Graph, v) -> Graph:
    g.require_node(v)
    return induced_subgraph(g, frozenset(g.nodes) - {v})


def incidence_matrix(g: Graph) -> RatMatrix:
    """Node-edge incidence matrix in canonical node/edge order."""
    rows = []
    for v in g.nodes:
        rows.append([F1 if v in e else F0 for e in g.edge_list])
    return RatMatrix.from_rows(rows, cols=len(g.edge_list))


# ---------------------------------------------------------------------------
# Instance file format: optional "directed" header, then "n m", then m lines
# "u v" with 0-based dense ids, then an optional "st s t" line for path
# instances. Lines starting with "#" and blank lines are ignored.


@dataclass(frozen=True)
class Instance:
    directed: bool
    graph: Graph | None
    digraph: Digraph | None
    st: tuple | None


def parse_instance(text: str) -> Instance:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty instance file")
    pos = 0
    directed = False
    if lines[pos] == "directed":
        directed = True
        pos += 1
    if pos >= len(lines):
        raise ValueError("missing size header")
    header = lines[pos].split()
    pos += 1
    if len(header) != 2:
        raise ValueError(f"bad size header: {' '.join(header)!r}")
    n, m = (int(tok) for tok in header)
    if n < 0 or m < 0:
        raise ValueError("negative sizes in header")
    pairs = []
    for _ in range(m):
        if pos >= len(lines):
            raise ValueError("fewer edge lines than announced")
        toks = lines[pos].split()
        pos += 1
        if len(toks) != 2:
            raise ValueError(f"bad edge line: {lines[pos - 1]!r}")
        u, v = (int(tok) for tok in toks)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge endpoint out of range: {u} {v}")
        pairs.append((u, v))
    st = None
    if pos < len(lines):
        toks = lines[pos].split()
        if toks[0] != "st" or len(toks) != 3:
            raise ValueError(f"unexpected trailing line: {lines[pos]!r}")
        if not directed:
            raise ValueError("st line is only valid for directed instances")
        s, t = int(toks[1]), int(toks[2])
        if not (0 <= s < n and 0 <= t < n):
            raise ValueError("st endpoints out of range")
        st = (s, t)
        pos += 1
    if pos != len(lines):
        raise ValueError(f"unexpected trailing line: {lines[pos]!r}")
    nodes = tuple(range(n))
    if directed:
        return Instance(True, None, Digraph.build(nodes, pairs), st)
    return Instance(False, Graph.build(nodes, pairs), None, None)


def format_graph(g: Graph) -> str:
    _require_dense_ids(g.nodes)
    lines = [f"{len(g.nodes)} {len(g.edge_list)}"]
    lines += [f"{u} {v}" for u, v in g.edge_list]
    return "\n".join(lines) + "\n"


def format_digraph(d: Digraph, st: tuple | None = None) -> str:
    _require_dense_ids(d.nodes)
    lines = ["directed", f"{len(d.nodes)} {len(d.arc_list)}"]
    lines += [f"{u} {v}" for u, v in d.arc_list]
    if st is not None:
        lines.append(f"st {st[0]} {st[1]}")
    return "\n".join(lines) + "\n"


def _require_dense_ids(nodes):
    if tuple(nodes) != tuple(range(len(nodes))):
        raise ValueError("file format requires dense integer node ids 0..n-1")
