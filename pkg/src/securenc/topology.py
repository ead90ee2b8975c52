"""Acyclic multicast networks: built-in topologies, a text format, max-flow checks.

Topology text format, one directive per line (``#`` starts a comment)::

    source s
    sink t1
    node relay1            # optional, nodes are implied by edges
    edge e1 s relay1       # edge <id> <tail> <head>, unit capacity
    m 2                    # optional, defaults to the smallest sink max-flow
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from .errors import CapacityError, CyclicTopologyError, FormatError, UnknownEdgeError


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    nodes: tuple[str, ...]  # topological order
    edges: tuple[Edge, ...]
    source: str
    sinks: tuple[str, ...]
    m: int
    name: str = field(default="custom", compare=False)

    @cached_property
    def _edge_pos(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def _topo_pos(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def _ids(self) -> tuple[dict[str, int], dict[str, int]]:
        # PRG identifiers come from sorted names so they do not depend on declaration order
        return ({v: i for i, v in enumerate(sorted(self.nodes))},
                {e: i for i, e in enumerate(sorted(self._edge_pos))})

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[self._edge_pos[edge_id]]
        except KeyError:
            raise UnknownEdgeError(edge_id) from None

    def edge_index(self, edge_id: str) -> int:
        """Stable integer id of an edge."""
        self.edge(edge_id)
        return self._ids[1][edge_id]

    def node_index(self, node: str) -> int:
        """Stable integer id of a node."""
        try:
            return self._ids[0][node]
        except KeyError:
            raise FormatError(f"unknown node {node!r}") from None

    def in_edges(self, node: str) -> tuple[Edge, ...]:
        """Incoming edges ordered by edge id; this fixes each input's coefficient slot."""
        return tuple(sorted((e for e in self.edges if e.head == node), key=lambda e: self._ids[1][e.id]))

    def out_edges(self, node: str) -> tuple[Edge, ...]:
        return tuple(sorted((e for e in self.edges if e.tail == node), key=lambda e: self._ids[1][e.id]))

    def topo_edges(self) -> list[Edge]:
        """Edges ordered so that each comes after every input of its tail."""
        return sorted(self.edges, key=lambda e: (self._topo_pos[e.tail], self._edge_pos[e.id]))

    def relays(self) -> tuple[str, ...]:
        return tuple(v for v in self.nodes if v != self.source and v not in self.sinks)


def max_flow(edges: tuple[Edge, ...] | list[Edge], source: str, sink: str) -> int:
    """Unit-capacity max-flow by BFS augmenting paths; parallel edges allowed."""
    flow = [0] * len(edges)
    adj: dict[str, list[tuple[int, bool]]] = {}
    for i, e in enumerate(edges):
        adj.setdefault(e.tail, []).append((i, True))
        adj.setdefault(e.head, []).append((i, False))
    total = 0
    while True:
        prev: dict[str, tuple[int, str] | None] = {source: None}
        queue = deque([source])
        while queue and sink not in prev:
            v = queue.popleft()
            for i, forward in adj.get(v, ()):
                e = edges[i]
                if forward and not flow[i] and e.head not in prev:
                    prev[e.head] = (i, v)
                    queue.append(e.head)
                elif not forward and flow[i] and e.tail not in prev:
                    prev[e.tail] = (i, v)
                    queue.append(e.tail)
        if sink not in prev:
            return total
        v = sink
        while prev[v] is not None:
            i, u = prev[v]
            flow[i] ^= 1
            v = u
        total += 1


def parse_topology(text: str) -> dict:
    spec: dict = {"nodes": [], "edges": [], "source": None, "sinks": [], "m": None}
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        key, args = words[0].lower(), words[1:]
        expected = {"source": 1, "sink": 1, "node": 1, "edge": 3, "m": 1}.get(key)
        if expected is None or len(args) != expected:
            raise FormatError(f"line {lineno}: cannot parse {raw.strip()!r}")
        if key == "source":
            if spec["source"] is not None:
                raise FormatError(f"line {lineno}: second source declared")
            spec["source"] = args[0]
        elif key == "sink":
            spec["sinks"].append(args[0])
        elif key == "node":
            spec["nodes"].append(args[0])
        elif key == "edge":
            spec["edges"].append(tuple(args))
        else:
            try:
                spec["m"] = int(args[0])
            except ValueError:
                raise FormatError(f"line {lineno}: m must be an integer") from None
    if spec["source"] is None:
        raise FormatError("no source declared")
    return spec


def format_topology(net: Network) -> str:
    lines = [f"source {net.source}"]
    lines += [f"sink {t}" for t in net.sinks]
    lines += [f"node {v}" for v in net.nodes if v != net.source and v not in net.sinks]
    lines += [f"edge {e.id} {e.tail} {e.head}" for e in net.edges]
    lines.append(f"m {net.m}")
    return "\n".join(lines) + "\n"


def _butterfly() -> dict:
    edges = [
        ("e1", "s", "relay1"),
        ("e2", "s", "relay2"),
        ("e3", "relay1", "relay3"),
        ("e4", "relay2", "relay3"),
        ("e5", "relay3", "relay4"),
        ("e6", "relay1", "t1"),
        ("e7", "relay2", "t2"),
        ("e8", "relay4", "t1"),
        ("e9", "relay4", "t2"),
    ]
    return {"edges": edges, "source": "s", "sinks": ["t1", "t2"], "m": 2}


def _line(relays: int = 1) -> dict:
    hops = ["s"] + [f"relay{i}" for i in range(1, relays + 1)] + ["t"]
    edges = [(f"e{i}", a, b) for i, (a, b) in enumerate(zip(hops, hops[1:]), 1)]
    return {"edges": edges, "source": "s", "sinks": ["t"], "m": 1}


def _diamond() -> dict:
    edges = [("e1", "s", "relay1"), ("e2", "s", "relay2"), ("e3", "relay1", "t"), ("e4", "relay2", "t")]
    return {"edges": edges, "source": "s", "sinks": ["t"], "m": 2}


def _parallel(width: int) -> dict:
    """Source and sink joined by `width` disjoint two-hop paths."""
    edges = []
    for i in range(1, width + 1):
        edges.append((f"a{i}", "s", f"relay{i}"))
        edges.append((f"b{i}", f"relay{i}", "t"))
    return {"edges": edges, "source": "s", "sinks": ["t"], "m": width}


BUILTINS = ("butterfly", "line", "diamond", "parallel")


def _builtin(name: str) -> dict:
    base, _, arg = name.partition(":")
    if base == "butterfly" and not arg:
        return _butterfly()
    if base == "diamond" and not arg:
        return _diamond()
    if base == "line":
        return _line(int(arg) if arg else 1)
    if base == "parallel":
        return _parallel(int(arg) if arg else 2)
    raise FormatError(f"unknown built-in topology {name!r}; choose from {', '.join(BUILTINS)}")


def build_network(spec: str | dict | Path) -> Network:
    """Validate a topology and return a Network.

    `spec` may be a built-in name ("butterfly", "line", "line:3", "diamond",
    "parallel:10"), a path to a topology text file, or a dict with keys
    edges, source, sinks and optionally nodes and m.
    """
    name = "custom"
    if isinstance(spec, Path):
        spec, name = parse_topology(spec.read_text()), spec.stem
    elif isinstance(spec, str):
        spec, name = _builtin(spec), spec
    edges = tuple(Edge(*e) if not isinstance(e, Edge) else e for e in spec["edges"])
    source, sinks = spec["source"], tuple(spec["sinks"])
    if not sinks:
        raise FormatError("at least one sink is required")
    ids = [e.id for e in edges]
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate edge id")
    names = list(dict.fromkeys([source, *sinks, *spec.get("nodes", ()), *(v for e in edges for v in (e.tail, e.head))]))

    deps: dict[str, set[str]] = {v: set() for v in names}
    for e in edges:
        if e.tail == e.head:
            raise CyclicTopologyError(f"self-loop on edge {e.id}")
        deps[e.head].add(e.tail)
    try:
        order = tuple(TopologicalSorter(deps).static_order())
    except CycleError as exc:
        raise CyclicTopologyError(f"topology contains a cycle through {exc.args[1]}") from None

    for v in names:
        if v != source and not any(e.head == v for e in edges):
            raise FormatError(f"node {v!r} has no incoming edge; only the source may")
    if any(e.head == source for e in edges):
        raise FormatError("the source may not have incoming edges")

    cuts = {t: max_flow(edges, source, t) for t in sinks}
    m = spec.get("m")
    if m is None:
        m = min(cuts.values())
    if m < 1:
        raise CapacityError("multicast capacity must be at least 1")
    short = {t: c for t, c in cuts.items() if c < m}
    if short:
        raise CapacityError(f"sink min-cut below m={m}: {short}")
    return Network(order, edges, source, sinks, m, name)
