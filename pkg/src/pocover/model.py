"""Core domain types: sized out-trees, capacity instances, directed graphs,
profit/budget instances, weighted hypergraphs, and clustered packing instances,
plus the shared queries and validators every solver builds on.

Vertices are dense integers ``0..n-1`` throughout.  All quantities (sizes,
profits, weights, capacities) are nonnegative integers; nothing in this package
uses floating point.  Every type is immutable after construction and may be
shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


Configuration = frozenset[int]
Cover = list[Configuration]


class InputError(ValueError):
    """Raised when an instance or argument violates a documented invariant."""


def _check_range(n: int, vertices: Iterable[int], what: str) -> None:
    for v in vertices:
        if not (0 <= v < n):
            raise InputError(f"{what}: vertex {v} out of range [0, {n})")


@dataclass(frozen=True)
class SizedOutTree:
    """Rooted out-tree with integer vertex sizes.

    ``parent[v]`` is None exactly for the root; every vertex reaches the root
    by following parent links.
    """

    parent: tuple[Optional[int], ...]
    size: tuple[int, ...]
    root: int = field(init=False, compare=False, repr=False)
    children: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __init__(self, parent: Sequence[Optional[int]], size: Sequence[int]):
        parent = tuple(parent)
        size = tuple(size)
        n = len(parent)
        if n < 1:
            raise InputError("tree must have at least one vertex")
        if len(size) != n:
            raise InputError("parent and size arrays must have equal length")
        roots = [v for v in range(n) if parent[v] is None]
        if len(roots) != 1:
            raise InputError(f"expected exactly one root, found {len(roots)}")
        _check_range(n, (p for p in parent if p is not None), "parent")
        if any(s < 0 for s in size):
            raise InputError("vertex sizes must be nonnegative")
        kids: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if p is not None:
                kids[p].append(v)
        # BFS from the root; anything unreached sits on a parent cycle.
        seen = [False] * n
        queue = [roots[0]]
        seen[roots[0]] = True
        while queue:
            u = queue.pop()
            for c in kids[u]:
                seen[c] = True
                queue.append(c)
        if not all(seen):
            raise InputError("parent links contain a cycle or disconnected vertex")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "root", roots[0])
        object.__setattr__(self, "children", tuple(tuple(sorted(c)) for c in kids))

    @property
    def vertex_count(self) -> int:
        return len(self.parent)

    def ancestors(self, v: int) -> frozenset[int]:
        """All ancestors of ``v`` including ``v`` itself."""
        _check_range(self.vertex_count, [v], "ancestors")
        out = []
        u: Optional[int] = v
        while u is not None:
            out.append(u)
            u = self.parent[u]
        return frozenset(out)

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if not self.children[v])

    def total_size(self) -> int:
        return sum(self.size)


@dataclass(frozen=True)
class CtInstance:
    """A sized out-tree together with the configuration capacity."""

    tree: SizedOutTree
    capacity: int

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise InputError("capacity must be at least 1")
        for v in range(self.tree.vertex_count):
            if self.tree.size[v] > self.capacity:
                raise InputError(
                    f"vertex {v} has size {self.tree.size[v]} > capacity {self.capacity}"
                )


@dataclass(frozen=True)
class Digraph:
    """Simple directed graph on dense vertex ids; duplicate edges are merged."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    successors: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    predecessors: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if vertex_count < 1:
            raise InputError("graph must have at least one vertex")
        dedup = sorted({(int(u), int(v)) for u, v in edges})
        for u, v in dedup:
            if u == v:
                raise InputError(f"self-loop ({u},{v}) is not allowed")
        _check_range(vertex_count, (x for e in dedup for x in e), "edges")
        succ: list[list[int]] = [[] for _ in range(vertex_count)]
        pred: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in dedup:
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", tuple(dedup))
        object.__setattr__(self, "successors", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "predecessors", tuple(tuple(p) for p in pred))


@dataclass(frozen=True)
class RcpInstance:
    """Directed graph with vertex profits and a cardinality budget.

    A feasible solution is a predecessor-closed vertex set of cardinality at
    most ``budget``; the objective maximizes total profit.
    """

    graph: Digraph
    profit: tuple[int, ...]
    budget: int

    def __init__(self, graph: Digraph, profit: Sequence[int], budget: int):
        profit = tuple(profit)
        if len(profit) != graph.vertex_count:
            raise InputError("profit array length must match vertex count")
        if any(p < 0 for p in profit):
            raise InputError("profits must be nonnegative")
        if budget < 1:
            raise InputError("budget must be at least 1")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "profit", profit)
        object.__setattr__(self, "budget", budget)


@dataclass(frozen=True)
class DkshInstance:
    """Weighted hypergraph with a vertex budget.

    A solution is a set of at most ``budget`` vertices; its value is the total
    weight of hyperedges fully contained in the set.  Parallel hyperedges are
    kept as distinct entries with their own weights.
    """

    vertex_count: int
    hyperedges: tuple[frozenset[int], ...]
    weight: tuple[int, ...]
    budget: int

    def __init__(
        self,
        vertex_count: int,
        hyperedges: Iterable[Iterable[int]],
        weight: Sequence[int],
        budget: int,
    ):
        if vertex_count < 1:
            raise InputError("hypergraph must have at least one vertex")
        edges = tuple(frozenset(int(v) for v in e) for e in hyperedges)
        weight = tuple(weight)
        if len(weight) != len(edges):
            raise InputError("weight array length must match hyperedge count")
        for e in edges:
            if not e:
                raise InputError("hyperedges must be nonempty")
            _check_range(vertex_count, e, "hyperedge")
        if any(w < 0 for w in weight):
            raise InputError("weights must be nonnegative")
        if budget < 1:
            raise InputError("budget must be at least 1")
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "hyperedges", edges)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "budget", budget)


@dataclass(frozen=True)
class BpccInstance:
    """Bin packing whose conflict graph is the complement of disjoint clusters.

    Items are partitioned into clusters; a configuration is a subset of a
    single cluster with total weight at most ``capacity``.  Items heavier than
    the capacity are rejected on construction since no solution could exist.
    """

    clusters: tuple[tuple[int, ...], ...]
    weight: tuple[int, ...]
    capacity: int

    def __init__(
        self,
        clusters: Iterable[Iterable[int]],
        weight: Sequence[int],
        capacity: int,
    ):
        groups = tuple(tuple(sorted(int(v) for v in c)) for c in clusters)
        weight = tuple(weight)
        n = len(weight)
        if capacity < 1:
            raise InputError("capacity must be at least 1")
        if any(not g for g in groups):
            raise InputError("clusters must be nonempty")
        flat = [v for g in groups for v in g]
        if sorted(flat) != list(range(n)):
            raise InputError("clusters must partition the item ids 0..n-1")
        if any(w < 0 for w in weight):
            raise InputError("item weights must be nonnegative")
        for v in range(n):
            if weight[v] > capacity:
                raise InputError(f"item {v} has weight {weight[v]} > capacity {capacity}")
        object.__setattr__(self, "clusters", groups)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "capacity", capacity)

    @property
    def item_count(self) -> int:
        return len(self.weight)

    def cluster_of(self, item: int) -> int:
        for i, g in enumerate(self.clusters):
            if item in g:
                return i
        raise InputError(f"item {item} out of range")


def path_weight(tree: SizedOutTree, v: int) -> int:
    """Total size along the root-to-``v`` path, inclusive of ``v``."""
    _check_range(tree.vertex_count, [v], "path_weight")
    total = 0
    u: Optional[int] = v
    while u is not None:
        total += tree.size[u]
        u = tree.parent[u]
    return total


def closure(graph: Digraph, seed: Iterable[int]) -> frozenset[int]:
    """Smallest superset of ``seed`` with no incoming edges from outside.

    Equivalently the union of predecessor sets of the seed vertices: every
    vertex with a directed path into the result is pulled in.
    """
    seed = list(seed)
    _check_range(graph.vertex_count, seed, "closure seed")
    out = set(seed)
    stack = list(out)
    while stack:
        v = stack.pop()
        for u in graph.predecessors[v]:
            if u not in out:
                out.add(u)
                stack.append(u)
    return frozenset(out)


def is_closed(graph: Digraph, members: Iterable[int]) -> bool:
    members = frozenset(members)
    return closure(graph, members) == members


def validate_configuration(instance: CtInstance, members: Iterable[int]) -> Optional[str]:
    """Return None if ``members`` is a valid configuration, else a message
    naming the first ancestor-closure violation or the size excess."""
    tree = instance.tree
    members = frozenset(members)
    _check_range(tree.vertex_count, members, "configuration")
    for v in sorted(members):
        p = tree.parent[v]
        if p is not None and p not in members:
            return f"vertex {v} is included without its parent {p}"
    total = sum(tree.size[v] for v in members)
    if total > instance.capacity:
        return f"total size {total} exceeds capacity {instance.capacity}"
    return None


def validate_cover(instance: CtInstance, cover: Sequence[Iterable[int]]) -> Optional[str]:
    """Return None if every set is a valid configuration and the union is V."""
    covered: set[int] = set()
    for i, members in enumerate(cover):
        problem = validate_configuration(instance, members)
        if problem is not None:
            return f"set {i}: {problem}"
        covered.update(members)
    missing = [v for v in range(instance.tree.vertex_count) if v not in covered]
    if missing:
        return f"vertex {missing[0]} is not covered"
    return None


def contained_hyperedges(
    instance: DkshInstance, members: Iterable[int]
) -> tuple[frozenset[int], int]:
    """Hyperedge indices fully contained in ``members`` and their weight sum."""
    members = frozenset(members)
    _check_range(instance.vertex_count, members, "vertex set")
    inside = frozenset(
        i for i, e in enumerate(instance.hyperedges) if e <= members
    )
    return inside, sum(instance.weight[i] for i in inside)
