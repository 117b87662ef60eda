"""Brute-force optimal solvers at desk scale.

These are the ground truth against which the approximation algorithm and the
reduction gadgets are checked, so they favor transparent exhaustive search
over cleverness.  Every solver carries an explicit size guard and raises
rather than silently degrading.

The profit-maximization solver picks one of three exhaustive strategies based
on the shape of the strongly-connected-component condensation: plain
enumeration of closed component subsets when there are few components, and two
layered enumerations for the gadget graphs produced by the reductions in this
package (many interchangeable source components feeding singleton sinks).  All
three are exact on their respective shapes.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Optional

from .model import (
    BpccInstance,
    Configuration,
    Cover,
    CtInstance,
    Digraph,
    DkshInstance,
    RcpInstance,
)
from .treecover import InfeasibleInstance

CONFIG_ENUM_MAX_VERTICES = 20
EXACT_CT_MAX_VERTICES = 18
RCP_MAX_COMPONENTS = 20
RCP_MAX_LAYER = 20
DKSH_MAX_COMBINATIONS = 10**7


class SizeGuardError(ValueError):
    """The instance exceeds the documented limit of an exact solver."""


def enumerate_configurations(instance: CtInstance) -> list[Configuration]:
    """All nonempty ancestor-closed vertex sets of size at most the capacity.

    Output is sorted by (cardinality, vertex tuple).  The search walks the
    tree in an order where parents precede children, so the work is
    proportional to the number of configurations rather than the power set.
    """
    tree, k = instance.tree, instance.capacity
    n = tree.vertex_count
    if n > CONFIG_ENUM_MAX_VERTICES:
        raise SizeGuardError(
            f"configuration enumeration is limited to {CONFIG_ENUM_MAX_VERTICES} vertices"
        )
    order: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(tree.children[v])

    results: list[Configuration] = []
    chosen: set[int] = set()

    def extend(i: int, total: int) -> None:
        if i == n:
            if chosen:
                results.append(frozenset(chosen))
            return
        v = order[i]
        extend(i + 1, total)
        p = tree.parent[v]
        if (p is None or p in chosen) and total + tree.size[v] <= k:
            chosen.add(v)
            extend(i + 1, total + tree.size[v])
            chosen.remove(v)

    extend(0, 0)
    results.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return results


def exact_ct(instance: CtInstance) -> Cover:
    """A minimum-cardinality cover, by branch-and-bound over coverage masks.

    Only maximal configurations are branched on (any cover can be extended to
    one using maximal sets of the same cardinality), the search always splits
    on the lowest uncovered vertex, and subtrees are cut with the capacity
    floor ceil(uncovered size / k) plus a seen-depth table.
    """
    tree, k = instance.tree, instance.capacity
    n = tree.vertex_count
    if n > EXACT_CT_MAX_VERTICES:
        raise SizeGuardError(
            f"exact tree covering is limited to {EXACT_CT_MAX_VERTICES} vertices"
        )
    configs = enumerate_configurations(instance)
    maximal = _maximal_only(instance, configs)
    masks = [_mask(c) for c in maximal]
    full = (1 << n) - 1
    reach = 0
    for m in masks:
        reach |= m
    if reach != full:
        missing = next(v for v in range(n) if not reach >> v & 1)
        raise InfeasibleInstance(
            f"vertex {missing} fits in no configuration (root path exceeds capacity)"
        )

    sizes = tree.size
    total = sum(sizes)
    covering: list[list[int]] = [[] for _ in range(n)]
    for i, m in enumerate(masks):
        for v in range(n):
            if m >> v & 1:
                covering[v].append(i)

    incumbent = _greedy_cover(masks, full)
    best = len(incumbent)
    best_cover = incumbent
    floor = max(1, -(-total // k))
    seen: dict[int, int] = {}
    chosen: list[int] = []

    def uncovered_size(mask: int) -> int:
        rest = full & ~mask
        s = 0
        while rest:
            low = rest & -rest
            s += sizes[low.bit_length() - 1]
            rest &= rest - 1
        return s

    def descend(mask: int, depth: int) -> None:
        nonlocal best, best_cover
        if mask == full:
            if depth < best:
                best = depth
                best_cover = chosen.copy()
            return
        if depth + max(1, -(-uncovered_size(mask) // k)) >= best:
            return
        if seen.get(mask, n + 1) <= depth:
            return
        seen[mask] = depth
        v = (full & ~mask & -(full & ~mask)).bit_length() - 1
        options = sorted(
            covering[v], key=lambda i: (-(masks[i] & ~mask).bit_count(), i)
        )
        for i in options:
            chosen.append(i)
            descend(mask | masks[i], depth + 1)
            chosen.pop()
            if best == floor:
                return

    descend(0, 0)
    return [maximal[i] for i in best_cover]


def exact_rcp(instance: RcpInstance) -> tuple[frozenset[int], int]:
    """A profit-maximal predecessor-closed set of bounded cardinality.

    Exhaustive over closed sets; ties go to the lexicographically smallest
    vertex tuple among the candidates the active strategy enumerates.
    """
    comps, comp_of = _scc(instance.graph)
    c = len(comps)
    pred_comps: list[set[int]] = [set() for _ in range(c)]
    succ_comps: list[set[int]] = [set() for _ in range(c)]
    for u, v in instance.graph.edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            pred_comps[cv].add(cu)
            succ_comps[cu].add(cv)
    comp_size = [len(g) for g in comps]
    comp_profit = [sum(instance.profit[v] for v in g) for g in comps]

    if c <= RCP_MAX_COMPONENTS:
        return _rcp_component_subsets(
            instance, comps, pred_comps, comp_size, comp_profit
        )

    sources = [i for i in range(c) if not pred_comps[i]]
    sinks = [i for i in range(c) if pred_comps[i] and not succ_comps[i]]
    layered = len(sources) + len(sinks) == c and all(
        comp_size[i] == 1 for i in sinks
    )
    if layered:
        if (
            all(comp_profit[i] == 0 for i in sources)
            and len(sinks) <= RCP_MAX_LAYER
        ):
            return _rcp_sink_subsets(
                instance, comps, pred_comps, comp_size, comp_profit, sources, sinks
            )
        if len(sources) <= RCP_MAX_LAYER:
            return _rcp_source_subsets(
                instance, comps, pred_comps, comp_size, comp_profit, sources, sinks
            )
    raise SizeGuardError(
        f"graph with {c} strongly connected components is beyond the exact solver"
    )


def exact_dksh(instance: DkshInstance) -> tuple[frozenset[int], int]:
    """A max-weight selection of min(budget, n) vertices by full enumeration."""
    n = instance.vertex_count
    pick = min(instance.budget, n)
    if comb(n, pick) > DKSH_MAX_COMBINATIONS:
        raise SizeGuardError("too many vertex subsets to enumerate")
    edge_masks = [_mask(e) for e in instance.hyperedges]
    weights = instance.weight
    best_set: tuple[int, ...] = tuple(range(pick))
    best_weight = -1
    for combo in itertools.combinations(range(n), pick):
        m = 0
        for v in combo:
            m |= 1 << v
        w = sum(
            weights[i] for i, em in enumerate(edge_masks) if em & ~m == 0
        )
        if w > best_weight:
            best_weight = w
            best_set = combo
    return frozenset(best_set), best_weight


def exact_bpcc(instance: BpccInstance) -> tuple[list[frozenset[int]], int]:
    """Optimal clustered bin packing: clusters pack independently, so the
    optimum is the sum of per-cluster exact bin packing solutions."""
    cover: list[frozenset[int]] = []
    for group in instance.clusters:
        cover.extend(_pack_cluster(group, instance.weight, instance.capacity))
    return cover, len(cover)


def _pack_cluster(
    group: tuple[int, ...], weight: tuple[int, ...], k: int
) -> list[frozenset[int]]:
    """Minimum bins for one cluster via subset dynamic programming."""
    items = list(group)
    n = len(items)
    full = (1 << n) - 1
    w = [weight[v] for v in items]
    best: dict[int, tuple[int, Optional[tuple[int, int]]]] = {0: (0, None)}
    frontier = [0]
    while full not in best:
        nxt = []
        for mask in frontier:
            rest = full & ~mask
            v = (rest & -rest).bit_length() - 1
            sub = rest
            while sub:
                if sub >> v & 1 and _mask_weight(sub, w) <= k:
                    new = mask | sub
                    if new not in best:
                        best[new] = (best[mask][0] + 1, (mask, sub))
                        nxt.append(new)
                sub = (sub - 1) & rest
        frontier = nxt
    bins: list[frozenset[int]] = []
    state = full
    while state:
        _, step = best[state]
        assert step is not None
        prev, sub = step
        bins.append(
            frozenset(items[i] for i in range(n) if sub >> i & 1)
        )
        state = prev
    bins.reverse()
    return bins


def _mask_weight(mask: int, w: list[int]) -> int:
    s = 0
    while mask:
        low = mask & -mask
        s += w[low.bit_length() - 1]
        mask &= mask - 1
    return s


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _maximal_only(
    instance: CtInstance, configs: list[Configuration]
) -> list[Configuration]:
    tree, k = instance.tree, instance.capacity
    out = []
    for c in configs:
        total = sum(tree.size[v] for v in c)
        extendable = any(
            v not in c
            and (tree.parent[v] is None or tree.parent[v] in c)
            and total + tree.size[v] <= k
            for v in range(tree.vertex_count)
        )
        if not extendable:
            out.append(c)
    return out


def _greedy_cover(masks: list[int], full: int) -> list[int]:
    chosen: list[int] = []
    mask = 0
    while mask != full:
        i = max(
            range(len(masks)),
            key=lambda j: ((masks[j] & ~mask).bit_count(), -j),
        )
        if masks[i] & ~mask == 0:
            break
        chosen.append(i)
        mask |= masks[i]
    return chosen


def _scc(graph: Digraph) -> tuple[list[tuple[int, ...]], list[int]]:
    """Strongly connected components, Kosaraju style, deterministically
    ordered by smallest member."""
    n = graph.vertex_count
    finish: list[int] = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        stack: list[tuple[int, int]] = [(s, 0)]
        seen[s] = True
        while stack:
            v, i = stack[-1]
            if i < len(graph.successors[v]):
                stack[-1] = (v, i + 1)
                w = graph.successors[v][i]
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, 0))
            else:
                finish.append(v)
                stack.pop()

    comp_of = [-1] * n
    comps: list[tuple[int, ...]] = []
    for s in reversed(finish):
        if comp_of[s] != -1:
            continue
        group = [s]
        comp_of[s] = -2
        queue = [s]
        while queue:
            v = queue.pop()
            for w in graph.predecessors[v]:
                if comp_of[w] == -1:
                    comp_of[w] = -2
                    group.append(w)
                    queue.append(w)
        idx = len(comps)
        comps.append(tuple(sorted(group)))
        for v in group:
            comp_of[v] = idx
    order = sorted(range(len(comps)), key=lambda i: comps[i][0])
    relabel = {old: new for new, old in enumerate(order)}
    comps = [comps[i] for i in order]
    comp_of = [relabel[c] for c in comp_of]
    return comps, comp_of


def _better(
    candidate: tuple[int, tuple[int, ...]],
    best: Optional[tuple[int, tuple[int, ...]]],
) -> bool:
    if best is None:
        return True
    if candidate[0] != best[0]:
        return candidate[0] > best[0]
    return candidate[1] < best[1]


def _rcp_component_subsets(
    instance: RcpInstance,
    comps: list[tuple[int, ...]],
    pred_comps: list[set[int]],
    comp_size: list[int],
    comp_profit: list[int],
) -> tuple[frozenset[int], int]:
    c = len(comps)
    pred_masks = [_mask(p) for p in pred_comps]
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for mask in range(1 << c):
        size = 0
        profit = 0
        closed = True
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if pred_masks[i] & ~mask:
                closed = False
                break
            size += comp_size[i]
            profit += comp_profit[i]
            m &= m - 1
        if not closed or size > instance.budget:
            continue
        vertices = tuple(
            sorted(v for i in range(c) if mask >> i & 1 for v in comps[i])
        )
        if _better((profit, vertices), best):
            best = (profit, vertices)
    assert best is not None
    return frozenset(best[1]), best[0]


def _rcp_sink_subsets(
    instance: RcpInstance,
    comps: list[tuple[int, ...]],
    pred_comps: list[set[int]],
    comp_size: list[int],
    comp_profit: list[int],
    sources: list[int],
    sinks: list[int],
) -> tuple[frozenset[int], int]:
    """Sources carry no profit, so an optimum is the closure of its sinks."""
    source_index = {s: i for i, s in enumerate(sources)}
    sink_pred_masks = [
        _mask(source_index[p] for p in pred_comps[s]) for s in sinks
    ]
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for mask in range(1 << len(sinks)):
        need = 0
        profit = 0
        card = 0
        for j in range(len(sinks)):
            if mask >> j & 1:
                need |= sink_pred_masks[j]
                profit += comp_profit[sinks[j]]
                card += 1
        m = need
        while m:
            low = m & -m
            card += comp_size[sources[low.bit_length() - 1]]
            m &= m - 1
        if card > instance.budget:
            continue
        vertices = tuple(
            sorted(
                [v for j in range(len(sinks)) if mask >> j & 1 for v in comps[sinks[j]]]
                + [
                    v
                    for i in range(len(sources))
                    if need >> i & 1
                    for v in comps[sources[i]]
                ]
            )
        )
        if _better((profit, vertices), best):
            best = (profit, vertices)
    assert best is not None
    return frozenset(best[1]), best[0]


def _rcp_source_subsets(
    instance: RcpInstance,
    comps: list[tuple[int, ...]],
    pred_comps: list[set[int]],
    comp_size: list[int],
    comp_profit: list[int],
    sources: list[int],
    sinks: list[int],
) -> tuple[frozenset[int], int]:
    """With singleton sinks, the best sinks for a fixed source choice are the
    top-profit enabled ones, so only source subsets need enumerating."""
    source_index = {s: i for i, s in enumerate(sources)}
    sink_order = sorted(
        range(len(sinks)), key=lambda j: (-comp_profit[sinks[j]], j)
    )
    sink_pred_masks = [
        _mask(source_index[p] for p in pred_comps[s]) for s in sinks
    ]
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for mask in range(1 << len(sources)):
        size = 0
        profit = 0
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            size += comp_size[sources[i]]
            profit += comp_profit[sources[i]]
            m &= m - 1
        if size > instance.budget:
            continue
        room = instance.budget - size
        taken: list[int] = []
        for j in sink_order:
            if room == 0:
                break
            if comp_profit[sinks[j]] == 0:
                break
            if sink_pred_masks[j] & ~mask == 0:
                taken.append(j)
                profit += comp_profit[sinks[j]]
                room -= 1
        vertices = tuple(
            sorted(
                [
                    v
                    for i in range(len(sources))
                    if mask >> i & 1
                    for v in comps[sources[i]]
                ]
                + [v for j in taken for v in comps[sinks[j]]]
            )
        )
        if _better((profit, vertices), best):
            best = (profit, vertices)
    assert best is not None
    return frozenset(best[1]), best[0]
