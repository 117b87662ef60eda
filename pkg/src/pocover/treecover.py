"""Two-approximate covering of sized out-trees.

The solver works bottom-up.  Each round identifies *anchors*: vertices whose
descendant mass no longer fits in the residual capacity below their root path,
while every child's does.  The descendants of each anchor are packed next-fit
into configurations that all carry the anchor's root path; if the packing ends
on an odd set, the last set is dropped and its vertices are deferred to a later
round.  The recorded run trace supports instance-specific lower and upper
bounds on the optimal cover cardinality whose ratio never exceeds 2.

Preprocessing peels three degenerate layers before the main loop: root paths
heavier than the capacity (no cover exists), leaves whose root path exactly
fills a configuration (that configuration is forced), and zero-size leaves
(detached, then re-inserted into any set containing their parent).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .model import (
    Configuration,
    Cover,
    CtInstance,
    InputError,
    SizedOutTree,
    path_weight,
)


class InfeasibleInstance(Exception):
    """No feasible cover exists (some root path outweighs the capacity)."""


@dataclass(frozen=True)
class PreprocessResult:
    """Outcome of instance preprocessing.

    ``reduced`` is None when preprocessing consumed the whole tree; otherwise
    its vertices are relabelled densely and ``reduced_to_original[i]`` maps
    them back.  ``forced`` and ``zero_leaves`` use original vertex ids.
    """

    reduced: Optional[CtInstance]
    reduced_to_original: tuple[int, ...]
    forced: tuple[Configuration, ...]
    zero_leaves: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class AnchorRecord:
    """One anchor's slice of the run: which round it fired in, its root-path
    weight, how much descendant mass it anchored vs. left over, and which
    cover sets it emitted."""

    anchor: int
    iteration: int
    h: int
    anchored_size: int
    leftover_size: int
    anchored_vertices: frozenset[int]
    emitted_sets: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.anchored_size <= 0:
            raise AssertionError("an anchor always anchors positive mass")
        if self.leftover_size < 0:
            raise AssertionError("leftover size cannot be negative")


@dataclass(frozen=True)
class RunTrace:
    """Complete audit record of one solver execution (original vertex ids)."""

    anchors: tuple[AnchorRecord, ...]
    top_anchors: frozenset[int]
    alpha: int
    forced_prefix: tuple[Configuration, ...]
    final_residual: Optional[Configuration]
    zero_leaf_attachments: dict[int, int]

    def loop_and_residual_count(self) -> int:
        """Number of cover sets emitted by the main loop plus the residual."""
        emitted = sum(len(rec.emitted_sets) for rec in self.anchors)
        return emitted + (1 if self.final_residual is not None else 0)


@dataclass(frozen=True)
class CoverResult:
    cover: Cover
    trace: RunTrace


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int
    alpha: int


@dataclass(frozen=True)
class NextFitResult:
    sets: tuple[frozenset[int], ...]
    anchored: frozenset[int]
    leftover: frozenset[int]


def preprocess(instance: CtInstance) -> PreprocessResult:
    """Peel forced configurations and zero-size leaves off an instance.

    Raises InfeasibleInstance when some root path outweighs the capacity.
    Afterwards every remaining vertex has root-path weight strictly below the
    capacity and every remaining leaf has positive size.
    """
    tree, k = instance.tree, instance.capacity
    n = tree.vertex_count
    h = _path_weights(tree)
    for v in range(n):
        if h[v] > k:
            raise InfeasibleInstance(
                f"root path of vertex {v} weighs {h[v]} > capacity {k}"
            )

    alive = set(range(n))
    child_count = [len(tree.children[v]) for v in range(n)]

    # Zero-size leaves first: detaching one may expose another.
    zero_leaves: list[tuple[int, int]] = []
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            p = tree.parent[v]
            if p is not None and child_count[v] == 0 and tree.size[v] == 0 and v in alive:
                alive.remove(v)
                child_count[p] -= 1
                zero_leaves.append((v, p))
                changed = True

    # Leaves whose root path exactly fills a configuration force that
    # configuration.  Removing one never creates a new leaf, so a scan per
    # emitted set suffices.
    forced: list[Configuration] = []
    while True:
        candidates = [
            v for v in sorted(alive) if child_count[v] == 0 and h[v] == k
        ]
        if not candidates:
            break
        leaf = candidates[0]
        forced.append(tree.ancestors(leaf))
        v: Optional[int] = leaf
        while v is not None:
            alive.remove(v)
            p = tree.parent[v]
            if p is None:
                break
            child_count[p] -= 1
            if child_count[p] > 0:
                break
            v = p

    kept = tuple(sorted(alive))
    if not kept:
        return PreprocessResult(None, (), tuple(forced), tuple(zero_leaves))
    new_id = {old: i for i, old in enumerate(kept)}
    parent = [
        None if tree.parent[old] is None else new_id[tree.parent[old]]
        for old in kept
    ]
    size = [tree.size[old] for old in kept]
    reduced = CtInstance(SizedOutTree(parent, size), k)
    return PreprocessResult(reduced, kept, tuple(forced), tuple(zero_leaves))


def anchor_step(
    instance: CtInstance, active: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]]:
    """One round of anchor selection on the active vertex set.

    Returns ``(fitting, anchors)``: the vertices whose active descendant mass
    fits below their residual capacity, and the minimal violators (every child
    fits, the vertex itself does not).  Requires the active set to induce a
    rooted subtree of total size above the capacity, which guarantees at least
    one anchor exists.
    """
    tree, k = instance.tree, instance.capacity
    active = frozenset(active)
    _require_rooted(tree, active)
    des_size, kids = _active_descendant_sizes(tree, active)
    if sum(tree.size[v] for v in active) <= k:
        raise InputError("anchor_step requires active mass above the capacity")
    h = _path_weights(tree)
    fitting = frozenset(v for v in active if des_size[v] <= k - h[v])
    anchors = frozenset(
        v
        for v in active
        if v not in fitting and all(c in fitting for c in kids[v])
    )
    return fitting, anchors


def next_fit(
    instance: CtInstance, active: Iterable[int], a: int
) -> NextFitResult:
    """Pack the active child subtrees of anchor ``a`` next-fit.

    Every emitted set carries the full root path of ``a``; each child subtree
    lands whole in exactly one set or in the leftover.  If packing ends on an
    odd number of sets the last one is dropped so the result is always an even
    count of at least two sets.
    """
    tree, k = instance.tree, instance.capacity
    active = frozenset(active)
    _require_rooted(tree, active)
    if a not in active:
        raise InputError(f"anchor {a} is not active")
    des_size, kids = _active_descendant_sizes(tree, active)
    h_a = path_weight(tree, a)
    if des_size[a] <= k - h_a:
        raise InputError(f"vertex {a} is not an anchor: its descendants fit")
    path = tree.ancestors(a)

    sets: list[frozenset[int]] = []
    current = set(path)
    current_size = h_a
    for u in kids[a]:
        sub = _active_subtree(tree, active, u)
        sub_size = tree.size[u] + des_size[u]
        if h_a + sub_size > k:
            raise InputError(f"child {u} of anchor {a} does not fit; not an anchor")
        if current_size + sub_size <= k:
            current |= sub
            current_size += sub_size
        else:
            sets.append(frozenset(current))
            current = set(path) | sub
            current_size = h_a + sub_size
    sets.append(frozenset(current))

    if len(sets) < 2:
        raise InputError(f"vertex {a} is not an anchor: one set suffices")
    leftover: frozenset[int] = frozenset()
    if len(sets) % 2 == 1:
        leftover = sets.pop() - path
    anchored = frozenset().union(*sets) - path
    return NextFitResult(tuple(sets), anchored, leftover)


def cover(instance: CtInstance) -> CoverResult:
    """Compute a feasible cover of at most twice the optimal cardinality.

    The returned trace records every anchor, the top anchors, the parity
    correction term, the forced prefix, and where detached zero-size leaves
    were re-inserted.
    """
    pre = preprocess(instance)
    cover_sets: list[frozenset[int]] = list(pre.forced)
    records: list[AnchorRecord] = []
    final_residual: Optional[Configuration] = None
    alpha = 0

    if pre.reduced is not None:
        red = pre.reduced
        to_orig = pre.reduced_to_original
        tree, k = red.tree, red.capacity
        h = _path_weights(tree)
        active = frozenset(range(tree.vertex_count))
        iteration = 1
        raw_records: list[tuple[int, AnchorRecord]] = []
        while sum(tree.size[v] for v in active) > k:
            _, anchors = anchor_step(red, active)
            covered: set[int] = set()
            for a in sorted(anchors):
                nf = next_fit(red, active, a)
                first = len(cover_sets)
                for q in nf.sets:
                    cover_sets.append(frozenset(to_orig[v] for v in q))
                record = AnchorRecord(
                    anchor=to_orig[a],
                    iteration=iteration,
                    h=h[a],
                    anchored_size=sum(tree.size[v] for v in nf.anchored),
                    leftover_size=sum(tree.size[v] for v in nf.leftover),
                    anchored_vertices=frozenset(to_orig[v] for v in nf.anchored),
                    emitted_sets=tuple(range(first, first + len(nf.sets))),
                )
                raw_records.append((a, record))
                for q in nf.sets:
                    covered |= q
            remaining = active - covered
            if remaining:
                nxt: set[int] = set()
                for v in remaining:
                    nxt |= tree.ancestors(v)
                active = frozenset(nxt)
            else:
                active = frozenset()
            iteration += 1
            if iteration > tree.vertex_count + 1:
                raise AssertionError("cover loop failed to make progress")
        if active:
            final_residual = frozenset(to_orig[v] for v in active)
            cover_sets.append(final_residual)

        records = [rec for _, rec in raw_records]
        anchor_ids = {a for a, _ in raw_records}
        top_reduced = frozenset(
            a
            for a in anchor_ids
            if not (tree.ancestors(a) - {a}) & anchor_ids
        )
        alpha = _parity_term(tree, raw_records, top_reduced)
        top_anchors = frozenset(to_orig[a] for a in top_reduced)
    else:
        top_anchors = frozenset()

    attachments: dict[int, int] = {}
    for leaf, parent in reversed(pre.zero_leaves):
        target = next(
            i for i, s in enumerate(cover_sets) if parent in s
        )
        cover_sets[target] = cover_sets[target] | {leaf}
        attachments[leaf] = target

    trace = RunTrace(
        anchors=tuple(records),
        top_anchors=top_anchors,
        alpha=alpha,
        forced_prefix=pre.forced,
        final_residual=final_residual,
        zero_leaf_attachments=attachments,
    )
    return CoverResult(list(cover_sets), trace)


def bounds(trace: RunTrace, instance: CtInstance) -> Bounds:
    """Instance-specific cardinality bounds computed from a run trace.

    The upper bound dominates the loop-emitted set count plus the residual;
    the lower bound is valid for every feasible cover of the preprocessed
    instance; and upper <= 2 * lower always holds.
    """
    k = instance.capacity
    upper = trace.alpha
    lower = trace.alpha
    for rec in trace.anchors:
        upper += 2 * (rec.anchored_size // (k - rec.h + 1))
        lower += rec.anchored_size // (k - rec.h)
    return Bounds(lower, upper, trace.alpha)


def _parity_term(
    tree: SizedOutTree,
    raw_records: list[tuple[int, AnchorRecord]],
    top_reduced: frozenset[int],
) -> int:
    """The 0/1 correction shared by both bounds: 1 when a top anchor kept
    leftovers or some leaf has no top anchor above it."""
    if any(rec.leftover_size > 0 for a, rec in raw_records if a in top_reduced):
        return 1
    for leaf in tree.leaves():
        if not tree.ancestors(leaf) & top_reduced:
            return 1
    return 0


def _path_weights(tree: SizedOutTree) -> list[int]:
    h = [0] * tree.vertex_count
    order = [tree.root]
    h[tree.root] = tree.size[tree.root]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for c in tree.children[u]:
            h[c] = h[u] + tree.size[c]
            order.append(c)
    return h


def _require_rooted(tree: SizedOutTree, active: frozenset[int]) -> None:
    if not active:
        raise InputError("active set must be nonempty")
    for v in active:
        p = tree.parent[v]
        if p is not None and p not in active:
            raise InputError("active set must be closed under ancestors")


def _active_descendant_sizes(
    tree: SizedOutTree, active: frozenset[int]
) -> tuple[dict[int, int], dict[int, list[int]]]:
    """Strict-descendant mass and child lists within the induced subtree."""
    kids = {
        v: [c for c in tree.children[v] if c in active] for v in active
    }
    des = {v: 0 for v in active}
    for v in _bottom_up(tree, active, kids):
        for c in kids[v]:
            des[v] += des[c] + tree.size[c]
    return des, kids


def _active_subtree(
    tree: SizedOutTree, active: frozenset[int], u: int
) -> frozenset[int]:
    out = {u}
    stack = [u]
    while stack:
        v = stack.pop()
        for c in tree.children[v]:
            if c in active:
                out.add(c)
                stack.append(c)
    return frozenset(out)


def _bottom_up(
    tree: SizedOutTree, active: frozenset[int], kids: dict[int, list[int]]
) -> list[int]:
    order: list[int] = []
    stack = [v for v in active if tree.parent[v] is None or tree.parent[v] not in active]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])
    order.reverse()
    return order
