"""End-to-end property harness.

``verify_ct`` runs the full approximation pipeline on one tree instance and
checks every claimed property of the output: cover validity, the even-set and
consecutive-pair structure of the packing, anchor disjointness and ordering,
the bound sandwich, and (when the exact oracle is in range) the factor-2
guarantee against the true optimum.  The ``roundtrip_*`` functions do the
analogous work for each reduction: solve both sides exactly, compare optima,
carry the optima across the solution maps, and check the structural claims of
the construction.

A report with an ``error`` is an instance that could not be processed (e.g.
infeasible, or beyond an oracle guard); it does not count as a failed check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Optional

from . import exact, reductions
from .model import (
    BpccInstance,
    CtInstance,
    Digraph,
    DkshInstance,
    RcpInstance,
    contained_hyperedges,
    is_closed,
    validate_cover,
)
from .serialize import fingerprint
from .treecover import InfeasibleInstance, RunTrace, bounds, cover, preprocess


@dataclass(frozen=True)
class VerifyReport:
    """Per-instance verdict of the approximation pipeline."""

    fingerprint: str
    alg_cardinality: Optional[int]
    loop_and_residual: Optional[int]
    exact_cardinality: Optional[int]
    exact_reduced_cardinality: Optional[int]
    lower: Optional[int]
    upper: Optional[int]
    alpha: Optional[int]
    ratio: Optional[float]
    checks: tuple[tuple[str, bool], ...]
    error: Optional[str]
    alg_seconds: float
    exact_seconds: float

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


@dataclass(frozen=True)
class RoundtripReport:
    """Per-instance verdict of one reduction round trip."""

    kind: str
    fingerprint: str
    checks: tuple[tuple[str, bool], ...]
    error: Optional[str]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


def structural_checks(instance: CtInstance, result_cover, trace: RunTrace) -> list[tuple[str, bool]]:
    """Trace-level properties of one solver run (no oracle involved)."""
    k = instance.capacity
    checks: list[tuple[str, bool]] = []
    checks.append(("cover_valid", validate_cover(instance, result_cover) is None))
    checks.append(
        (
            "next_fit_even",
            all(
                len(rec.emitted_sets) >= 2 and len(rec.emitted_sets) % 2 == 0
                for rec in trace.anchors
            ),
        )
    )

    pair_ok = True
    for rec in trace.anchors:
        anchored_sizes = [
            sum(instance.tree.size[v] for v in result_cover[i] & rec.anchored_vertices)
            for i in rec.emitted_sets
        ]
        for j in range(0, len(anchored_sizes) - 1, 2):
            if anchored_sizes[j] + anchored_sizes[j + 1] < k - rec.h + 1:
                pair_ok = False
    checks.append(("next_fit_pairs", pair_ok))

    disjoint = True
    taken: set[int] = set()
    for rec in trace.anchors:
        if rec.anchored_vertices & taken:
            disjoint = False
        taken |= rec.anchored_vertices
    checks.append(("anchored_disjoint", disjoint))

    order_ok = True
    for one in trace.anchors:
        for other in trace.anchors:
            if one.anchor != other.anchor and one.anchor in instance.tree.ancestors(
                other.anchor
            ):
                if one.iteration <= other.iteration:
                    order_ok = False
    checks.append(("anchor_ancestors_fire_later", order_ok))

    mass_ok = all(
        rec.anchored_size
        == sum(instance.tree.size[v] for v in rec.anchored_vertices)
        for rec in trace.anchors
    )
    checks.append(("anchored_mass_consistent", mass_ok))
    return checks


def verify_ct(instance: CtInstance, with_exact: bool = False) -> VerifyReport:
    """Run the pipeline on one instance and check every claimed property."""
    fp = fingerprint(instance)
    start = time.perf_counter()
    try:
        result = cover(instance)
    except InfeasibleInstance as exc:
        return VerifyReport(
            fingerprint=fp,
            alg_cardinality=None,
            loop_and_residual=None,
            exact_cardinality=None,
            exact_reduced_cardinality=None,
            lower=None,
            upper=None,
            alpha=None,
            ratio=None,
            checks=(),
            error=f"infeasible: {exc}",
            alg_seconds=time.perf_counter() - start,
            exact_seconds=0.0,
        )
    alg_seconds = time.perf_counter() - start
    trace = result.trace
    b = bounds(trace, instance)
    loop_count = trace.loop_and_residual_count()

    checks = structural_checks(instance, result.cover, trace)
    checks.append(("loop_le_upper", loop_count <= b.upper))
    checks.append(("upper_le_twice_lower", b.upper <= 2 * b.lower))
    checks.append(
        ("cover_le_upper_plus_forced", len(result.cover) <= b.upper + len(trace.forced_prefix))
    )

    exact_cardinality: Optional[int] = None
    exact_reduced: Optional[int] = None
    ratio: Optional[float] = None
    exact_seconds = 0.0
    error: Optional[str] = None
    if with_exact:
        start = time.perf_counter()
        try:
            exact_cardinality = len(exact.exact_ct(instance))
            pre = preprocess(instance)
            if pre.reduced is None:
                exact_reduced = 0
            else:
                exact_reduced = len(exact.exact_ct(pre.reduced))
        except exact.SizeGuardError as exc:
            error = f"oracle guard: {exc}"
        exact_seconds = time.perf_counter() - start
        if exact_cardinality is not None and exact_reduced is not None:
            ratio = len(result.cover) / exact_cardinality if exact_cardinality else None
            checks.append(("ratio_at_most_2", len(result.cover) <= 2 * exact_cardinality))
            checks.append(("lower_le_exact_reduced", b.lower <= exact_reduced))
            checks.append(("exact_reduced_le_loop", exact_reduced <= loop_count))

    return VerifyReport(
        fingerprint=fp,
        alg_cardinality=len(result.cover),
        loop_and_residual=loop_count,
        exact_cardinality=exact_cardinality,
        exact_reduced_cardinality=exact_reduced,
        lower=b.lower,
        upper=b.upper,
        alpha=b.alpha,
        ratio=ratio,
        checks=tuple(checks),
        error=error,
        alg_seconds=alg_seconds,
        exact_seconds=exact_seconds,
    )


def run_verify(
    instances: Iterable[CtInstance], with_exact: bool = False
) -> list[VerifyReport]:
    return [verify_ct(instance, with_exact) for instance in instances]


# ---------------------------------------------------------------------------
# reduction round trips


def roundtrip_bpcc_to_ct(bpcc: BpccInstance) -> RoundtripReport:
    checks: list[tuple[str, bool]] = []
    artifact = reductions.bpcc_to_ct(bpcc)
    ct: CtInstance = artifact.target
    bpcc_cover, bpcc_opt = exact.exact_bpcc(bpcc)
    ct_cover = exact.exact_ct(ct)
    checks.append(("opt_equal", bpcc_opt == len(ct_cover)))

    lifted = [reductions.bpcc_map(artifact, c, "lift") for c in bpcc_cover]
    checks.append(("lift_covers_target", validate_cover(ct, lifted) is None))

    projected = [reductions.bpcc_map(artifact, c, "project") for c in ct_cover]
    proj_ok = all(_bpcc_config_ok(bpcc, c) for c in projected)
    covered = set().union(*projected) if projected else set()
    checks.append(
        ("project_covers_source", proj_ok and covered == set(range(bpcc.item_count)))
    )
    checks.append(
        ("size_formula", ct.tree.vertex_count == 1 + len(bpcc.clusters) + bpcc.item_count)
    )
    return RoundtripReport("bpcc_to_ct", fingerprint(bpcc), tuple(checks), None)


def _bpcc_config_ok(bpcc: BpccInstance, config: frozenset[int]) -> bool:
    touched = [i for i, g in enumerate(bpcc.clusters) if config & set(g)]
    weight = sum(bpcc.weight[v] for v in config)
    return len(touched) <= 1 and weight <= bpcc.capacity


def roundtrip_dksh_to_rcp(dksh: DkshInstance) -> RoundtripReport:
    checks: list[tuple[str, bool]] = []
    artifact = reductions.dksh_to_rcp(dksh)
    rcp: RcpInstance = artifact.target
    best_set, best_weight = exact.exact_dksh(dksh)
    rcp_set, rcp_profit = exact.exact_rcp(rcp)
    checks.append(("opt_equal", best_weight == rcp_profit))

    lifted = reductions.dksh_rcp_map(artifact, best_set, "lift")
    lift_profit = sum(rcp.profit[v] for v in lifted)
    checks.append(
        (
            "lift_feasible",
            is_closed(rcp.graph, lifted)
            and len(lifted) <= rcp.budget
            and lift_profit == best_weight,
        )
    )

    projected = reductions.dksh_rcp_map(artifact, rcp_set, "project")
    _, proj_weight = contained_hyperedges(dksh, projected)
    checks.append(
        ("project_feasible", len(projected) <= dksh.budget and proj_weight >= rcp_profit)
    )

    checks.append(("target_dag_bipartite", _dag_and_bipartite(rcp.graph, dksh)))
    return RoundtripReport("dksh_to_rcp", fingerprint(dksh), tuple(checks), None)


def _dag_and_bipartite(graph: Digraph, dksh: DkshInstance) -> bool:
    boundary = dksh.vertex_count * (len(dksh.hyperedges) + 1)
    return all(u < boundary <= v for u, v in graph.edges)


def roundtrip_rcp_to_dksh(rcp: RcpInstance) -> RoundtripReport:
    checks: list[tuple[str, bool]] = []
    artifact = reductions.rcp_to_dksh(rcp)
    dksh: DkshInstance = artifact.target
    rcp_set, rcp_profit = exact.exact_rcp(rcp)
    dksh_set, dksh_weight = exact.exact_dksh(dksh)
    checks.append(("opt_equal", rcp_profit == dksh_weight))

    _, lifted_weight = contained_hyperedges(dksh, rcp_set)
    checks.append(("closed_set_keeps_weight", lifted_weight == rcp_profit))

    minimal = reductions.minimalize(dksh, dksh_set)
    _, minimal_weight = contained_hyperedges(dksh, minimal)
    checks.append(
        (
            "minimal_projects_feasible",
            is_closed(rcp.graph, minimal)
            and len(minimal) <= rcp.budget
            and minimal_weight == dksh_weight,
        )
    )
    checks.append(("minimalize_idempotent", reductions.minimalize(dksh, minimal) == minimal))
    return RoundtripReport("rcp_to_dksh", fingerprint(rcp), tuple(checks), None)


def roundtrip_degree_augment(rcp: RcpInstance) -> RoundtripReport:
    checks: list[tuple[str, bool]] = []
    artifact = reductions.degree_augment(rcp)
    big: RcpInstance = artifact.target
    t = artifact.parameters["t"]
    n = rcp.graph.vertex_count

    src_set, src_profit = exact.exact_rcp(rcp)
    big_set, big_profit = exact.exact_rcp(big)
    checks.append(("opt_equal", src_profit == big_profit))

    lifted = reductions.augment_map(artifact, src_set, "lift")
    checks.append(
        (
            "lift_feasible",
            is_closed(big.graph, lifted)
            and len(lifted) == t * len(src_set)
            and len(lifted) <= big.budget
            and sum(big.profit[v] for v in lifted) == src_profit,
        )
    )

    projected = reductions.augment_map(artifact, big_set, "project")
    checks.append(
        (
            "project_feasible",
            is_closed(rcp.graph, projected)
            and len(projected) <= rcp.budget
            and sum(rcp.profit[v] for v in projected) == big_profit,
        )
    )

    indeg = [0] * big.graph.vertex_count
    outdeg = [0] * big.graph.vertex_count
    for u, v in big.graph.edges:
        outdeg[u] += 1
        indeg[v] += 1
    checks.append(("degree_at_most_2", max(indeg) <= 2 and max(outdeg) <= 2))
    checks.append(("size_formula", big.graph.vertex_count == n * t))
    checks.append(("reachability_preserved", _reachability_match(rcp.graph, big.graph, n)))
    checks.append(("gadgets_strongly_connected", _gadgets_connected(artifact)))
    return RoundtripReport("degree_augment", fingerprint(rcp), tuple(checks), None)


def _reachability_match(small: Digraph, big: Digraph, n: int) -> bool:
    """Original x reaches original y in the gadget graph iff it did before."""
    for x in range(n):
        small_reach = _reachable(small, x)
        big_reach = _reachable(big, x)
        if {y for y in small_reach if y != x} != {
            y for y in big_reach if y < n and y != x
        }:
            return False
    return True


def _reachable(graph: Digraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph.successors[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _gadgets_connected(artifact) -> bool:
    """Every gadget (root included) is strongly connected using only its
    internal edges."""
    big: RcpInstance = artifact.target
    rcp: RcpInstance = artifact.source
    for x in range(rcp.graph.vertex_count):
        gadget = reductions.gadget_vertices(artifact, x)
        forward: dict[int, list[int]] = {v: [] for v in gadget}
        backward: dict[int, list[int]] = {v: [] for v in gadget}
        for u, v in big.graph.edges:
            if u in gadget and v in gadget:
                forward[u].append(v)
                backward[v].append(u)
        for adjacency in (forward, backward):
            seen = {x}
            stack = [x]
            while stack:
                v = stack.pop()
                for w in adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != gadget:
                return False
    return True


def roundtrip_dks_pipeline(graph: Digraph, k: int) -> RoundtripReport:
    """Check the densest-subgraph pipeline against direct enumeration, plus
    the copy all-or-nothing structure and the edge-hit floor at the true
    optimum."""
    checks: list[tuple[str, bool]] = []
    und = reductions.undirected_edges(graph)
    fp = reductions.fingerprint_graph(graph) + f"/k{k}"

    if und:
        dks = DkshInstance(graph.vertex_count, [list(e) for e in und], [1] * len(und), k)
        _, optimum = exact.exact_dksh(dks)
    else:
        optimum = 0

    result = reductions.dks_via_urcp(graph, k)
    induced = sum(1 for u, v in und if u in result.solution and v in result.solution)
    checks.append(("pipeline_matches_exact", induced == optimum))
    checks.append(("solution_within_budget", len(result.solution) <= k))

    if k >= 2 and optimum >= 1:
        hits_at_opt = next(
            rec.edge_vertex_hits for rec in result.records if rec.m == optimum
        )
        checks.append(("edge_hits_floor", hits_at_opt >= optimum))

    group_ok = True
    for rec in result.records:
        width = 2 * rec.m
        for v in range(graph.vertex_count):
            inside = sum(
                1 for i in range(width) if v * width + i in rec.solution
            )
            if inside not in (0, width):
                group_ok = False
    checks.append(("copies_all_or_nothing", group_ok))
    return RoundtripReport("dks_to_urcp", fp, tuple(checks), None)


def run_roundtrip(kind: str, instances: Iterable) -> list[RoundtripReport]:
    """Dispatch a stream of instances through one reduction's round trip.

    For ``dks_to_urcp`` the stream consists of (graph, k) pairs.  Oracle
    guard violations become error entries rather than failures.
    """
    runners = {
        "bpcc_to_ct": roundtrip_bpcc_to_ct,
        "dksh_to_rcp": roundtrip_dksh_to_rcp,
        "rcp_to_dksh": roundtrip_rcp_to_dksh,
        "degree_augment": roundtrip_degree_augment,
    }
    reports = []
    for item in instances:
        try:
            if kind == "dks_to_urcp":
                graph, k = item
                reports.append(roundtrip_dks_pipeline(graph, k))
            elif kind in runners:
                reports.append(runners[kind](item))
            else:
                raise ValueError(f"unknown roundtrip kind {kind!r}")
        except exact.SizeGuardError as exc:
            reports.append(
                RoundtripReport(kind, "?", (), f"oracle guard: {exc}")
            )
    return reports
