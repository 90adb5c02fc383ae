"""Single-machine weighted completion time under precedence constraints.

The one-time-setup problem is such an instance.  Here it is approximated
within a factor 2 by Sidney decomposition: peel off a maximum-density
(w/p) predecessor-closed set, schedule it, repeat on the rest.  Density
sets come from Dinkelbach iteration over maximum-weight closures, and each
closure is one minimum s-t cut.
"""
from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import Instance, Schedule, original_cost, wspt_key
from .relaxation import JOB, SETUP, GluedInstance, OsSchedule, glue
from .transform import DEFAULT_BETA, transform

INF_CAP = 1e18
FLOW_TOL = 1e-9
DINKELBACH_TOL = 1e-12
MAX_DINKELBACH_ITER = 100


class PrecError(ValueError):
    pass


@dataclass(frozen=True)
class PrecNode:
    id: str
    p: float
    w: float


@dataclass(frozen=True)
class PrecInstance:
    nodes: tuple[PrecNode, ...]
    edges: tuple[tuple[str, str], ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        index = {}
        for i, v in enumerate(self.nodes):
            if v.id in index:
                raise PrecError(f"duplicate node id {v.id!r}")
            if not (v.p >= 0 and v.w >= 0):
                raise PrecError(f"node {v.id!r} needs p >= 0 and w >= 0")
            index[v.id] = i
        for u, v in self.edges:
            if u not in index or v not in index:
                raise PrecError(f"edge {u!r} -> {v!r} references an unknown node")
        object.__setattr__(self, "_index", index)
        self.topological_order()

    def index(self, node_id: str) -> int:
        return self._index[node_id]

    def preds(self) -> dict[str, list[str]]:
        out = {v.id: [] for v in self.nodes}
        for u, v in self.edges:
            out[v].append(u)
        return out

    def succs(self) -> dict[str, list[str]]:
        out = {v.id: [] for v in self.nodes}
        for u, v in self.edges:
            out[u].append(v)
        return out

    def topological_order(self) -> list[str]:
        indeg = {v.id: 0 for v in self.nodes}
        for _, v in self.edges:
            indeg[v] += 1
        succ = self.succs()
        ready = [v.id for v in self.nodes if indeg[v.id] == 0]
        out = []
        while ready:
            u = ready.pop()
            out.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(out) != len(self.nodes):
            raise PrecError("precedence graph has a cycle")
        return out

    def restrict(self, keep) -> "PrecInstance":
        keep = set(keep)
        return PrecInstance(tuple(v for v in self.nodes if v.id in keep),
                            tuple((u, v) for u, v in self.edges if u in keep and v in keep))

    def to_json(self) -> dict:
        return {"nodes": [{"id": v.id, "p": v.p, "w": v.w} for v in self.nodes],
                "edges": [[u, v] for u, v in self.edges]}

    @classmethod
    def from_json(cls, doc) -> "PrecInstance":
        try:
            nodes = tuple(PrecNode(str(v["id"]), float(v["p"]), float(v["w"]))
                          for v in doc["nodes"])
            edges = tuple((str(u), str(v)) for u, v in doc.get("edges", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise PrecError(f"bad precedence document: {exc}") from exc
        return cls(nodes, edges)


def parse_prec(text: str) -> PrecInstance:
    return PrecInstance.from_json(json.loads(text))


def is_closed(prec: PrecInstance, nodes) -> bool:
    nodes = set(nodes)
    return all(u in nodes for u, v in prec.edges if v in nodes)


def prec_cost(prec: PrecInstance, order: Sequence[str]) -> float:
    """Weighted completion time of a precedence-feasible node order."""
    if sorted(order) != sorted(v.id for v in prec.nodes):
        raise PrecError("order is not a permutation of the nodes")
    pos = {v: i for i, v in enumerate(order)}
    for u, v in prec.edges:
        if pos[u] > pos[v]:
            raise PrecError(f"{v!r} is scheduled before its predecessor {u!r}")
    t = 0.0
    total = 0.0
    for vid in order:
        node = prec.nodes[prec.index(vid)]
        t += node.p
        total += node.w * t
    return total


SETUP_PREFIX = "setup:"
JOB_PREFIX = "job:"


def to_prec(glued: GluedInstance) -> PrecInstance:
    nodes = [PrecNode(SETUP_PREFIX + s.family, s.processing_time, 0.0) for s in glued.setup_ops]
    nodes += [PrecNode(JOB_PREFIX + g.job_id, g.total_processing, g.weight)
              for g in glued.glued_jobs]
    edges = [(SETUP_PREFIX + f, JOB_PREFIX + g.job_id)
             for g in glued.glued_jobs for f in g.required_families]
    return PrecInstance(tuple(nodes), tuple(edges))


def prec_order_to_os(order: Sequence[str]) -> OsSchedule:
    items = []
    for vid in order:
        if vid.startswith(SETUP_PREFIX):
            items.append((SETUP, vid[len(SETUP_PREFIX):]))
        elif vid.startswith(JOB_PREFIX):
            items.append((JOB, vid[len(JOB_PREFIX):]))
        else:
            raise PrecError(f"node {vid!r} does not come from a glued instance")
    return OsSchedule(tuple(items))


# --- max flow -------------------------------------------------------------

class FlowNetwork:
    """Dinic's algorithm on float capacities with an absolute tolerance."""

    def __init__(self, n: int, tol: float = FLOW_TOL):
        self.n = n
        self.tol = tol
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []

    def add_edge(self, u: int, v: int, cap: float) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0.0)

    def _levels(self, s: int, t: int):
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if level[v] < 0 and self.cap[e] > self.tol:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> float:
        flow = 0.0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                pushed = self._push(s, t, INF_CAP * 4, level, it)
                if pushed <= self.tol:
                    break
                flow += pushed

    def _push(self, s, t, limit, level, it):
        # iterative DFS along the level graph
        path: list[int] = []
        u = s
        while True:
            if u == t:
                f = min([limit] + [self.cap[e] for e in path])
                for e in path:
                    self.cap[e] -= f
                    self.cap[e ^ 1] += f
                return f
            edges = self.head[u]
            advanced = False
            while it[u] < len(edges):
                e = edges[it[u]]
                v = self.to[e]
                if self.cap[e] > self.tol and level[v] == level[u] + 1:
                    path.append(e)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if not advanced:
                if not path:
                    return 0.0
                level[u] = -1  # dead end
                e = path.pop()
                u = self.to[e ^ 1]
                it[u] += 1

    def reaches(self, t: int) -> list[bool]:
        """Nodes with a residual path to ``t``."""
        seen = [False] * self.n
        seen[t] = True
        queue = deque([t])
        while queue:
            v = queue.popleft()
            for e in self.head[v]:
                # e is v -> u; the residual u -> v capacity lives on e ^ 1
                u = self.to[e]
                if not seen[u] and self.cap[e ^ 1] > self.tol:
                    seen[u] = True
                    queue.append(u)
        return seen


def max_weight_closure(prec: PrecInstance, value: Mapping[str, float]):
    """Predecessor-closed node set of maximum total value.

    Returns ``(frozenset, total)``; among optimal sets the largest one.
    """
    ids = [v.id for v in prec.nodes]
    n = len(ids)
    s, t = n, n + 1
    scale = max([1.0] + [abs(value[v]) for v in ids])
    net = FlowNetwork(n + 2, tol=FLOW_TOL * scale)
    for i, vid in enumerate(ids):
        val = value[vid]
        if val > 0:
            net.add_edge(s, i, val)
        elif val < 0:
            net.add_edge(i, t, -val)
    for u, v in prec.edges:
        # choosing v drags its predecessor u along
        net.add_edge(prec.index(v), prec.index(u), INF_CAP)
    net.max_flow(s, t)
    to_sink = net.reaches(t)
    chosen = frozenset(ids[i] for i in range(n) if not to_sink[i])
    return chosen, math.fsum(value[v] for v in chosen)


def _ratio(prec: PrecInstance, nodes) -> float:
    w = math.fsum(prec.nodes[prec.index(v)].w for v in nodes)
    p = math.fsum(prec.nodes[prec.index(v)].p for v in nodes)
    if p > 0:
        return w / p
    return math.inf if w > 0 else 0.0


def zero_time_closure(prec: PrecInstance) -> frozenset:
    """Largest closed set made only of zero-length nodes."""
    preds = prec.preds()
    ok: dict[str, bool] = {}
    for vid in prec.topological_order():
        ok[vid] = prec.nodes[prec.index(vid)].p == 0 and all(ok[u] for u in preds[vid])
    return frozenset(v for v, good in ok.items() if good)


def max_density_initial_set(prec: PrecInstance, stats: dict | None = None):
    """Closed set maximizing w/p, the largest one among ties.

    Returns ``(frozenset, rho)``; ``rho`` is ``inf`` for a zero-length set
    of positive weight.
    """
    if not prec.nodes:
        raise PrecError("empty instance has no initial set")
    zero = zero_time_closure(prec)
    if zero and any(prec.nodes[prec.index(v)].w > 0 for v in zero):
        return zero, math.inf
    everything = frozenset(v.id for v in prec.nodes)
    if math.fsum(v.p for v in prec.nodes) == 0:
        return everything, 0.0

    current = everything
    lam = _ratio(prec, current)
    lambdas = [lam]
    scale = 1.0 + math.fsum(v.w for v in prec.nodes)
    for _ in range(MAX_DINKELBACH_ITER):
        value = {v.id: v.w - lam * v.p for v in prec.nodes}
        closure, total = max_weight_closure(prec, value)
        if total <= DINKELBACH_TOL * scale or not closure:
            final = closure
            break
        nxt = _ratio(prec, closure)
        if nxt <= lam:
            final = closure
            break
        current, lam = closure, nxt
        lambdas.append(lam)
    else:
        final = current
    if stats is not None:
        stats["lambdas"] = lambdas
    # the last closure at the optimal ratio is the maximal optimizer
    if final and _ratio(prec, final) >= lam - 1e-12 * max(1.0, lam):
        return final, _ratio(prec, final)
    return current, lam


def sidney_decomposition(prec: PrecInstance) -> list[tuple[frozenset, float]]:
    rest = prec
    blocks = []
    while rest.nodes:
        chosen, rho = max_density_initial_set(rest)
        blocks.append((chosen, rho))
        rest = rest.restrict(v.id for v in rest.nodes if v.id not in chosen)
    return blocks


def _list_schedule(prec, members, done, preds, succ) -> list[str]:
    waiting = {v: sum(1 for u in preds[v] if u not in done) for v in members}
    heap = []

    def push(vid):
        node = prec.nodes[prec.index(vid)]
        i = prec.index(vid)
        heapq.heappush(heap, (wspt_key((node.p, node.w, i)), i, vid))

    for v in members:
        if waiting[v] == 0:
            push(v)
    out = []
    while heap:
        _, _, u = heapq.heappop(heap)
        out.append(u)
        for v in succ[u]:
            if v in waiting:
                waiting[v] -= 1
                if waiting[v] == 0:
                    push(v)
    return out


def sidney_schedule(prec: PrecInstance) -> list[str]:
    """Node order consistent with a Sidney decomposition; WSPT inside blocks."""
    order: list[str] = []
    done: set[str] = set()
    preds, succ = prec.preds(), prec.succs()
    for members, _ in sidney_decomposition(prec):
        part = _list_schedule(prec, members, done, preds, succ)
        order.extend(part)
        done.update(part)
    return order


def solve_os_sidney(glued: GluedInstance):
    """2-approximate OS schedule; returns ``(OsSchedule, cost)``."""
    from .relaxation import evaluate_os

    os = prec_order_to_os(sidney_schedule(to_prec(glued)))
    return os, evaluate_os(glued, os)[0]


def solve_any_k(instance: Instance, beta: float = DEFAULT_BETA):
    """Polynomial pipeline: glue, Sidney order, batch filling.

    Returns ``(Schedule, cost)`` in the original model.
    """
    glued = glue(instance)
    os, _ = solve_os_sidney(glued)
    schedule = transform(instance, glued, os, beta)
    return schedule, original_cost(instance, schedule.order)
