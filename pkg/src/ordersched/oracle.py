"""Exhaustive ground-truth solvers for small instances.

The searches walk every (feasible) ordering but memoize on the state that
determines the remaining cost, so the work is exponential in the number of
items rather than factorial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

from . import kernels
from .model import Instance, Schedule, op_arrays, original_cost
from .prec import PrecInstance
from .relaxation import JOB, SETUP, GluedInstance, OsSchedule


class GuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchGuard:
    max_items: int = 9
    max_closed_sets: int = 2 ** 18

    def __post_init__(self):
        if self.max_items < 1 or self.max_closed_sets < 1:
            raise ValueError("guard limits must be positive")

    def check(self, items: int, what: str) -> None:
        if items > self.max_items:
            raise GuardExceeded(f"{what}: {items} items exceed the oracle limit of "
                                f"{self.max_items}")


DEFAULT_GUARD = SearchGuard()


def brute_force_original(instance: Instance, guard: SearchGuard = DEFAULT_GUARD,
                         backend=None):
    """Optimal original-model schedule; ``(Schedule, total)``.

    Ties resolve to the lexicographically smallest sequence of operation
    positions (instance order).
    """
    op_index, p, fam, job, setup, weight = op_arrays(instance)
    guard.check(len(p), "brute_force_original")
    if not p:
        return Schedule(()), 0.0
    cost, seq = kernels.original_dp(p, fam, job, setup, weight, backend=backend)
    ids = instance.op_ids()
    return Schedule(tuple(ids[i] for i in seq)), cost


def enumerate_original(instance: Instance, max_items: int = 8):
    """Plain permutation scan; independent check for the memoized search."""
    ids = instance.op_ids()
    if len(ids) > max_items:
        raise GuardExceeded(f"{len(ids)} operations exceed {max_items}")
    best, best_order = math.inf, None
    for order in permutations(ids):
        c = original_cost(instance, order)
        if c < best:
            best, best_order = c, order
    return Schedule(tuple(best_order or ())), (0.0 if best_order is None else best)


def brute_force_prec(prec: PrecInstance, guard: SearchGuard = DEFAULT_GUARD, backend=None):
    """Optimal precedence-feasible node order; ``(list of ids, total)``."""
    guard.check(len(prec.nodes), "brute_force_prec")
    if not prec.nodes:
        return [], 0.0
    pred_mask = [0] * len(prec.nodes)
    for u, v in prec.edges:
        pred_mask[prec.index(v)] |= 1 << prec.index(u)
    cost, seq = kernels.prec_dp([v.p for v in prec.nodes], [v.w for v in prec.nodes],
                                pred_mask, backend=backend)
    return [prec.nodes[i].id for i in seq], cost


def brute_force_os(glued: GluedInstance, guard: SearchGuard = DEFAULT_GUARD, backend=None):
    """Optimal one-time-setup schedule; ``(OsSchedule, total)``."""
    items = [(SETUP, s.family) for s in glued.setup_ops]
    items += [(JOB, g.job_id) for g in glued.glued_jobs]
    guard.check(len(items), "brute_force_os")
    if not items:
        return OsSchedule(()), 0.0
    slot = {s.family: i for i, s in enumerate(glued.setup_ops)}
    p = [s.processing_time for s in glued.setup_ops] + [g.total_processing for g in glued.glued_jobs]
    w = [0.0] * len(glued.setup_ops) + [g.weight for g in glued.glued_jobs]
    pred_mask = [0] * len(glued.setup_ops)
    for g in glued.glued_jobs:
        m = 0
        for f in g.required_families:
            m |= 1 << slot[f]
        pred_mask.append(m)
    cost, seq = kernels.prec_dp(p, w, pred_mask, backend=backend)
    return OsSchedule(tuple(items[i] for i in seq)), cost


def enumerate_closed_sets(prec: PrecInstance, guard: SearchGuard = DEFAULT_GUARD):
    """Every predecessor-closed node set as ``(frozenset, w, p, rho)``.

    ``rho`` is ``w / p``, ``inf`` for zero length with positive weight and
    0 for the all-zero sets (including the empty set).
    """
    order = prec.topological_order()
    preds = prec.preds()
    node = {v.id: v for v in prec.nodes}
    out = []

    def walk(k, chosen, w, p):
        if k == len(order):
            if len(out) >= guard.max_closed_sets:
                raise GuardExceeded(f"more than {guard.max_closed_sets} closed sets")
            rho = w / p if p > 0 else (math.inf if w > 0 else 0.0)
            out.append((frozenset(chosen), w, p, rho))
            return
        vid = order[k]
        walk(k + 1, chosen, w, p)
        if all(u in chosen for u in preds[vid]):
            chosen.add(vid)
            walk(k + 1, chosen, w + node[vid].w, p + node[vid].p)
            chosen.remove(vid)

    walk(0, set(), 0.0, 0.0)
    return out
