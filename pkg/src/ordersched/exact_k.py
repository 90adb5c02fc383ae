"""Optimal one-time-setup schedules for a small number of families.

For every order of the setups, jobs start behind the last setup in weighted
SPT order and then, one at a time in that same order, take the block move
that improves the cost most (ties go to the earliest block).  The best
setup order wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from . import kernels
from .model import wspt_key
from .relaxation import JOB, SETUP, GluedInstance, OsSchedule

DEFAULT_MAX_K = 10


class TooManyFamiliesError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    job: str
    target: int


@dataclass(frozen=True)
class BlockSchedule:
    """Jobs between consecutive setups of ``tau``.

    ``blocks[0]`` precedes the first setup and ``blocks[l]`` follows setup
    ``l``; each block is kept in weighted SPT order.
    """

    tau: tuple[str, ...]
    blocks: tuple[tuple[str, ...], ...]
    glued: GluedInstance = field(compare=False, repr=False)

    def block_of(self, job_id: str) -> int:
        for b, members in enumerate(self.blocks):
            if job_id in members:
                return b
        raise KeyError(job_id)

    def to_os(self) -> OsSchedule:
        order = [(JOB, j) for j in self.blocks[0]]
        for f, members in zip(self.tau, self.blocks[1:]):
            order.append((SETUP, f))
            order.extend((JOB, j) for j in members)
        return OsSchedule(tuple(order))

    def cost(self) -> float:
        t = 0.0
        total = 0.0
        for b, members in enumerate(self.blocks):
            if b > 0:
                t += self.glued.setup(self.tau[b - 1]).processing_time
            for j in members:
                g = self.glued.job(j)
                t += g.total_processing
                total += g.weight * t
        return total


def wspt_rank(glued: GluedInstance) -> dict[str, int]:
    """Position of every glued job in weighted SPT order (index tie-break)."""
    keyed = sorted(
        range(len(glued.glued_jobs)),
        key=lambda i: wspt_key((glued.glued_jobs[i].total_processing,
                                glued.glued_jobs[i].weight, i)),
    )
    return {glued.glued_jobs[i].job_id: r for r, i in enumerate(keyed)}


def _check_tau(glued: GluedInstance, tau: Sequence[str]) -> tuple[str, ...]:
    tau = tuple(tau)
    if sorted(tau) != sorted(glued.families) or len(set(tau)) != len(tau):
        raise ValueError(f"{tau!r} is not a permutation of the families {glued.families!r}")
    return tau


def min_blocks(glued: GluedInstance, tau: Sequence[str]) -> dict[str, int]:
    """Earliest feasible block per job: the slot of its last required setup."""
    slot = {f: i + 1 for i, f in enumerate(tau)}
    return {g.job_id: max(slot[f] for f in g.required_families) for g in glued.glued_jobs}


def initial_schedule(glued: GluedInstance, tau: Sequence[str]) -> BlockSchedule:
    tau = _check_tau(glued, tau)
    rank = wspt_rank(glued)
    last = tuple(sorted(rank, key=rank.__getitem__))
    blocks = ((),) * len(tau) + (last,)
    return BlockSchedule(tau, blocks, glued)


def apply_move(schedule: BlockSchedule, move: Move) -> BlockSchedule:
    glued = schedule.glued
    lmin = min_blocks(glued, schedule.tau)[move.job]
    if not lmin <= move.target <= len(schedule.tau):
        raise ValueError(f"block {move.target} is infeasible for job {move.job!r} "
                         f"(earliest block {lmin})")
    rank = wspt_rank(glued)
    blocks = [tuple(j for j in members if j != move.job) for members in schedule.blocks]
    target = list(blocks[move.target]) + [move.job]
    target.sort(key=rank.__getitem__)
    blocks[move.target] = tuple(target)
    return BlockSchedule(schedule.tau, tuple(blocks), glued)


def _completions(schedule: BlockSchedule) -> tuple[dict[str, float], list[str]]:
    glued = schedule.glued
    t = 0.0
    done = {}
    order = []
    for b, members in enumerate(schedule.blocks):
        if b > 0:
            t += glued.setup(schedule.tau[b - 1]).processing_time
        for j in members:
            t += glued.job(j).total_processing
            done[j] = t
            order.append(j)
    return done, order


def move_delta(schedule: BlockSchedule, move: Move) -> float:
    """Change in OS cost if ``move`` were applied; ``schedule`` is untouched.

    Computed as ``w(j) * (C_new - C_old) + p(j) * (weight shifted behind j)``.
    """
    glued = schedule.glued
    job = glued.job(move.job)
    after = apply_move(schedule, move)
    old_c, old_order = _completions(schedule)
    new_c, new_order = _completions(after)
    w_after_old = sum(glued.job(j).weight for j in old_order[old_order.index(move.job) + 1:])
    w_after_new = sum(glued.job(j).weight for j in new_order[new_order.index(move.job) + 1:])
    return (job.weight * (new_c[move.job] - old_c[move.job])
            + job.total_processing * (w_after_new - w_after_old))


def local_search_reference(glued: GluedInstance, tau: Sequence[str]):
    """Direct rendering of the move loop via :func:`move_delta`.

    Quadratic per job; used to cross-check :func:`local_search`.
    """
    schedule = initial_schedule(glued, tau)
    lmin = min_blocks(glued, schedule.tau)
    K = len(schedule.tau)
    for j in schedule.blocks[K]:
        best, target = 0.0, None
        for t in range(lmin[j], K + 1):
            d = move_delta(schedule, Move(j, t))
            if d < best - 1e-12 * (1.0 + abs(best)):
                best, target = d, t
        if target is not None:
            schedule = apply_move(schedule, Move(j, target))
    return schedule, schedule.cost()


class _Prepared:
    """Per-instance arrays shared by all setup orders."""

    def __init__(self, glued: GluedInstance):
        rank = wspt_rank(glued)
        self.glued = glued
        self.jobs = sorted((g for g in glued.glued_jobs), key=lambda g: rank[g.job_id])
        self.p = [g.total_processing for g in self.jobs]
        self.w = [g.weight for g in self.jobs]
        self.req = [g.required_families for g in self.jobs]

    def run(self, tau: tuple[str, ...], backend=None):
        slot = {f: i + 1 for i, f in enumerate(tau)}
        lmin = [max(slot[f] for f in fams) for fams in self.req]
        prefix = [0.0]
        for f in tau:
            prefix.append(prefix[-1] + self.glued.setup(f).processing_time)
        block, cost = kernels.tau_local_search(self.p, self.w, lmin, prefix, backend=backend)
        blocks: list[list[str]] = [[] for _ in range(len(tau) + 1)]
        for g, b in zip(self.jobs, block):
            blocks[b].append(g.job_id)
        return BlockSchedule(tau, tuple(tuple(b) for b in blocks), self.glued), cost


def local_search(glued: GluedInstance, tau: Sequence[str], backend=None):
    """Optimal schedule among those whose setups follow ``tau``.

    Returns ``(BlockSchedule, cost)``.
    """
    tau = _check_tau(glued, tau)
    return _Prepared(glued).run(tau, backend=backend)


def solve_exact_k(glued: GluedInstance, max_k: int = DEFAULT_MAX_K, backend=None):
    """Optimal OS schedule by trying every setup order.

    Returns ``(OsSchedule, cost)``.  Among equal costs the first setup order
    in lexicographic enumeration order wins.
    """
    K = len(glued.families)
    if K > max_k:
        raise TooManyFamiliesError(
            f"{K} families exceed the exact solver's limit of {max_k} ({K}! setup orders); "
            "use the Sidney-based approximation instead")
    prep = _Prepared(glued)
    best = None
    best_cost = float("inf")
    for tau in permutations(sorted(glued.families)):
        schedule, cost = prep.run(tau, backend=backend)
        if cost < best_cost:
            best, best_cost = schedule, cost
    if best is None:  # no families means no jobs either
        return OsSchedule(()), 0.0
    return best.to_os(), best_cost
