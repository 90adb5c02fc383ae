"""Turn a one-time-setup schedule into an original-model schedule.

Batches (maximal same-family runs) are filled front to back: a batch of
family ``f`` keeps pulling the earliest later ``f`` operation while its
length stays strictly below ``beta * s(f)``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .model import Family, Instance, Job, Operation, Schedule, original_cost
from .relaxation import (JOB, SETUP, GluedInstance, OsSchedule, check_os_schedule, evaluate_os,
                         glue)

SQRT2 = math.sqrt(2.0)
DEFAULT_BETA = SQRT2


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Batch:
    family: str
    operations: tuple[Operation, ...]

    @property
    def processing(self) -> float:
        return sum(o.processing_time for o in self.operations)


def ungle(glued: GluedInstance, os: OsSchedule) -> list[Operation]:
    """Operation sequence implied by ``os`` with setups dropped.

    A glued job expands into its operations grouped by family, families in
    the order their setups appear in ``os``.
    """
    rank = {f: i for i, f in enumerate(os.setup_order())}
    seq: list[Operation] = []
    for kind, ref in os.order:
        if kind != JOB:
            continue
        ops = glued.job(ref).origin_ops
        # stable sort keeps original order inside a family group
        seq.extend(sorted(ops, key=lambda o: rank[o.family]))
    return seq


def batches_of(ops) -> list[Batch]:
    out: list[Batch] = []
    run: list[Operation] = []
    for op in ops:
        if run and op.family != run[-1].family:
            out.append(Batch(run[0].family, tuple(run)))
            run = []
        run.append(op)
    if run:
        out.append(Batch(run[0].family, tuple(run)))
    return out


class _Node:
    __slots__ = ("family", "ops", "proc", "prev", "next", "alive", "slot")

    def __init__(self, family, ops, slot):
        self.family = family
        self.ops = deque(ops)
        self.proc = sum(o.processing_time for o in ops)
        self.prev = None
        self.next = None
        self.alive = True
        self.slot = slot


def pull_batches(ops, setup: dict[str, float], beta: float,
                 pulled: set | None = None) -> list[Operation]:
    """Run the batch-filling pass on an operation sequence.

    Ids of moved operations are added to ``pulled`` when it is given.
    """
    if not beta > 0:
        raise ParameterError(f"pull factor must be > 0, got {beta}")
    by_family: dict[str, list[_Node]] = {}
    head = prev = None
    for b in batches_of(ops):
        lst = by_family.setdefault(b.family, [])
        node = _Node(b.family, b.operations, len(lst))
        lst.append(node)
        if prev is None:
            head = node
        else:
            prev.next = node
            node.prev = prev
        prev = node

    def unlink(node):
        node.alive = False
        left, right = node.prev, node.next
        if left is not None:
            left.next = right
        if right is not None:
            right.prev = left
        if left is not None and right is not None and left.family == right.family:
            left.ops.extend(right.ops)
            left.proc += right.proc
            right.alive = False
            left.next = right.next
            if right.next is not None:
                right.next.prev = left

    cur = head
    while cur is not None:
        limit = beta * setup[cur.family]
        peers = by_family[cur.family]
        k = cur.slot + 1
        while True:
            while k < len(peers) and not peers[k].alive:
                k += 1
            if k == len(peers):
                break
            src = peers[k]
            op = src.ops[0]
            if not cur.proc + op.processing_time < limit:
                break
            src.ops.popleft()
            src.proc -= op.processing_time
            cur.ops.append(op)
            cur.proc += op.processing_time
            if pulled is not None:
                pulled.add(op.id)
            if not src.ops:
                unlink(src)
        cur = cur.next

    out: list[Operation] = []
    node = head
    while node is not None:
        out.extend(node.ops)
        node = node.next
    return out


def transform(instance: Instance, glued: GluedInstance, os: OsSchedule,
              beta: float = DEFAULT_BETA) -> Schedule:
    """Original-model schedule built from a feasible OS schedule."""
    if not beta > 0:
        raise ParameterError(f"pull factor must be > 0, got {beta}")
    check_os_schedule(glued, os)
    setup = {f.id: f.setup_time for f in instance.families}
    ops = pull_batches(ungle(glued, os), setup, beta)
    return Schedule(tuple(o.id for o in ops))


def gen_tightness(m: int, eps: float, beta: float = DEFAULT_BETA):
    """Instance on which the batch-filling loses close to a factor ``1 + beta``.

    Family A has setup 1 and family B setup ``eps**2``.  A short A job runs
    first, then ``m`` tiny B jobs, then an A job just short enough to be
    pulled in front of all B jobs.  Returns ``(instance, os_schedule)``.
    """
    if not isinstance(m, int) or m < 1:
        raise ParameterError(f"m must be an integer >= 1, got {m!r}")
    if not eps > 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    if not beta >= SQRT2 - 1e-12:
        raise ParameterError(f"beta must be >= sqrt(2), got {beta}")
    if not beta - 2 * eps > 0:
        raise ParameterError("eps too large for beta")
    families = (Family("A", 1.0), Family("B", eps * eps))
    jobs = [Job("first", 1.0, (Operation("first.A", "A", eps),))]
    jobs += [Job(f"b{i}", 1.0, (Operation(f"b{i}.B", "B", eps),)) for i in range(1, m + 1)]
    jobs.append(Job("last", 1.0, (Operation("last.A", "A", beta - 2 * eps),)))
    instance = Instance(families, tuple(jobs))
    order = [(SETUP, "A"), (JOB, "first"), (SETUP, "B")]
    order += [(JOB, f"b{i}") for i in range(1, m + 1)]
    order.append((JOB, "last"))
    return instance, OsSchedule(tuple(order))


def tightness_ratio(m: int, eps: float, beta: float = DEFAULT_BETA) -> tuple[float, float, float]:
    """``(original_cost, os_cost, ratio)`` measured on :func:`gen_tightness`."""
    instance, os = gen_tightness(m, eps, beta)
    glued = glue(instance)
    out = transform(instance, glued, os, beta)
    orig = original_cost(instance, out.order)
    relaxed, _ = evaluate_os(glued, os)
    return orig, relaxed, orig / relaxed
