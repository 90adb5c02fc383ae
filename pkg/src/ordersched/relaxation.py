"""One-time-setup relaxation.

Each family's setup becomes a zero-weight operation that must precede every
job needing that family, and each job is glued into a single operation of
its total length.  Costs in this model are plain prefix sums.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import Instance, Operation, Schedule, _positions, op_arrays


class InfeasibleScheduleError(ValueError):
    """An OS schedule places a job before one of its setups, or is malformed."""


@dataclass(frozen=True)
class GluedJob:
    job_id: str
    total_processing: float
    weight: float
    required_families: tuple[str, ...]
    origin_ops: tuple[Operation, ...]


@dataclass(frozen=True)
class SetupOp:
    family: str
    processing_time: float
    weight: float = 0.0


@dataclass(frozen=True)
class GluedInstance:
    glued_jobs: tuple[GluedJob, ...]
    setup_ops: tuple[SetupOp, ...]
    _jobs: dict = field(default=None, compare=False, repr=False)
    _setups: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_jobs", {g.job_id: g for g in self.glued_jobs})
        object.__setattr__(self, "_setups", {s.family: s for s in self.setup_ops})

    @property
    def families(self) -> tuple[str, ...]:
        return tuple(s.family for s in self.setup_ops)

    @property
    def precedence(self) -> dict[str, tuple[str, ...]]:
        """Required setup families per glued job."""
        return {g.job_id: g.required_families for g in self.glued_jobs}

    def job(self, job_id: str) -> GluedJob:
        return self._jobs[job_id]

    def setup(self, family: str) -> SetupOp:
        return self._setups[family]


SETUP = "setup"
JOB = "job"


@dataclass(frozen=True)
class OsSchedule:
    """Permutation of ``("setup", family)`` and ``("job", job_id)`` items."""

    order: tuple[tuple[str, str], ...]

    def to_json(self) -> dict:
        out = []
        for kind, ref in self.order:
            out.append({"kind": SETUP, "family": ref} if kind == SETUP
                       else {"kind": JOB, "job": ref})
        return {"order": out}

    @classmethod
    def from_json(cls, doc: Mapping) -> "OsSchedule":
        items = []
        try:
            for i, it in enumerate(doc["order"]):
                kind = it["kind"]
                if kind == SETUP:
                    items.append((SETUP, str(it["family"])))
                elif kind == JOB:
                    items.append((JOB, str(it["job"])))
                else:
                    raise InfeasibleScheduleError(f"order[{i}].kind: unknown kind {kind!r}")
        except (KeyError, TypeError) as exc:
            raise InfeasibleScheduleError(f"bad OS schedule document: {exc}") from exc
        return cls(tuple(items))

    def job_order(self) -> list[str]:
        return [ref for kind, ref in self.order if kind == JOB]

    def setup_order(self) -> list[str]:
        return [ref for kind, ref in self.order if kind == SETUP]


def glue(instance: Instance) -> GluedInstance:
    glued = []
    used: set[str] = set()
    for job in instance.jobs:
        fams: list[str] = []
        for op in job.operations:
            if op.family not in fams:
                fams.append(op.family)
        used.update(fams)
        glued.append(GluedJob(job.id, sum(op.processing_time for op in job.operations),
                              job.weight, tuple(fams), job.operations))
    setups = tuple(SetupOp(f.id, f.setup_time) for f in instance.families if f.id in used)
    return GluedInstance(tuple(glued), setups)


def check_os_schedule(glued: GluedInstance, schedule: OsSchedule) -> None:
    """Raise :class:`InfeasibleScheduleError` unless ``schedule`` is feasible."""
    seen_setups: set[str] = set()
    seen_jobs: set[str] = set()
    for kind, ref in schedule.order:
        if kind == SETUP:
            if ref not in glued._setups:
                raise InfeasibleScheduleError(f"unknown setup family {ref!r}")
            if ref in seen_setups:
                raise InfeasibleScheduleError(f"setup of {ref!r} appears twice")
            seen_setups.add(ref)
        elif kind == JOB:
            if ref not in glued._jobs:
                raise InfeasibleScheduleError(f"unknown job {ref!r}")
            if ref in seen_jobs:
                raise InfeasibleScheduleError(f"job {ref!r} appears twice")
            for f in glued.job(ref).required_families:
                if f not in seen_setups:
                    raise InfeasibleScheduleError(
                        f"job {ref!r} is scheduled before the setup of family {f!r}")
            seen_jobs.add(ref)
        else:
            raise InfeasibleScheduleError(f"unknown item kind {kind!r}")
    missing = [f"setup {f}" for f in glued.families if f not in seen_setups]
    missing += [f"job {g.job_id}" for g in glued.glued_jobs if g.job_id not in seen_jobs]
    if missing:
        raise InfeasibleScheduleError(f"schedule is missing {', '.join(missing)}")


def evaluate_os(glued: GluedInstance, schedule: OsSchedule):
    """Total weighted completion time in the one-time-setup model.

    Returns ``(total, per_job)``.
    """
    check_os_schedule(glued, schedule)
    t = 0.0
    total = 0.0
    per_job = {}
    for kind, ref in schedule.order:
        if kind == SETUP:
            t += glued.setup(ref).processing_time
        else:
            g = glued.job(ref)
            t += g.total_processing
            per_job[ref] = t
            total += g.weight * t
    return total, per_job


def os_lower_bound_check(instance: Instance, schedule: Schedule | Sequence[str]) -> OsSchedule:
    """OS schedule whose cost is at most the original cost of ``schedule``.

    Every job is glued at the position of its last operation and every
    family's setup sits where that family is first set up in ``schedule``.
    """
    order = schedule.order if isinstance(schedule, Schedule) else tuple(schedule)
    op_index, p, fam, job, setup, weight = op_arrays(instance)
    seq = _positions(instance, order, op_index)
    fam_ids = [f.id for f in instance.families]
    first_pos: dict[int, int] = {}
    last_pos: dict[int, int] = {}
    for pos, i in enumerate(seq):
        first_pos.setdefault(fam[i], pos)
        last_pos[job[i]] = pos
    # (position, 0 = setup / 1 = job, ref); setups go ahead of a job at the same slot
    events = [(pos, 0, fam_ids[f]) for f, pos in first_pos.items()]
    events += [(pos, 1, instance.jobs[j].id) for j, pos in last_pos.items()]
    events.sort()
    return OsSchedule(tuple((SETUP if k == 0 else JOB, ref) for _, k, ref in events))
