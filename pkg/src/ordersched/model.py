"""Problem instances, the original cost model and weighted-SPT utilities.

An instance is a set of weighted jobs, each made of operations that belong
to families.  Switching the machine to a family ``f`` (or starting with it)
costs a setup of ``s(f)`` time units.  A schedule is a permutation of all
operations; a job completes with its last operation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Mapping, Sequence

from . import kernels


class InstanceError(ValueError):
    """Malformed instance document; ``path`` points at the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ScheduleError(ValueError):
    """Schedule is not a permutation of the instance's operations."""


@dataclass(frozen=True)
class Family:
    id: str
    setup_time: float


@dataclass(frozen=True)
class Operation:
    id: str
    family: str
    processing_time: float


@dataclass(frozen=True)
class Job:
    id: str
    weight: float
    operations: tuple[Operation, ...]

    @property
    def processing_time(self) -> float:
        return sum(o.processing_time for o in self.operations)


@dataclass(frozen=True)
class Schedule:
    order: tuple[str, ...]

    def to_json(self) -> dict:
        return {"order": list(self.order)}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Schedule":
        try:
            return cls(tuple(str(x) for x in doc["order"]))
        except (KeyError, TypeError) as exc:
            raise ScheduleError(f"bad schedule document: {exc}") from exc


@dataclass(frozen=True)
class Instance:
    families: tuple[Family, ...]
    jobs: tuple[Job, ...]

    def __post_init__(self):
        fam_ids = [f.id for f in self.families]
        if len(set(fam_ids)) != len(fam_ids):
            raise InstanceError("duplicate family id", "families")
        for i, f in enumerate(self.families):
            if not f.setup_time >= 0:
                raise InstanceError("setup time must be >= 0", f"families[{i}].setup")
        known = set(fam_ids)
        job_ids: set[str] = set()
        op_ids: set[str] = set()
        for i, job in enumerate(self.jobs):
            path = f"jobs[{i}]"
            if job.id in job_ids:
                raise InstanceError(f"duplicate job id {job.id!r}", f"{path}.id")
            job_ids.add(job.id)
            if not job.weight >= 0:
                raise InstanceError("weight must be >= 0", f"{path}.weight")
            if not job.operations:
                raise InstanceError("job needs at least one operation", f"{path}.ops")
            for k, op in enumerate(job.operations):
                opath = f"{path}.ops[{k}]"
                if op.id in op_ids:
                    raise InstanceError(f"duplicate operation id {op.id!r}", f"{opath}.id")
                op_ids.add(op.id)
                if op.family not in known:
                    raise InstanceError(f"unknown family {op.family!r}", f"{opath}.family")
                if not op.processing_time >= 0:
                    raise InstanceError("processing time must be >= 0", f"{opath}.p")

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def K(self) -> int:
        return len(self.families)

    def family(self, fid: str) -> Family:
        return self.family_map()[fid]

    def family_map(self) -> dict[str, Family]:
        return {f.id: f for f in self.families}

    def operations(self) -> list[tuple[Job, Operation]]:
        """All operations in instance order, paired with their job."""
        return [(job, op) for job in self.jobs for op in job.operations]

    def op_ids(self) -> list[str]:
        return [op.id for _, op in self.operations()]


def op_arrays(instance: Instance):
    """Flatten an instance into parallel lists indexed by operation position.

    Returns ``(op_index, p, fam, job, setup, weight)`` where ``op_index`` maps
    op id to position, ``fam``/``job`` are integer indices and ``setup`` and
    ``weight`` are per family / per job.
    """
    fam_index = {f.id: k for k, f in enumerate(instance.families)}
    op_index: dict[str, int] = {}
    p: list[float] = []
    fam: list[int] = []
    job: list[int] = []
    for j, jb in enumerate(instance.jobs):
        for op in jb.operations:
            op_index[op.id] = len(p)
            p.append(float(op.processing_time))
            fam.append(fam_index[op.family])
            job.append(j)
    setup = [float(f.setup_time) for f in instance.families]
    weight = [float(jb.weight) for jb in instance.jobs]
    return op_index, p, fam, job, setup, weight


def _positions(instance: Instance, order: Sequence[str], op_index: Mapping[str, int]) -> list[int]:
    seq = []
    seen: set[str] = set()
    for oid in order:
        if oid not in op_index:
            raise ScheduleError(f"unknown operation id {oid!r}")
        if oid in seen:
            raise ScheduleError(f"operation {oid!r} appears twice")
        seen.add(oid)
        seq.append(op_index[oid])
    if len(seq) != len(op_index):
        missing = sorted(set(op_index) - seen)
        raise ScheduleError(f"schedule is missing operations {missing}")
    return seq


def evaluate_original(instance: Instance, schedule: Schedule | Sequence[str]):
    """Total weighted completion time with a setup before every family change.

    Returns ``(total, per_job)`` where ``per_job`` maps job id to completion time.
    """
    order = schedule.order if isinstance(schedule, Schedule) else tuple(schedule)
    op_index, p, fam, job, setup, weight = op_arrays(instance)
    seq = _positions(instance, order, op_index)
    done = [0.0] * len(instance.jobs)
    t = 0.0
    last = -1
    for i in seq:
        if fam[i] != last:
            t += setup[fam[i]]
            last = fam[i]
        t += p[i]
        if t > done[job[i]]:
            done[job[i]] = t
    per_job = {jb.id: done[j] for j, jb in enumerate(instance.jobs)}
    total = sum(w * c for w, c in zip(weight, done))
    return total, per_job


def original_cost(instance: Instance, order: Sequence[str]) -> float:
    """Fast path of :func:`evaluate_original` returning only the total."""
    op_index, p, fam, job, setup, weight = op_arrays(instance)
    seq = _positions(instance, order, op_index)
    return kernels.original_cost(seq, p, fam, job, setup, weight)


def count_setups(instance: Instance, order: Sequence[str]) -> int:
    fam = {op.id: op.family for _, op in instance.operations()}
    runs = 0
    last = None
    for oid in order:
        if fam[oid] != last:
            runs += 1
            last = fam[oid]
    return runs


def wspt_compare(a: tuple[float, float, int], b: tuple[float, float, int]) -> int:
    """Compare ``(p, w, index)`` triples by p/w without dividing.

    Zero weight sorts after every positive weight; equal ratios (and two
    zero weights) fall back to the index.
    """
    pa, wa, ia = a
    pb, wb, ib = b
    if wa > 0 and wb > 0:
        lhs, rhs = pa * wb, pb * wa
        if lhs < rhs:
            return -1
        if lhs > rhs:
            return 1
    elif wa > 0:
        return -1
    elif wb > 0:
        return 1
    return (ia > ib) - (ia < ib)


wspt_key = cmp_to_key(wspt_compare)


def wspt_order(jobs: Iterable[tuple[object, float, float]]) -> list:
    """Ids of ``(id, p, w)`` triples in weighted shortest processing time order."""
    items = [(jid, float(p), float(w), i) for i, (jid, p, w) in enumerate(jobs)]
    items.sort(key=lambda t: wspt_key((t[1], t[2], t[3])))
    return [t[0] for t in items]


# --- JSON ---------------------------------------------------------------

def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError("expected a number", path)
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise InstanceError("expected a finite number", path)
    if value < 0:
        raise InstanceError("must be >= 0", path)
    return value


def _string(value, path: str) -> str:
    if not isinstance(value, str):
        raise InstanceError("expected a string", path)
    return value


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("expected an object", "$")
    for key in ("families", "jobs"):
        if not isinstance(doc.get(key), list):
            raise InstanceError("expected a list", key)
    families = []
    for i, f in enumerate(doc["families"]):
        path = f"families[{i}]"
        if not isinstance(f, dict):
            raise InstanceError("expected an object", path)
        families.append(Family(_string(f.get("id"), f"{path}.id"),
                               _number(f.get("setup"), f"{path}.setup")))
    known = {f.id for f in families}
    jobs = []
    for i, j in enumerate(doc["jobs"]):
        path = f"jobs[{i}]"
        if not isinstance(j, dict):
            raise InstanceError("expected an object", path)
        ops_doc = j.get("ops")
        if not isinstance(ops_doc, list):
            raise InstanceError("expected a list", f"{path}.ops")
        ops = []
        for k, o in enumerate(ops_doc):
            opath = f"{path}.ops[{k}]"
            if not isinstance(o, dict):
                raise InstanceError("expected an object", opath)
            fam = _string(o.get("family"), f"{opath}.family")
            if fam not in known:
                raise InstanceError(f"unknown family {fam!r}", f"{opath}.family")
            ops.append(Operation(_string(o.get("id"), f"{opath}.id"), fam,
                                 _number(o.get("p"), f"{opath}.p")))
        jobs.append(Job(_string(j.get("id"), f"{path}.id"),
                        _number(j.get("weight"), f"{path}.weight"), tuple(ops)))
    return Instance(tuple(families), tuple(jobs))


def instance_to_dict(instance: Instance) -> dict:
    return {
        "families": [{"id": f.id, "setup": f.setup_time} for f in instance.families],
        "jobs": [
            {
                "id": j.id,
                "weight": j.weight,
                "ops": [{"id": o.id, "family": o.family, "p": o.processing_time}
                        for o in j.operations],
            }
            for j in instance.jobs
        ],
    }


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"JSON syntax error: {exc.msg} (line {exc.lineno}, "
                            f"column {exc.colno})", "$") from exc
    return instance_from_dict(doc)


def serialize_instance(instance: Instance, indent: int | None = None) -> str:
    return json.dumps(instance_to_dict(instance), indent=indent)


def evaluation_report(instance: Instance, schedule: Schedule) -> dict:
    total, per_job = evaluate_original(instance, schedule)
    return {"total": total, "jobs": per_job}


def make_instance(families: Mapping[str, float], jobs: Sequence[tuple]) -> Instance:
    """Build an instance from plain data.

    ``jobs`` holds ``(job_id, weight, [(op_id, family, p), ...])`` tuples.
    """
    fams = tuple(Family(fid, float(s)) for fid, s in families.items())
    js = tuple(
        Job(jid, float(w), tuple(Operation(oid, f, float(p)) for oid, f, p in ops))
        for jid, w, ops in jobs
    )
    return Instance(fams, js)
