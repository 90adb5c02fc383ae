"""Shared builders and independent reference computations for the tests."""
import itertools
import math
import random

from hypothesis import strategies as st

from ordersched.model import make_instance
from ordersched.relaxation import JOB, SETUP, OsSchedule


def example_instance():
    return make_instance(
        {"f1": 1, "f2": 2},
        [("j1", 2, [("a", "f1", 2), ("b", "f2", 1)]), ("j2", 1, [("c", "f1", 3)])],
    )


def random_instance(rng: random.Random, max_jobs=6, max_families=3, max_ops=2):
    """Small instance mixing real and integer data (integers provoke ties)."""
    K = rng.randint(1, max_families)
    n = rng.randint(1, max_jobs)

    def num(hi):
        return rng.choice([rng.uniform(0, hi), float(rng.randint(0, int(hi))), rng.uniform(0.1, hi)])

    fams = {f"f{k}": num(5) for k in range(K)}
    jobs = []
    for j in range(n):
        ops = [(f"o{j}_{i}", f"f{rng.randrange(K)}", num(5))
               for i in range(rng.randint(1, max_ops))]
        jobs.append((f"j{j}", rng.choice([0.0, 1.0, 2.0, rng.uniform(0, 3)]), ops))
    return make_instance(fams, jobs)


def corpus(size, seed):
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(size)]


@st.composite
def instances(draw, max_jobs=4, max_families=3, max_ops=2):
    K = draw(st.integers(1, max_families))
    n = draw(st.integers(1, max_jobs))
    num = st.one_of(st.integers(0, 4).map(float),
                    st.floats(0, 5, allow_nan=False, allow_infinity=False))
    fams = {f"f{k}": draw(num) for k in range(K)}
    jobs = []
    for j in range(n):
        m = draw(st.integers(1, max_ops))
        ops = [(f"o{j}_{i}", f"f{draw(st.integers(0, K - 1))}", draw(num)) for i in range(m)]
        jobs.append((f"j{j}", draw(num), ops))
    return make_instance(fams, jobs)


def naive_original_cost(instance, order):
    """Completion times straight from the definition, one op at a time."""
    fam = {o.id: o.family for _, o in instance.operations()}
    p = {o.id: o.processing_time for _, o in instance.operations()}
    owner = {o.id: j.id for j, o in instance.operations()}
    s = {f.id: f.setup_time for f in instance.families}
    comp = {}
    t = 0.0
    for k, oid in enumerate(order):
        if k == 0 or fam[order[k - 1]] != fam[oid]:
            t += s[fam[oid]]
        t += p[oid]
        comp[oid] = t
    done = {j.id: max(comp[o.id] for o in j.operations) for j in instance.jobs}
    return sum(j.weight * done[j.id] for j in instance.jobs)


def all_os_schedules(glued):
    """Every precedence-feasible OS schedule, by plain permutation filtering."""
    items = [(SETUP, s.family) for s in glued.setup_ops] + [(JOB, g.job_id) for g in glued.glued_jobs]
    for perm in itertools.permutations(items):
        seen = set()
        ok = True
        for kind, ref in perm:
            if kind == SETUP:
                seen.add(ref)
            elif not set(glued.job(ref).required_families) <= seen:
                ok = False
                break
        if ok:
            yield OsSchedule(perm)


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol or (math.isinf(a) and a == b)
