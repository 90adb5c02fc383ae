import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import all_os_schedules, corpus, instances
from ordersched.model import evaluate_original, make_instance
from ordersched.relaxation import (JOB, SETUP, InfeasibleScheduleError, OsSchedule, evaluate_os,
                                   glue, os_lower_bound_check)


def test_glue_example(glued):
    g1, g2 = glued.glued_jobs
    assert (g1.total_processing, g1.weight, set(g1.required_families)) == (3.0, 2.0, {"f1", "f2"})
    assert (g2.total_processing, g2.weight, set(g2.required_families)) == (3.0, 1.0, {"f1"})
    assert [(s.family, s.processing_time, s.weight) for s in glued.setup_ops] == \
        [("f1", 1.0, 0.0), ("f2", 2.0, 0.0)]
    assert glued.precedence == {"j1": ("f1", "f2"), "j2": ("f1",)}


def test_glue_same_family_ops():
    g = glue(make_instance({"f": 1}, [("j", 1, [("x", "f", 2), ("y", "f", 3)])]))
    assert g.glued_jobs[0].total_processing == 5
    assert g.glued_jobs[0].required_families == ("f",)


def test_glue_drops_unused_family():
    g = glue(make_instance({"f": 1, "unused": 7}, [("j", 1, [("x", "f", 2)])]))
    assert g.families == ("f",)


def os_(*items):
    return OsSchedule(tuple((SETUP, r[1:]) if r.startswith("s") else (JOB, r) for r in items))


def test_evaluate_os_examples(glued):
    total, per_job = evaluate_os(glued, os_("sf1", "sf2", "j1", "j2"))
    assert per_job == {"j1": 6.0, "j2": 9.0}
    assert total == pytest.approx(21.0)
    total, per_job = evaluate_os(glued, os_("sf1", "j2", "sf2", "j1"))
    assert per_job == {"j2": 4.0, "j1": 9.0}
    assert total == pytest.approx(22.0)
    # both values are also what an exhaustive scan over feasible orders reports
    costs = {s.order: evaluate_os(glued, s)[0] for s in all_os_schedules(glued)}
    assert min(costs.values()) == pytest.approx(21.0)


def test_infeasible_schedule_names_job_and_setup(glued):
    with pytest.raises(InfeasibleScheduleError, match="'j1'.*'f1'"):
        evaluate_os(glued, os_("j1", "sf1", "sf2", "j2"))


@pytest.mark.parametrize("items,msg", [
    (("sf1", "sf2", "j1"), "missing"),
    (("sf1", "sf2", "j1", "j2", "j2"), "twice"),
    (("sf1", "sf2", "sf3", "j1", "j2"), "unknown"),
])
def test_malformed_os_schedules(glued, items, msg):
    with pytest.raises(InfeasibleScheduleError, match=msg):
        evaluate_os(glued, os_(*items))


def test_os_json_round_trip():
    s = os_("sf1", "j2", "sf2", "j1")
    doc = s.to_json()
    assert doc["order"][0] == {"kind": "setup", "family": "f1"}
    assert doc["order"][1] == {"kind": "job", "job": "j2"}
    assert OsSchedule.from_json(doc) == s


def test_lower_bound_check_example(inst, glued):
    os = os_lower_bound_check(inst, ["a", "b", "c"])
    assert evaluate_os(glued, os)[0] <= 22 + 1e-9


def test_lower_bound_check_single_job():
    inst = make_instance({"f": 2}, [("j", 3, [("o", "f", 1)])])
    os = os_lower_bound_check(inst, ["o"])
    assert evaluate_os(glue(inst), os)[0] == pytest.approx(evaluate_original(inst, ["o"])[0])


@settings(max_examples=80, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_lower_bound_check_property(inst, rnd):
    order = inst.op_ids()
    rnd.shuffle(order)
    g = glue(inst)
    os = os_lower_bound_check(inst, order)
    assert evaluate_os(g, os)[0] <= evaluate_original(inst, order)[0] + 1e-9


@settings(max_examples=60, deadline=None)
@given(instances())
def test_glue_preserves_totals(inst):
    g = glue(inst)
    assert sum(x.total_processing for x in g.glued_jobs) == pytest.approx(
        sum(o.processing_time for _, o in inst.operations()))
    assert sum(x.weight for x in g.glued_jobs) == pytest.approx(sum(j.weight for j in inst.jobs))
    for x, j in zip(g.glued_jobs, inst.jobs):
        assert set(x.required_families) == {o.family for o in j.operations}


def test_relaxation_never_exceeds_original_optimum():
    import itertools
    for inst in corpus(40, seed=3):
        if len(inst.op_ids()) > 6:
            continue
        g = glue(inst)
        os_opt = min(evaluate_os(g, s)[0] for s in all_os_schedules(g))
        orig_opt = min(evaluate_original(inst, p)[0] for p in itertools.permutations(inst.op_ids()))
        assert os_opt <= orig_opt + 1e-9


def test_accepted_schedules_respect_precedence():
    for inst in corpus(30, seed=4):
        g = glue(inst)
        rnd = random.Random(0)
        items = [(SETUP, f) for f in g.families] + [(JOB, x.job_id) for x in g.glued_jobs]
        for _ in range(20):
            rnd.shuffle(items)
            s = OsSchedule(tuple(items))
            pos = {it: i for i, it in enumerate(items)}
            feasible = all(pos[(SETUP, f)] < pos[(JOB, x.job_id)]
                           for x in g.glued_jobs for f in x.required_families)
            if feasible:
                evaluate_os(g, s)
            else:
                with pytest.raises(InfeasibleScheduleError):
                    evaluate_os(g, s)
