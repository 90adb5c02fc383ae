import math
import random

import pytest
from hypothesis import given, settings

from helpers import corpus, instances
from ordersched.model import evaluate_original, make_instance, wspt_order
from ordersched.oracle import SearchGuard, brute_force_original, brute_force_os, enumerate_closed_sets
from ordersched.prec import (FlowNetwork, PrecError, PrecInstance, PrecNode, is_closed,
                             max_density_initial_set, max_weight_closure, prec_cost,
                             prec_order_to_os, sidney_decomposition, sidney_schedule,
                             solve_any_k, to_prec)
from ordersched.relaxation import evaluate_os, glue
from ordersched.transform import SQRT2

S1, S2, G1, G2 = "setup:f1", "setup:f2", "job:j1", "job:j2"


def prec_of(nodes, edges=()):
    return PrecInstance(tuple(PrecNode(i, float(p), float(w)) for i, p, w in nodes), tuple(edges))


def random_dag(rng: random.Random, max_nodes=14):
    n = rng.randint(1, max_nodes)
    nodes = []
    for i in range(n):
        p = rng.choice([0.0, float(rng.randint(1, 4)), rng.uniform(0.1, 5)])
        w = rng.choice([0.0, float(rng.randint(1, 4)), rng.uniform(0.1, 5)])
        nodes.append((f"v{i}", p, w))
    edges = [(f"v{i}", f"v{k}") for i in range(n) for k in range(i + 1, n)
             if rng.random() < 0.25]
    return prec_of(nodes, edges)


def test_to_prec_example(glued):
    prec = to_prec(glued)
    assert [(v.id, v.p, v.w) for v in prec.nodes] == [
        (S1, 1.0, 0.0), (S2, 2.0, 0.0), (G1, 3.0, 2.0), (G2, 3.0, 1.0)]
    assert prec.preds() == {S1: [], S2: [], G1: [S1, S2], G2: [S1]}


def test_to_prec_empty():
    assert to_prec(glue(make_instance({"f": 1}, []))).nodes == ()


def test_cycle_rejected():
    with pytest.raises(PrecError, match="cycle"):
        prec_of([("a", 1, 1), ("b", 1, 1)], [("a", "b"), ("b", "a")])


def test_flow_network_small():
    net = FlowNetwork(4)
    net.add_edge(0, 1, 3.0)
    net.add_edge(0, 2, 2.0)
    net.add_edge(1, 2, 1.0)
    net.add_edge(1, 3, 2.0)
    net.add_edge(2, 3, 3.0)
    assert net.max_flow(0, 3) == pytest.approx(5.0)


def test_closure_chain():
    prec = prec_of([("a", 1, 0), ("b", 1, 0)], [("a", "b")])
    chosen, total = max_weight_closure(prec, {"a": -1.0, "b": 2.0})
    assert chosen == {"a", "b"} and total == pytest.approx(1.0)


def test_closure_all_negative():
    prec = prec_of([("a", 1, 0), ("b", 1, 0)], [("a", "b")])
    assert max_weight_closure(prec, {"a": -1.0, "b": -2.0}) == (frozenset(), 0.0)


def test_closure_example(glued):
    prec = to_prec(glued)
    values = {v.id: v.w - 0.3 * v.p for v in prec.nodes}
    chosen, total = max_weight_closure(prec, values)
    sets = enumerate_closed_sets(prec)
    best = max(sum(values[v] for v in s) for s, *_ in sets)
    assert chosen == {S1, S2, G1, G2}
    assert total == pytest.approx(0.3) and best == pytest.approx(0.3)


def test_density_two_node():
    prec = prec_of([("s", 1, 0), ("j", 0, 1)], [("s", "j")])
    assert max_density_initial_set(prec) == (frozenset({"s", "j"}), 1.0)


def test_density_example(glued):
    chosen, rho = max_density_initial_set(to_prec(glued))
    assert rho == pytest.approx(1 / 3)
    assert chosen == {S1, S2, G1, G2}


def test_density_zero_time_node():
    chosen, rho = max_density_initial_set(prec_of([("z", 0, 1), ("a", 2, 1)]))
    assert chosen == {"z"} and rho == math.inf


def test_density_empty_rejected():
    with pytest.raises(PrecError):
        max_density_initial_set(prec_of([]))


def test_dinkelbach_lambdas_strictly_increase():
    rng = random.Random(2)
    for _ in range(100):
        prec = random_dag(rng)
        stats = {}
        max_density_initial_set(prec, stats)
        lams = stats.get("lambdas", [])
        assert len(lams) <= 100
        assert all(b > a for a, b in zip(lams, lams[1:]))


def _oracle_density(prec):
    sets = [s for s in enumerate_closed_sets(prec) if s[0]]
    best = max(s[3] for s in sets)
    if math.isinf(best):
        winners = [s[0] for s in sets if math.isinf(s[3])]
    else:
        winners = [s[0] for s in sets if s[3] >= best - 1e-9 * max(1.0, best)]
    return best, frozenset().union(*winners)


def test_closure_and_density_match_enumeration():
    rng = random.Random(9)
    for _ in range(100):
        prec = random_dag(rng)
        sets = enumerate_closed_sets(prec)
        lam = rng.uniform(0, 2)
        values = {v.id: v.w - lam * v.p for v in prec.nodes}
        chosen, total = max_weight_closure(prec, values)
        assert is_closed(prec, chosen)
        assert total == pytest.approx(max(sum(values[v] for v in s) for s, *_ in sets), abs=1e-9)
        best, maximal = _oracle_density(prec)
        chosen, rho = max_density_initial_set(prec)
        assert is_closed(prec, chosen)
        assert rho == best if math.isinf(best) else abs(rho - best) <= 1e-9
        assert chosen == maximal


def test_sidney_example(glued):
    prec = to_prec(glued)
    order = sidney_schedule(prec)
    assert order == [S1, G2, S2, G1]
    assert len(sidney_decomposition(prec)) == 1
    assert evaluate_os(glued, prec_order_to_os(order))[0] == pytest.approx(22.0)


def test_sidney_without_edges_is_wspt():
    rng = random.Random(4)
    for _ in range(30):
        nodes = [(f"v{i}", float(rng.randint(0, 5)), float(rng.randint(0, 5))) for i in range(7)]
        prec = prec_of(nodes)
        order, smith = sidney_schedule(prec), wspt_order(nodes)
        assert prec_cost(prec, order) == pytest.approx(prec_cost(prec, smith))
        # a node with p = w = 0 is neutral and may sit anywhere
        neutral = {i for i, p, w in nodes if p == 0 and w == 0}
        assert [v for v in order if v not in neutral] == [v for v in smith if v not in neutral]


def test_sidney_blocks_and_feasibility():
    rng = random.Random(6)
    for _ in range(100):
        prec = random_dag(rng, max_nodes=10)
        blocks = sidney_decomposition(prec)
        rhos = [r for _, r in blocks]
        assert all(a >= b - 1e-9 for a, b in zip(rhos, rhos[1:]))
        order = sidney_schedule(prec)
        prec_cost(prec, order)  # raises when infeasible


def test_sidney_two_approximation_on_corpus():
    for inst in corpus(200, seed=12):
        g = glue(inst)
        order = sidney_schedule(to_prec(g))
        cost = evaluate_os(g, prec_order_to_os(order))[0]
        assert cost <= 2 * brute_force_os(g)[1] + 1e-6


def test_solve_any_k_example(inst):
    schedule, cost = solve_any_k(inst, SQRT2)
    assert cost == pytest.approx(evaluate_original(inst, schedule)[0])
    assert cost <= 24 + 1e-9
    assert cost <= 2 * (1 + SQRT2) * 21


def test_solve_any_k_single_family_is_smith():
    inst = make_instance({"f": 1}, [("j1", 1, [("a", "f", 3)]), ("j2", 2, [("b", "f", 1)]),
                                    ("j3", 1, [("c", "f", 1)])])
    _, cost = solve_any_k(inst)
    assert cost == pytest.approx(brute_force_original(inst)[1])


@settings(max_examples=40, deadline=None)
@given(instances(max_jobs=4))
def test_solve_any_k_bound(inst):
    _, cost = solve_any_k(inst, SQRT2)
    opt = brute_force_original(inst, SearchGuard(max_items=8))[1]
    assert cost <= 2 * (1 + SQRT2) * opt + 1e-6
