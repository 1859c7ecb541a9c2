import pytest

from hyperbound import CapacityMap, EngineConfig, build, run
from hyperbound.baselines import exact_optimal, greedy
from hyperbound.engine import run_with_state
from hyperbound.errors import InfeasibleInput, InstanceMismatch
from hyperbound.metrics import compare, report
from hyperbound.ordering import UniversalRandom, WeightDescending

from hypothesis import given
from hypothesis import strategies as st
from strategies import instances

PATH = [(1, [1, 2], 3.0), (2, [2, 3], 2.0), (3, [3, 4], 1.0)]


def test_empty_selection():
    g = build(PATH)
    rep = report(g, CapacityMap(1), set())
    assert rep.matched_count == 0 and rep.retention == 0
    assert report(build([]), CapacityMap(1), set()).retention == 0


def test_path_report():
    g = build(PATH)
    m, trace = run(g, CapacityMap(1), EngineConfig(ordering=WeightDescending(0)))
    rep = report(g, CapacityMap(1), m, trace)
    assert rep.degree_histogram == {1: 4}
    assert rep.saturated_users == 4
    assert rep.matched_count == 2 and rep.total_edges == 3
    assert rep.retention == pytest.approx(2 / 3)
    assert rep.rounds_executed == 2 and rep.per_round_accepted == [1, 1]


def test_single_edge_histogram():
    g = build([(1, [1, 2]), (2, [3])])
    rep = report(g, CapacityMap(1), {1})
    assert rep.degree_histogram == {1: 2}


def test_infeasible_rejected():
    g = build([(1, [1]), (2, [1])])
    with pytest.raises(InfeasibleInput):
        report(g, CapacityMap(1), {1, 2})


def test_baseline_report_has_no_rounds():
    g = build(PATH)
    rep = report(g, CapacityMap(1), greedy(g, CapacityMap(1)).matched)
    assert rep.rounds_executed is None and rep.per_round_accepted is None


def test_compare_examples():
    g = build(PATH)
    caps = CapacityMap(1)
    spec = UniversalRandom(5)
    m, trace = run(g, caps, EngineConfig(ordering=spec))
    assert compare(report(g, caps, m, trace), greedy(g, caps, spec)).ratio == 1.0
    mid_first = build([(1, [1, 2], 2.0), (2, [2, 3], 3.0), (3, [3, 4], 1.0)])
    c = compare(greedy(mid_first, caps, WeightDescending(0)), exact_optimal(mid_first, caps))
    assert (c.numerator, c.denominator, c.ratio) == (1, 2, 0.5)
    rep = report(g, caps, m, trace)
    assert compare(rep, rep).ratio == 1.0


def test_compare_zero_cases():
    g = build([(1, [1])])
    caps = CapacityMap(0)
    empty = report(g, caps, set())
    assert compare(empty, empty).ratio == 1.0
    one = report(g, CapacityMap(1), {1})
    c = compare(one, empty)
    assert c.ratio is None and not c.defined


def test_compare_instance_mismatch():
    a = report(build([(1, [1])]), CapacityMap(1), set())
    b = report(build([(2, [1])]), CapacityMap(1), set())
    with pytest.raises(InstanceMismatch):
        compare(a, b)


@given(instances(), st.integers(0, 2**64 - 1))
def test_report_invariants(inst, seed):
    g, caps = inst
    m, trace, final = run_with_state(g, caps, EngineConfig(ordering=UniversalRandom(seed)))
    rep = report(g, caps, m, trace)
    assert sum(rep.per_round_accepted) == rep.matched_count
    assert sum(k * c for k, c in rep.degree_histogram.items()) == sum(len(g.owners(e)) for e in m)
    assert all(k <= caps.max_capacity() for k in rep.degree_histogram)
    # engine state and independent recount agree
    nonzero = [v for v in final.d.tolist() if v]
    assert sorted(nonzero) == sorted(k for k, c in rep.degree_histogram.items() for _ in range(c))
    assert rep.saturated_users == int(final.saturated.sum())
