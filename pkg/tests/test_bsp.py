import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperbound import CapacityMap, EngineConfig, GeneratorSpec, build, generate, run
from hyperbound.bsp import Partition, parallel_run, phase_stats
from hyperbound.generator import ZipfPopularity, ZipfSize
from hyperbound.ordering import PerUserOrdering, UniversalRandom, WeightDescending

from strategies import instances

PATH = [(1, [1, 2], 3.0), (2, [2, 3], 2.0), (3, [3, 4], 1.0)]


def test_partition_assignment():
    p = Partition(3)
    assert p.assign([0, 1, 2, 3, 2**64 - 1]).tolist() == [0, 1, 2, 0, (2**64 - 1) % 3]
    with pytest.raises(ValueError):
        Partition(0)


def test_single_worker_matches_run():
    g = build(PATH)
    assert parallel_run(g, CapacityMap(1), workers=1) == run(g, CapacityMap(1))


def test_seven_workers_on_path():
    g = build(PATH)
    config = EngineConfig(ordering=WeightDescending(0))
    m, trace = parallel_run(g, CapacityMap(1), config, workers=7)
    assert m == {1, 3}
    assert (m, trace) == run(g, CapacityMap(1), config)


def test_random_instance_across_worker_counts():
    g = generate(GeneratorSpec(60, 200, ZipfSize(1.5, 4), ZipfPopularity(0.8), seed=9))
    caps = CapacityMap(2, {u: u % 4 for u in range(0, 60, 3)})
    config = EngineConfig(ordering=UniversalRandom(123))
    results = [parallel_run(g, caps, config, workers=w) for w in (1, 2, 4, 8)]
    assert all(r == results[0] for r in results)
    assert results[0] == run(g, caps, config)


@given(instances(max_users=10, max_edges=16), st.integers(0, 2**64 - 1), st.integers(1, 9))
def test_schedule_independence(inst, seed, workers):
    g, caps = inst
    config = EngineConfig(ordering=UniversalRandom(seed))
    assert parallel_run(g, caps, config, workers) == run(g, caps, config)


@given(instances(max_users=6, max_edges=10), st.integers(1, 5))
def test_schedule_independence_per_user_order(inst, workers):
    g, caps = inst
    config = EngineConfig(4, PerUserOrdering(lambda u, h: (u ^ h.id) % 7), early_stop=False)
    assert parallel_run(g, caps, config, workers) == run(g, caps, config)


def test_repeated_runs_identical():
    g = generate(GeneratorSpec(100, 500, seed=1))
    first = parallel_run(g, CapacityMap(2), workers=4)
    for _ in range(3):
        assert parallel_run(g, CapacityMap(2), workers=4) == first


def test_phase_stats_zero_rounds():
    g = build([])
    _, trace = run(g, CapacityMap(1))
    assert phase_stats(g, trace) == []


def test_phase_stats_single_edge():
    g = build([(1, [1, 2])])
    _, trace = run(g, CapacityMap(1))
    stats = phase_stats(g, trace)
    assert len(stats) == 1
    assert (stats[0].proposal_messages, stats[0].commit_messages) == (2, 2)


def test_phase_stats_path():
    # a->e1, b->e1, c->e2, d->e3 in round 1; only e1 commits (2 owners)
    g = build(PATH)
    _, trace = run(g, CapacityMap(1), EngineConfig(ordering=WeightDescending(0)))
    stats = phase_stats(g, trace)
    assert [(s.proposal_messages, s.commit_messages) for s in stats] == [(4, 2), (2, 2)]
    # seed 42 puts e3 first: both ends commit in round 1
    _, trace = run(g, CapacityMap(1), EngineConfig(ordering=UniversalRandom(42)))
    assert [(s.proposal_messages, s.commit_messages) for s in phase_stats(g, trace)] == [(4, 4)]
