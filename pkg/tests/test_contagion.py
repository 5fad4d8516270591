import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopcontagion.contagion import (
    MinContagionInstance,
    Problem,
    StopContagionInstance,
    bruteforce_edge_deletion,
    reduce_min_contagion,
    reduce_stop_contagion,
    restrict_to_closure,
    separating_deletions,
    solve,
    solve_min_contagion_tw,
    solve_randomized_fpt,
    solve_stop_contagion_tw,
    verify_deletion,
)
from stopcontagion.errors import InvalidInstance, TooLarge
from stopcontagion.experiments import fpt_success_frequency, random_min_instance, random_stop_instance
from stopcontagion.graph_core import empty_graph, from_edge_list, without_edges
from stopcontagion.percolation import ThresholdMap, closure, percolate
from stopcontagion.random_models import complete_graph, path, substream

from .strategies import seeded_graphs


def test_restriction_drops_vertices_outside_the_closure(paw_min):
    restriction = restrict_to_closure(paw_min.graph, paw_min.seeds, paw_min.effective_thresholds)
    assert (restriction.graph.n, restriction.graph.m) == (3, 3)
    assert restriction.seeds == frozenset({0, 1})
    assert restriction.mapping.inverse == (0, 1, 2)


def test_min_reduction_layout(paw_min):
    reduction = reduce_min_contagion(paw_min)
    assert (reduction.graph.n, reduction.graph.m) == (8, 8)
    assert reduction.counted == frozenset({2, 3})
    assert reduction.immunizable == frozenset({4, 5, 6, 7})
    assert reduction.thresholds.values == (0, 0, 2, 2, 1, 1, 1, 1)
    assert reduction.edge_of[4] == (0, 1)


def test_stop_reduction_counts_only_protected(k4_stop):
    reduction = reduce_stop_contagion(k4_stop)
    assert (reduction.graph.n, reduction.graph.m) == (10, 12)
    assert reduction.counted == frozenset({3})
    assert reduction.to_gidm(2).budget == 2


def test_paw_needs_one_deletion(paw_min):
    brute = bruteforce_edge_deletion(paw_min)
    assert brute.deleted_edges == ((0, 2),)
    assert brute.method == "brute"
    assert brute.additional_infected == 0
    tw = solve_min_contagion_tw(paw_min)
    assert tw.size == 1
    assert tw.deleted_edges[0] in {(0, 2), (1, 2)}
    assert tw.optimal
    assert tw.problem is Problem.MIN


def test_slack_can_make_deletions_unnecessary(paw):
    solution = solve_min_contagion_tw(MinContagionInstance.uniform(paw, {0, 1}, slack=1))
    assert solution.size == 0
    assert solution.additional_infected == 1


def test_k4_min_and_stop(k4_min, k4_stop):
    assert solve_min_contagion_tw(k4_min).size == 2
    assert bruteforce_edge_deletion(k4_min).size == 2
    stop = solve_stop_contagion_tw(k4_stop)
    assert stop.size == 2
    assert stop.protected_infected == 0


def test_star_stop(star_stop):
    assert solve_stop_contagion_tw(star_stop).size == 1
    assert bruteforce_edge_deletion(star_stop, Problem.STOP).size == 1


def test_stop_without_seeds_needs_nothing():
    instance = StopContagionInstance.uniform(path(4), (), {3})
    assert solve(instance).size == 0


def test_instances_reject_bad_input(paw):
    with pytest.raises(InvalidInstance):
        MinContagionInstance.uniform(paw, ())
    with pytest.raises(InvalidInstance):
        MinContagionInstance.uniform(paw, {0}, slack=-1)
    with pytest.raises(InvalidInstance):
        MinContagionInstance(paw, frozenset({0}), ThresholdMap((0, 1, 2, 2)), 0)
    with pytest.raises(InvalidInstance):
        StopContagionInstance.uniform(paw, {0}, {0, 3})


def test_bruteforce_guard_and_problem_check(k4_min):
    big = MinContagionInstance.uniform(complete_graph(8), {0, 1})
    with pytest.raises(TooLarge):
        bruteforce_edge_deletion(big)
    with pytest.raises(InvalidInstance):
        bruteforce_edge_deletion(k4_min, Problem.STOP)


def test_dispatch(k4_stop, paw_min):
    assert solve(paw_min, "brute").method == "brute"
    with pytest.raises(InvalidInstance):
        solve(k4_stop, "random")
    with pytest.raises(InvalidInstance):
        solve(paw_min, "simplex")


def test_separating_deletions_use_lowest_neighbours():
    graph = complete_graph(4)
    thresholds = ThresholdMap.uniform(4, 2, {0, 1, 2})
    assert separating_deletions(graph, thresholds, frozenset({0, 1, 2})) == [(0, 3), (1, 3)]


def test_randomized_solution_on_paw(paw_min):
    solution = solve_randomized_fpt(paw_min, r_max=0, budget_hint=1, seed=4, extra_exponent=3)
    assert solution.size == 1
    assert solution.method == "random"
    assert not solution.optimal


def test_randomized_success_frequency_on_small_instances(paw_min, k4_min):
    assert fpt_success_frequency(paw_min, 1, batches=20, seed=1, budget_hint=1, r_max=0, extra_exponent=2) >= 2 / 3
    assert fpt_success_frequency(k4_min, 2, batches=20, seed=2, budget_hint=2, r_max=0, extra_exponent=2) >= 2 / 3


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda r: seeded_graphs(max_n=9, r=r)), st.data())
def test_subdivision_preserves_closures(data, draw):
    graph, seeds, thresholds = data
    instance = MinContagionInstance(graph, seeds, thresholds, 0)
    reduction = reduce_min_contagion(instance)
    deleted = draw.draw(st.lists(st.sampled_from(graph.edges()), unique=True)) if graph.m else []
    walls = [reduction.subdivision[edge] for edge in deleted]
    expected = closure(without_edges(graph, deleted), thresholds, seeds)
    reduced = percolate(reduction.graph, reduction.thresholds.immunize(walls)).closure
    assert reduced & frozenset(graph.vertices()) == expected
    assert verify_deletion(graph, seeds, thresholds, deleted) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_min_solver_matches_bruteforce(seed):
    instance = random_min_instance(substream(seed, "instance"))
    tw = solve_min_contagion_tw(instance)
    assert tw.size == bruteforce_edge_deletion(instance).size
    assert tw.additional_infected <= instance.slack


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_stop_solver_matches_bruteforce(seed):
    instance = random_stop_instance(substream(seed, "instance"))
    tw = solve_stop_contagion_tw(instance)
    assert tw.size == bruteforce_edge_deletion(instance).size
    assert tw.protected_infected == 0


def test_disconnected_protected_vertex():
    graph = from_edge_list(5, [(0, 2), (1, 2)])
    instance = StopContagionInstance.uniform(graph, {0, 1}, {2, 4})
    assert solve(instance).size == 1
    assert bruteforce_edge_deletion(StopContagionInstance.uniform(empty_graph(3), {0}, {2})).size == 0


def test_randomized_solver_returns_nothing_when_spread_fits_the_slack():
    graph = from_edge_list(14, [(s, v) for s in (0, 1) for v in range(2, 14)])
    instance = MinContagionInstance.uniform(graph, {0, 1}, r=2, slack=12)
    solution = solve_randomized_fpt(instance, batches=1, seed=0, extra_exponent=0)
    assert solution.size == 0
    assert solution.optimal
    assert solution.additional_infected == 12


def _small_min_instances(count: int, cost_ceiling: int):
    rng = substream(11, "instance")
    found = []
    while len(found) < count:
        instance = random_min_instance(rng, max_n=6, max_edges=9)
        optimum = bruteforce_edge_deletion(instance).size
        if instance.slack + optimum <= cost_ceiling:
            found.append((instance, optimum))
    return found


@pytest.mark.parametrize("index,case", list(enumerate(_small_min_instances(50, 4))))
def test_randomized_success_frequency(index, case):
    instance, optimum = case
    frequency = fpt_success_frequency(
        instance, optimum, batches=50, seed=index, budget_hint=optimum, r_max=instance.slack, extra_exponent=2
    )
    assert frequency >= 2 / 3
