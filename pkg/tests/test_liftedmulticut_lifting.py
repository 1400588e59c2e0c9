import math
import random
import networkx as nx
import numpy as np
import pytest
from liftedmulticut import graph, lifting


def sample_path_pgraph() -> lifting.ProbabilisticGraph:
    return lifting.ProbabilisticGraph(
        graph.build_graph(3, [(0, 1), (1, 2)]), [0.2, 0.1]
    )


def random_pgraph(
    rng: random.Random, n: int, density: float = 0.2
) -> lifting.ProbabilisticGraph:
    edges = [(i, rng.randrange(i)) for i in range(1, n)]
    for u in range(n):
        for v in range(u + 1, n):
            if (v, u) not in edges and rng.random() < density:
                edges.append((u, v))
    g = graph.build_graph(n, edges)
    return lifting.ProbabilisticGraph(g, [rng.random() for _ in g.edges])


def best_join_probabilities(pg: lifting.ProbabilisticGraph, u: int) -> dict:
    """Maximum over all simple paths from u of the product of join probabilities"""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(pg.graph.node_count))
    for (a, b), p in zip(pg.graph.edges, pg.cut_prob.tolist()):
        nxg.add_edge(a, b, q=min(max(1.0 - p, 1e-6), 1.0 - 1e-6))
    best = {}
    targets = set(nxg.nodes) - {u}
    for path in nx.all_simple_paths(nxg, u, targets):
        q = math.prod(nxg.edges[a, b]["q"] for a, b in zip(path, path[1:]))
        best[path[-1]] = max(best.get(path[-1], 0.0), q)
    return best


def test_cost_from_probability():
    assert lifting.cost_from_probability(0.5, 0.5) == 0.0
    assert lifting.cost_from_probability(0.9, 0.5) == pytest.approx(-math.log(9))
    assert lifting.cost_from_probability(0.5, 0.1) == pytest.approx(math.log(9))
    assert lifting.cost_from_probability(0.9, 0.5) == pytest.approx(-2.197225, abs=1e-6)


def test_cost_from_probability_clamps():
    bound = math.log((1 - 1e-6) / 1e-6)
    assert lifting.cost_from_probability(0.0) == pytest.approx(bound)
    assert lifting.cost_from_probability(1.0) == pytest.approx(-bound)
    assert math.isfinite(lifting.cost_from_probability(1.0, 0.5, 1e-3))


def test_cost_from_probability_rejects_bad_input():
    with pytest.raises(lifting.InvalidProbability):
        lifting.cost_from_probability(1.5)
    with pytest.raises(lifting.InvalidProbability):
        lifting.cost_from_probability(0.5, p_star=0.0)
    with pytest.raises(lifting.InvalidProbability):
        lifting.cost_from_probability(0.5, p_star=1.0)


def test_costs_from_probabilities_matches_scalar_rule():
    probs = np.array([0.0, 0.1, 0.5, 0.73, 1.0])
    costs = lifting.costs_from_probabilities(probs, 0.3)
    for p, c in zip(probs.tolist(), costs.tolist()):
        assert c == pytest.approx(lifting.cost_from_probability(p, 0.3))


def test_lifting_params_validation():
    with pytest.raises(lifting.InvalidLiftingParams):
        lifting.LiftingParams(d_star=0)
    with pytest.raises(lifting.InvalidLiftingParams):
        lifting.LiftingParams(p_star=1.0)
    with pytest.raises(lifting.InvalidLiftingParams):
        lifting.LiftingParams(clamp_eps=0.5)


def test_probabilistic_graph_validation():
    g = graph.build_graph(3, [(0, 1), (1, 2)])
    with pytest.raises(lifting.InvalidProbability):
        lifting.ProbabilisticGraph(g, [0.5])
    with pytest.raises(lifting.InvalidProbability):
        lifting.ProbabilisticGraph(g, [0.5, 1.2])


def test_geodesic_lift_path():
    pg = sample_path_pgraph()
    inst = lifting.geodesic_lift(pg, lifting.LiftingParams(d_star=2))
    assert inst.lifted_edges == [(0, 2)]
    q = lifting.lifted_join_probabilities(pg, lifting.LiftingParams(d_star=2))
    assert q[(0, 2)] == pytest.approx(0.72)
    assert inst.costs[2] == pytest.approx(lifting.cost_from_probability(0.28))
    assert inst.costs[0] == pytest.approx(lifting.cost_from_probability(0.2))


def test_geodesic_lift_d_star_one_gives_multicut_instance():
    inst = lifting.geodesic_lift(sample_path_pgraph(), lifting.LiftingParams(d_star=1))
    assert inst.lifted_edges == []
    assert inst.edge_count == 2


def test_geodesic_lift_distance_filter():
    g = graph.build_graph(4, [(0, 1), (1, 2), (2, 3)])
    pg = lifting.ProbabilisticGraph(g, [0.1, 0.1, 0.1])
    inst = lifting.geodesic_lift(pg, lifting.LiftingParams(d_star=2))
    assert (0, 3) not in inst.lifted_edges
    assert inst.lifted_edges == [(0, 2), (1, 3)]


def test_geodesic_lift_lifted_edges_are_exactly_the_pairs_within_d_star():
    rng = random.Random(3)
    for _ in range(20):
        pg = random_pgraph(rng, rng.randint(2, 15))
        d_star = rng.randint(1, 4)
        inst = lifting.geodesic_lift(pg, lifting.LiftingParams(d_star=d_star))
        expected = sorted(
            (u, v)
            for u in range(pg.graph.node_count)
            for v, d in graph.graph_distances(pg.graph, u, d_star).items()
            if v > u and d > 1
        )
        assert sorted(inst.lifted_edges) == expected
        assert not set(inst.lifted_edges) & set(pg.graph.edges)


def test_geodesic_lift_agrees_with_path_enumeration():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(2, 12)
        pg = random_pgraph(rng, n, density=0.1)
        params = lifting.LiftingParams(d_star=max(n - 1, 1), restrict_to_ball=False)
        q = lifting.lifted_join_probabilities(pg, params)
        for u in range(n):
            best = best_join_probabilities(pg, u)
            for v in range(u + 1, n):
                if (u, v) in q:
                    assert q[(u, v)] == pytest.approx(best[v], rel=1e-9)


def test_geodesic_lift_in_ball_never_beats_whole_graph():
    rng = random.Random(5)
    for _ in range(20):
        pg = random_pgraph(rng, rng.randint(3, 12))
        ball = lifting.lifted_join_probabilities(pg, lifting.LiftingParams(d_star=2))
        whole = lifting.lifted_join_probabilities(
            pg, lifting.LiftingParams(d_star=2, restrict_to_ball=False)
        )
        assert ball.keys() == whole.keys()
        for pair, q in ball.items():
            assert q <= whole[pair] * (1 + 1e-12)


def test_geodesic_lift_lower_edge_probabilities_raise_costs():
    rng = random.Random(9)
    for _ in range(20):
        pg = random_pgraph(rng, rng.randint(3, 10))
        lower = lifting.ProbabilisticGraph(pg.graph, pg.cut_prob * 0.5)
        params = lifting.LiftingParams(d_star=3)
        before = lifting.geodesic_lift(pg, params)
        after = lifting.geodesic_lift(lower, params)
        assert after.lifted_edges == before.lifted_edges
        assert np.all(after.costs >= before.costs - 1e-12)


def test_geodesic_lift_raising_one_probability_never_raises_join_probabilities():
    rng = random.Random(9)
    for _ in range(50):
        pg = random_pgraph(rng, rng.randint(3, 10))
        params = lifting.LiftingParams(d_star=3)
        before = lifting.lifted_join_probabilities(pg, params)
        for e, p in enumerate(pg.cut_prob.tolist()):
            raised = pg.cut_prob.copy()
            raised[e] = p + (1.0 - p) * rng.random()
            after = lifting.lifted_join_probabilities(
                lifting.ProbabilisticGraph(pg.graph, raised), params
            )
            assert after.keys() == before.keys()
            for pair, q in after.items():
                assert q <= before[pair] * (1 + 1e-12)


def test_geodesic_lift_edge_costs_vanish_at_even_prior():
    rng = random.Random(4)
    pg = random_pgraph(rng, 12)
    uniform = lifting.ProbabilisticGraph(pg.graph, [0.5] * pg.graph.edge_count)
    inst = lifting.geodesic_lift(uniform, lifting.LiftingParams(d_star=3, p_star=0.5))
    assert np.all(inst.costs[: inst.edge_count] == 0.0)


@pytest.mark.parametrize("p_star", [0.1, 0.3, 0.55, 0.9])
def test_cost_vanishes_at_complement_of_prior(p_star):
    assert lifting.cost_from_probability(1.0 - p_star, p_star) == pytest.approx(
        0.0, abs=1e-12
    )
    assert lifting.cost_from_probability(p_star, p_star) != pytest.approx(0.0)


def test_geodesic_lift_with_threads_is_identical():
    rng = random.Random(1)
    pg = random_pgraph(rng, 30)
    params = lifting.LiftingParams(d_star=3)
    threaded = lifting.geodesic_lift(pg, params, jobs=4)
    assert threaded == lifting.geodesic_lift(pg, params)
