from __future__ import annotations
import heapq
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable
import numpy as np
from .common import DEFAULT_CLAMP_EPS, DEFAULT_D_STAR, DEFAULT_P_STAR
from .common import LiftedMulticutException
from .graph import Graph, graph_distances
from .model import LmpInstance

logger = logging.getLogger(__name__)


class InvalidProbability(LiftedMulticutException):
    """A probability is outside its allowed range."""

    pass


class InvalidLiftingParams(LiftedMulticutException):
    """d*, p* or the clamp epsilon are out of range."""

    pass


class LiftingParams:
    """Parameters of probabilistic geodesic lifting with:

    - d_star: Maximum hop distance of lifted edges (>= 1)
    - p_star: Prior probability of a cut, in (0, 1)
    - clamp_eps: Probabilities are clamped to [eps, 1 - eps], 0 < eps < 0.5
    - restrict_to_ball: Search max-probability paths only among the nodes
      within hop distance d_star of the source
    """

    def __init__(
        self,
        d_star: int = DEFAULT_D_STAR,
        p_star: float = DEFAULT_P_STAR,
        clamp_eps: float = DEFAULT_CLAMP_EPS,
        restrict_to_ball: bool = True,
    ) -> None:
        if isinstance(d_star, bool) or int(d_star) != d_star or d_star < 1:
            raise InvalidLiftingParams(f"d* must be a positive integer, got {d_star}")
        if not 0.0 < p_star < 1.0:
            raise InvalidLiftingParams(f"p* must be in (0, 1), got {p_star}")
        if not 0.0 < clamp_eps < 0.5:
            raise InvalidLiftingParams(
                f"Clamp epsilon must be in (0, 0.5), got {clamp_eps}"
            )
        self.d_star = int(d_star)
        self.p_star = float(p_star)
        self.clamp_eps = float(clamp_eps)
        self.restrict_to_ball = restrict_to_ball

    def __repr__(self) -> str:
        return (
            f"LiftingParams(d_star={self.d_star}, p_star={self.p_star}, "
            f"clamp_eps={self.clamp_eps}, restrict_to_ball={self.restrict_to_ball})"
        )


class ProbabilisticGraph:
    """A graph with a cut probability per edge with:

    - graph: The graph G
    - cut_prob: float64 array, probability that the endpoints of each edge
      lie in distinct components
    """

    def __init__(self, graph: Graph, cut_prob: Iterable[float]) -> None:
        cut_prob = np.array(cut_prob, dtype=np.float64).reshape(-1)
        if cut_prob.size != graph.edge_count:
            raise InvalidProbability(
                f"Expected {graph.edge_count} edge probabilities, got {cut_prob.size}"
            )
        if not np.all((cut_prob >= 0.0) & (cut_prob <= 1.0)):
            raise InvalidProbability("Edge probabilities must be within [0, 1]")
        cut_prob.setflags(write=False)
        self.graph = graph
        self.cut_prob = cut_prob


def _check_cost_args(p_star: float, clamp_eps: float) -> None:
    if not 0.0 < p_star < 1.0:
        raise InvalidProbability(f"p* must be in (0, 1), got {p_star}")
    if not 0.0 < clamp_eps < 0.5:
        raise InvalidProbability(f"Clamp epsilon must be in (0, 0.5), got {clamp_eps}")


def cost_from_probability(
    p: float, p_star: float = DEFAULT_P_STAR, clamp_eps: float = DEFAULT_CLAMP_EPS
) -> float:
    """Cost of cutting an edge with cut probability p under the prior p*.

    c = ln((1 - p) / p) + ln((1 - p*) / p*), with p clamped to
    [eps, 1 - eps]. Positive costs favor joining, negative costs favor cutting.
    """
    _check_cost_args(p_star, clamp_eps)
    if not 0.0 <= p <= 1.0:
        raise InvalidProbability(f"Probability must be in [0, 1], got {p}")
    p = min(max(p, clamp_eps), 1.0 - clamp_eps)
    return math.log((1.0 - p) / p) + math.log((1.0 - p_star) / p_star)


def costs_from_probabilities(
    probs: np.ndarray,
    p_star: float = DEFAULT_P_STAR,
    clamp_eps: float = DEFAULT_CLAMP_EPS,
) -> np.ndarray:
    """Vectorized `cost_from_probability`"""
    _check_cost_args(p_star, clamp_eps)
    probs = np.asarray(probs, dtype=np.float64)
    if not np.all((probs >= 0.0) & (probs <= 1.0)):
        raise InvalidProbability("Probabilities must be within [0, 1]")
    p = np.clip(probs, clamp_eps, 1.0 - clamp_eps)
    return np.log((1.0 - p) / p) + math.log((1.0 - p_star) / p_star)


def _join_weights(pg: ProbabilisticGraph, clamp_eps: float) -> list[float]:
    # -ln of the join probability 1 - p_e
    p = np.clip(pg.cut_prob, clamp_eps, 1.0 - clamp_eps)
    return (-np.log1p(-p)).tolist()


def _lift_source(
    graph: Graph, weights: list[float], source: int, params: LiftingParams
) -> list[tuple[int, float]]:
    """Lifted partners w > source with their join probability q"""
    ball = graph_distances(graph, source, params.d_star)
    partners = sorted(w for w, d in ball.items() if d > 1 and w > source)
    if not partners:
        return []
    remaining = set(partners)
    settled = {}
    distances = {source: 0.0}
    queue = [(0.0, source)]
    while queue and remaining:
        d, v = heapq.heappop(queue)
        if v in settled:
            continue
        settled[v] = d
        remaining.discard(v)
        for w, edge in graph.adjacency[v]:
            if w in settled:
                continue
            if params.restrict_to_ball and w not in ball:
                continue
            candidate = d + weights[edge]
            if candidate < distances.get(w, math.inf):
                distances[w] = candidate
                heapq.heappush(queue, (candidate, w))
    return [(w, math.exp(-settled[w])) for w in partners]


def geodesic_lift(
    pg: ProbabilisticGraph, params: LiftingParams, jobs: int = 1
) -> LmpInstance:
    """Builds an LMP instance by probabilistic geodesic lifting.

    Every pair vw at hop distance 1 < d <= d* becomes a lifted edge. Its join
    probability is the largest product of edge join probabilities 1 - p_e
    over vw-paths (one Dijkstra search per source on -ln(1 - p_e)). All
    costs follow `cost_from_probability` with the prior p*.
    """
    graph = pg.graph
    weights = _join_weights(pg, params.clamp_eps)

    def lift(source):
        return _lift_source(graph, weights, source, params)

    sources = range(graph.node_count)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            per_source = list(executor.map(lift, sources))
    else:
        per_source = [lift(v) for v in sources]

    lifted_edges = []
    join_probs = []
    for v, partners in zip(sources, per_source):
        for w, q in partners:
            lifted_edges.append((v, w))
            join_probs.append(q)
    lifted_cut_probs = np.clip(1.0 - np.array(join_probs, dtype=np.float64), 0.0, 1.0)
    costs = np.concatenate(
        [
            costs_from_probabilities(pg.cut_prob, params.p_star, params.clamp_eps),
            costs_from_probabilities(lifted_cut_probs, params.p_star, params.clamp_eps),
        ]
    )
    logger.info(
        "Lifted %d nodes, %d edges to %d lifted edges (%r)",
        graph.node_count,
        graph.edge_count,
        len(lifted_edges),
        params,
    )
    return LmpInstance(graph, lifted_edges, costs)


def lifted_join_probabilities(
    pg: ProbabilisticGraph, params: LiftingParams
) -> dict[tuple[int, int], float]:
    """Join probability q_f of every lifted edge, keyed by (u, v)"""
    weights = _join_weights(pg, params.clamp_eps)
    return {
        (v, w): q
        for v in range(pg.graph.node_count)
        for w, q in _lift_source(pg.graph, weights, v, params)
    }
