from __future__ import annotations
import heapq
import logging
import math
import time
from typing import Optional
from .common import LiftedMulticutException
from .graph import Partition, UnionFind
from .model import LmpInstance, partition_objective
from .solvers import JOIN, SolveReport, TraceStep, solver

logger = logging.getLogger(__name__)


class ContractionState:
    """Working state of greedy additive edge contraction with:

    - forest: Disjoint-set forest over the nodes of G
    - neighbors: Per component id, the set of components adjacent in G (the
      component graph)
    - chi: Per component id, a dict mapping every component linked by an
      edge of E ∪ F to the join cost, the sum of costs across the boundary
    - alive: Whether a component id is still in use

    A component keeps the id of the component whose `chi` dict was larger
    when it was formed. The priority queue holds (-chi, a, b, version) for
    adjacent pairs a < b; entries whose version is not current are stale.
    """

    def __init__(self, inst: LmpInstance) -> None:
        n = inst.node_count
        self.inst = inst
        self.forest = UnionFind(n)
        self.neighbors = [set() for _ in range(n)]
        self.chi = [{} for _ in range(n)]
        self.alive = [True] * n
        self._versions = {}
        self._queue = []
        for (u, v), cost in zip(inst.all_edges, inst.costs.tolist()):
            self.chi[u][v] = cost
            self.chi[v][u] = cost
        for u, v in inst.graph.edges:
            self.neighbors[u].add(v)
            self.neighbors[v].add(u)
            self._push(u, v, self.chi[u][v])

    def _push(self, a: int, b: int, chi: float) -> None:
        if a > b:
            a, b = b, a
        version = self._versions.get((a, b), 0) + 1
        self._versions[(a, b)] = version
        heapq.heappush(self._queue, (-chi, a, b, version))

    def pop_best(self) -> Optional[tuple[int, int, float]]:
        """Returns the adjacent pair with the largest join cost.

        Ties are broken by the smallest (a, b). Returns None if no adjacent
        pairs are left.
        """
        while self._queue:
            neg_chi, a, b, version = heapq.heappop(self._queue)
            if not (self.alive[a] and self.alive[b]):
                continue
            if self._versions.get((a, b)) != version:
                continue
            return (a, b, -neg_chi)
        return None

    def contract(self, a: int, b: int) -> int:
        """Joins components a and b, returns the id of the joined component"""
        if len(self.chi[a]) >= len(self.chi[b]):
            keep, drop = a, b
        else:
            keep, drop = b, a
        self.forest.union(keep, drop)
        self.alive[drop] = False
        chi_keep = self.chi[keep]
        chi_drop = self.chi[drop]
        del chi_keep[drop]
        del chi_drop[keep]
        for other, cost in chi_drop.items():
            chi_other = self.chi[other]
            del chi_other[drop]
            joined = chi_keep.get(other, 0.0) + cost
            chi_keep[other] = joined
            chi_other[keep] = joined
        neighbors_keep = self.neighbors[keep]
        neighbors_keep.discard(drop)
        for other in self.neighbors[drop]:
            if other == keep:
                continue
            neighbors_other = self.neighbors[other]
            neighbors_other.discard(drop)
            neighbors_other.add(keep)
            neighbors_keep.add(other)
        for other in chi_drop:
            if other in neighbors_keep:
                self._push(keep, other, chi_keep[other])
        chi_drop.clear()
        self.neighbors[drop].clear()
        return keep

    def boundary_cost(self, a: int, b: int) -> float:
        """Recomputes the join cost of a and b from the instance costs"""
        root_a = self.forest.find(a)
        root_b = self.forest.find(b)
        find = self.forest.find
        return math.fsum(
            cost
            for (u, v), cost in zip(self.inst.all_edges, self.inst.costs.tolist())
            if {find(u), find(v)} == {root_a, root_b}
        )

    def partition(self) -> Partition:
        return self.forest.partition()


@solver("gaec")
def gaec(
    inst: LmpInstance, init: Optional[Partition] = None, instrument: bool = False
) -> SolveReport:
    """Greedy additive edge contraction.

    Starts from single nodes and repeatedly joins the pair of neighboring
    components with the largest join cost, as long as that cost is
    positive. With `instrument`, every join cost is checked against a
    recomputation and the largest error is reported.
    """
    if init is not None:
        raise LiftedMulticutException("gaec always starts from single nodes")
    started = time.perf_counter()
    logger.info(
        "gaec: %d nodes, %d edges, %d lifted edges",
        inst.node_count,
        inst.graph.edge_count,
        len(inst.lifted_edges),
    )
    state = ContractionState(inst)
    initial_objective = math.fsum(inst.costs.tolist())
    trace = []
    max_chi_error = 0.0 if instrument else None
    debug = logger.isEnabledFor(logging.DEBUG)
    while True:
        best = state.pop_best()
        if best is None:
            break
        a, b, chi = best
        # Zero-cost joins do not strictly decrease the objective.
        if chi <= 0.0:
            break
        if instrument:
            max_chi_error = max(max_chi_error, abs(chi - state.boundary_cost(a, b)))
        state.contract(a, b)
        trace.append(TraceStep(len(trace), JOIN, -chi))
        if debug:
            logger.debug("gaec: joined %d and %d, chi=%r", a, b, chi)
    partition = state.partition()
    report = SolveReport(
        algorithm="gaec",
        partition=partition,
        objective=partition_objective(inst, partition),
        initial_objective=initial_objective,
        trace=trace,
        iterations=len(trace),
        duration=time.perf_counter() - started,
        max_chi_error=max_chi_error,
    )
    logger.info("%s", report)
    return report
