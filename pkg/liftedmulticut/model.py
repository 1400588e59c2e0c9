from __future__ import annotations
import math
from typing import Iterable, Optional, Sequence
import numpy as np
from .common import LiftedMulticutException
from .graph import (
    Graph,
    Partition,
    PartitionMismatch,
    UnionFind,
    is_decomposition,
    normalized_edges,
)


class InvalidInstance(LiftedMulticutException):
    """The lifted edges or costs do not define a valid instance."""

    pass


class LiftedEdgeInGraph(InvalidInstance):
    """A lifted edge connects two nodes which are already neighbors in G."""

    pass


class NonFiniteCost(InvalidInstance):
    """A cost is NaN or infinite."""

    pass


class LabelingLengthMismatch(LiftedMulticutException):
    """The labeling does not have one label per edge of E and F."""

    pass


class InvalidLabeling(LiftedMulticutException):
    """A label is not 0 or 1."""

    pass


class NotADecomposition(LiftedMulticutException):
    """Some block of a partition does not induce a connected subgraph of G."""

    pass


# Inequality families witnessed by infeasible labelings:
CYCLE = "cycle"
PATH = "path"
CUT = "cut"
VIOLATION_KINDS = [CYCLE, PATH, CUT]


class LmpInstance:
    """An instance of the minimum cost lifted multicut problem with:

    - graph: The graph G = (V, E) whose decompositions are the feasible solutions
    - lifted_edges: The list of lifted edges F, (u, v) pairs with u < v, not in E
    - costs: float64 array with one cost per edge of E followed by one per edge of F

    Edges of E and F share a global index: the edges of E keep their graph
    edge ids, and lifted edge i has index |E| + i.
    """

    def __init__(
        self,
        graph: Graph,
        lifted_edges: Iterable[tuple[int, int]],
        costs: Iterable[float],
    ) -> None:
        self.graph = graph
        taken = set(graph.edges)
        lifted = list(lifted_edges)
        for u, v in lifted:
            if (min(u, v), max(u, v)) in taken:
                raise LiftedEdgeInGraph(f"Lifted edge ({u}, {v}) is an edge of G")
        self.lifted_edges = normalized_edges(graph.node_count, lifted, taken)
        costs = np.array(costs, dtype=np.float64)
        if costs.shape != (self.edge_count,):
            raise InvalidInstance(
                f"Expected {self.edge_count} costs, got {costs.size}"
            )
        if not np.all(np.isfinite(costs)):
            bad = int(np.flatnonzero(~np.isfinite(costs))[0])
            raise NonFiniteCost(f"Cost of edge {bad} is {costs[bad]}")
        costs.setflags(write=False)
        self.costs = costs
        self._extended_graph = None

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def edge_count(self) -> int:
        """|E| + |F|"""
        return self.graph.edge_count + len(self.lifted_edges)

    @property
    def all_edges(self) -> list[tuple[int, int]]:
        """All edges of E and F, in global index order"""
        return self.graph.edges + self.lifted_edges

    def is_lifted(self, edge: int) -> bool:
        return edge >= self.graph.edge_count

    @property
    def extended_graph(self) -> Graph:
        """The graph G' = (V, E ∪ F); its edge ids are the global edge indices"""
        if self._extended_graph is None:
            self._extended_graph = Graph(self.node_count, self.all_edges)
        return self._extended_graph

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        edges = np.array(self.all_edges, dtype=np.int64).reshape(-1, 2)
        return edges[:, 0], edges[:, 1]

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, LmpInstance):
            return (
                self.graph == __o.graph
                and self.lifted_edges == __o.lifted_edges
                and np.array_equal(self.costs, __o.costs)
            )
        return False

    def __hash__(self) -> int:
        return hash((self.graph, tuple(self.lifted_edges), self.costs.tobytes()))

    def __repr__(self) -> str:
        return (
            f"LmpInstance(nodes={self.node_count}, edges={self.graph.edge_count}, "
            f"lifted_edges={len(self.lifted_edges)})"
        )


class EdgeLabeling:
    """A 01 label per edge of E ∪ F (1 = cut), in global edge order with:

    - labels: uint8 array
    """

    def __init__(self, labels: Iterable[int]) -> None:
        if not isinstance(labels, np.ndarray):
            labels = list(labels)
        labels = np.array(labels)
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise InvalidLabeling("Labels must be 0 or 1")
        self.labels = labels.astype(np.uint8).reshape(-1)
        self.labels.setflags(write=False)

    def __len__(self) -> int:
        return self.labels.size

    def __getitem__(self, edge: int) -> int:
        return int(self.labels[edge])

    def __iter__(self):
        return (int(label) for label in self.labels)

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, EdgeLabeling):
            return np.array_equal(self.labels, __o.labels)
        return False

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:
        return f"EdgeLabeling({self.labels.tolist()})"


class Violation:
    """A violated inequality family with:

    - kind: One of "cycle", "path" or "cut"
    - edge: The global index of the witness edge
    - endpoints: The (u, v) endpoints of the witness edge
    """

    def __init__(self, kind: str, edge: int, endpoints: tuple[int, int]) -> None:
        if kind not in VIOLATION_KINDS:
            raise LiftedMulticutException(
                f"Unknown violation kind {kind!r}, expected {VIOLATION_KINDS}"
            )
        self.kind = kind
        self.edge = edge
        self.endpoints = endpoints

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, Violation):
            return (self.kind, self.edge, self.endpoints) == (
                __o.kind,
                __o.edge,
                __o.endpoints,
            )
        return False

    def __hash__(self) -> int:
        return hash((self.kind, self.edge, self.endpoints))

    def __str__(self) -> str:
        u, v = self.endpoints
        return f"{self.kind} violation on edge {self.edge} ({u}, {v})"

    def __repr__(self) -> str:
        return f"Violation({self.kind}, {self.edge}, {self.endpoints})"


class FeasibilityReport:
    """Result of checking a labeling with:

    - violations: At most one `Violation` per family, ordered by edge index
    """

    def __init__(self, violations: list[Violation]) -> None:
        self.violations = violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def first(self, kind: str) -> Optional[Violation]:
        return next((x for x in self.violations if x.kind == kind), None)

    def __str__(self) -> str:
        if self.ok:
            return "feasible"
        return "\n".join(str(x) for x in self.violations)

    def __repr__(self) -> str:
        return f"FeasibilityReport({self.violations})"


def _check_length(inst: LmpInstance, y: EdgeLabeling) -> None:
    if len(y) != inst.edge_count:
        raise LabelingLengthMismatch(
            f"Labeling has {len(y)} labels, instance has {inst.edge_count} edges"
        )


def objective(inst: LmpInstance, y: EdgeLabeling) -> float:
    """Sum of the costs of all edges labeled 1"""
    _check_length(inst, y)
    return math.fsum(inst.costs[y.labels == 1])


def labels_for_blocks(inst: LmpInstance, block_of: Sequence[int]) -> np.ndarray:
    """01 array, 1 where the endpoints are in distinct blocks"""
    blocks = np.asarray(block_of, dtype=np.int64)
    if inst.edge_count == 0:
        return np.zeros(0, dtype=np.uint8)
    u, v = inst.endpoint_arrays()
    return (blocks[u] != blocks[v]).astype(np.uint8)


def partition_objective(inst: LmpInstance, p: Partition) -> float:
    """Objective of the lifted multicut of p, without the decomposition check"""
    return math.fsum(inst.costs[labels_for_blocks(inst, p.block_of) == 1])


def labeling_from_partition(inst: LmpInstance, p: Partition) -> EdgeLabeling:
    """The lifted multicut of a decomposition of G"""
    if not is_decomposition(inst.graph, p):
        raise NotADecomposition(f"Partition {p!r} has a disconnected block")
    return EdgeLabeling(labels_for_blocks(inst, p.block_of))


def partition_from_labeling(inst: LmpInstance, y: EdgeLabeling) -> Partition:
    """Components of G after removing the edges of E labeled 1"""
    _check_length(inst, y)
    forest = UnionFind(inst.node_count)
    for edge, (u, v) in enumerate(inst.graph.edges):
        if y.labels[edge] == 0:
            forest.union(u, v)
    return forest.partition()


def check_feasibility(inst: LmpInstance, y: EdgeLabeling) -> FeasibilityReport:
    """Checks whether y is a lifted multicut.

    Equivalent to the cycle, path and cut inequalities: y is feasible iff
    for every edge vw of E ∪ F, y_vw = 0 exactly when v and w are connected
    by edges of E labeled 0. One witness per violated family is reported,
    the one with the smallest edge index.
    """
    _check_length(inst, y)
    components = partition_from_labeling(inst, y)
    joined = 1 - labels_for_blocks(inst, components.block_of)
    violations = {}
    edge_count = inst.graph.edge_count
    mismatched = np.flatnonzero(joined == y.labels)
    for edge in mismatched.tolist():
        if edge < edge_count:
            kind = CYCLE
        elif y.labels[edge] == 1:
            kind = PATH
        else:
            kind = CUT
        if kind not in violations:
            violations[kind] = Violation(kind, edge, inst.all_edges[edge])
    return FeasibilityReport(sorted(violations.values(), key=lambda x: x.edge))
