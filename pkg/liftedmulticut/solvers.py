from __future__ import annotations
import math
from typing import Callable, Optional
from .common import LiftedMulticutException
from .graph import Partition, PartitionMismatch, UnionFind
from .model import LmpInstance

# Step kinds:
JOIN = "join"
MOVE = "move"
NEW_COMPONENT = "new_component"


class UnknownAlgorithm(LiftedMulticutException):
    """No solver is registered under the requested name."""

    pass


class TraceStep:
    """One executed transformation with:

    - step: Position in the trace, starting at 0
    - kind: "join", "move" or "new_component"
    - delta: Change of the objective value caused by the step
    """

    def __init__(self, step: int, kind: str, delta: float) -> None:
        self.step = step
        self.kind = kind
        self.delta = delta

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, TraceStep):
            return (self.step, self.kind, self.delta) == (__o.step, __o.kind, __o.delta)
        return False

    def __repr__(self) -> str:
        return f"TraceStep({self.step}, {self.kind}, {self.delta})"


class SolveReport:
    """The outcome of a solver run with:

    - algorithm: Name of the solver
    - partition: The final decomposition of G
    - objective: Objective value of the lifted multicut of `partition`
    - initial_objective: Objective value the solver started from
    - trace: List of `TraceStep`s, their deltas add up to
      objective - initial_objective
    - iterations: Contractions (gaec), outer iterations (klj) or
      decompositions enumerated (exact)
    - duration: Wall-clock seconds
    - hit_iteration_cap: True if klj stopped at its iteration cap
    - max_chi_error: Largest join cost recomputation error (gaec, instrumented)
    """

    def __init__(
        self,
        algorithm: str,
        partition: Partition,
        objective: float,
        initial_objective: float,
        trace: list[TraceStep],
        iterations: int,
        duration: float,
        hit_iteration_cap: bool = False,
        max_chi_error: Optional[float] = None,
    ) -> None:
        self.algorithm = algorithm
        self.partition = partition
        self.objective = objective
        self.initial_objective = initial_objective
        self.trace = trace
        self.iterations = iterations
        self.duration = duration
        self.hit_iteration_cap = hit_iteration_cap
        self.max_chi_error = max_chi_error

    @property
    def trace_delta(self) -> float:
        return math.fsum(step.delta for step in self.trace)

    def __str__(self) -> str:
        return (
            f"{self.algorithm}: objective={self.objective} "
            f"blocks={self.partition.block_count} iterations={self.iterations} "
            f"seconds={self.duration:.3f}"
        )

    def __repr__(self) -> str:
        return (
            f"SolveReport({self.algorithm}, {self.partition!r}, {self.objective}, "
            f"iterations={self.iterations})"
        )


def canonicalize(inst: LmpInstance, p: Partition) -> Partition:
    """Splits every block of p into its connected pieces in G.

    Only lifted edges can straddle two pieces of the same block, so the
    objective changes by the sum of their costs.
    """
    if len(p) != inst.node_count or not p.is_dense:
        raise PartitionMismatch(
            f"Partition of {len(p)} nodes used with {inst.node_count} nodes"
        )
    forest = UnionFind(inst.node_count)
    block_of = p.block_of
    for u, v in inst.graph.edges:
        if block_of[u] == block_of[v]:
            forest.union(u, v)
    return forest.partition()


_solvers = {}


def solver(name: str):
    """
    Decorator to register a solver function under a name.

    Registered functions take (inst, init=None, **options) and return a
    `SolveReport`.
    """

    def decorator(function: Callable) -> Callable:
        _solvers[name] = function
        return function

    return decorator


def algorithms() -> list[str]:
    return sorted(_solvers)


def solve(
    algorithm: str, inst: LmpInstance, init: Optional[Partition] = None, **options
) -> SolveReport:
    """Runs the solver registered as `algorithm`"""
    if algorithm not in _solvers:
        raise UnknownAlgorithm(
            f"Unknown algorithm {algorithm!r}, expected one of {algorithms()}"
        )
    return _solvers[algorithm](inst, init=init, **options)
