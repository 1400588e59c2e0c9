from __future__ import annotations
import logging
import math
import time
from collections import deque
from typing import Optional
from .common import DEFAULT_KLJ_MAX_ITERATIONS, ENV_KLJ_MAX_ITERATIONS
from .common import LiftedMulticutException, int_setting
from .gaec import gaec
from .graph import Partition, PartitionMismatch, is_decomposition
from .model import LmpInstance, NotADecomposition, partition_objective
from .solvers import JOIN, MOVE, NEW_COMPONENT, SolveReport, TraceStep
from .solvers import canonicalize, solver

logger = logging.getLogger(__name__)


class KljState:
    """A decomposition of G being improved by local search, with:

    - block_of: Component label per node
    - members: Dict mapping each component label to its set of nodes
    - objective: Objective value of the current decomposition
    - trace: Executed transformations, as `TraceStep`s
    - changed: Labels of components whose nodes changed since the last reset

    Labels are not dense: components created by a transformation get fresh
    labels, and labels of emptied components are dropped.
    """

    def __init__(self, inst: LmpInstance, init: Partition) -> None:
        if len(init) != inst.node_count or not init.is_dense:
            raise PartitionMismatch(
                f"Partition of {len(init)} nodes used with {inst.node_count} nodes"
            )
        if not is_decomposition(inst.graph, init):
            raise NotADecomposition(
                f"Initial partition {init!r} is not a decomposition"
            )
        self.inst = inst
        costs = inst.costs.tolist()
        self.neighbors = [
            [w for (w, _) in adjacent] for adjacent in inst.graph.adjacency
        ]
        self.weighted_neighbors = [
            [(w, costs[edge]) for (w, edge) in adjacent]
            for adjacent in inst.extended_graph.adjacency
        ]
        self.block_of = list(init.block_of)
        self.members = {}
        for v, label in enumerate(self.block_of):
            self.members.setdefault(label, set()).add(v)
        self.next_label = init.block_count
        self.objective = partition_objective(inst, init)
        self.trace = []
        self.changed = set()

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """Pairs (a, b), a < b, of components joined by an edge of G, ascending"""
        block_of = self.block_of
        pairs = set()
        for u, v in self.inst.graph.edges:
            a, b = block_of[u], block_of[v]
            if a != b:
                pairs.add((a, b) if a < b else (b, a))
        return sorted(pairs)

    def join_cost(self, a: int, b: int) -> float:
        """Sum of the costs of all edges of E ∪ F between components a and b"""
        block_of = self.block_of
        return math.fsum(
            cost
            for v in self.members[a]
            for (w, cost) in self.weighted_neighbors[v]
            if block_of[w] == b
        )

    def partition(self) -> Partition:
        return Partition(self.block_of)

    def _fresh_label(self) -> int:
        label = self.next_label
        self.next_label += 1
        return label

    def split_pieces(self, nodes: set, side: dict) -> list[list[int]]:
        """Connected pieces of each side, ordered by side then smallest node"""
        piece_of = {}
        pieces = []
        for start in sorted(nodes):
            if start in piece_of:
                continue
            piece = [start]
            piece_of[start] = len(pieces)
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w in self.neighbors[v]:
                    if w in nodes and w not in piece_of and side[w] == side[start]:
                        piece_of[w] = len(pieces)
                        piece.append(w)
                        queue.append(w)
            pieces.append(piece)
        pieces.sort(key=lambda piece: (side[piece[0]], piece[0]))
        return pieces

    def exact_delta(self, nodes: set, pieces: list[list[int]]) -> float:
        """Objective change if `nodes` were relabeled into `pieces`"""
        piece_of = {v: i for i, piece in enumerate(pieces) for v in piece}
        block_of = self.block_of
        terms = []
        for v in nodes:
            for w, cost in self.weighted_neighbors[v]:
                if w > v and w in piece_of:
                    now = piece_of[v] != piece_of[w]
                    before = block_of[v] != block_of[w]
                    if now != before:
                        terms.append(cost if now else -cost)
        return math.fsum(terms)

    def commit(
        self,
        a: int,
        b: Optional[int],
        pieces: list[list[int]],
        side: dict,
        kind: str,
        delta: float,
    ) -> None:
        """Relabels the nodes of a and b by pieces and records the step"""
        keep = {0: a, 1: b}
        for label in (a, b):
            if label is not None:
                del self.members[label]
        for piece in pieces:
            s = side[piece[0]]
            label = keep[s] if keep[s] is not None else self._fresh_label()
            keep[s] = None
            self.members[label] = set(piece)
            for v in piece:
                self.block_of[v] = label
            self.changed.add(label)
        self.changed.add(a)
        if b is not None:
            self.changed.add(b)
        self.objective += delta
        self.trace.append(TraceStep(len(self.trace), kind, delta))


def update_bipartition(state: KljState, a: int, b: Optional[int] = None) -> bool:
    """Tries to improve the decomposition by transforming components a and b.

    Builds a greedy sequence of node moves between a and b (or, with b
    None, from a into a new component), each node moved at most once, and
    takes the prefix with the best cumulative gain. With b given, a complete
    join of a and b is the alternative. Gains of moves that disconnect a
    component are estimates; the chosen option is carried out only if its
    exact objective change, with disconnected parts split off, is negative.

    Returns True if the decomposition changed.
    """
    side_a = state.members[a]
    side_b = state.members[b] if b is not None else set()
    nodes = side_a | side_b
    side = dict.fromkeys(side_a, 0)
    side.update(dict.fromkeys(side_b, 1))
    weighted = state.weighted_neighbors
    neighbors = state.neighbors

    inside = {}
    across = {}
    for v in nodes:
        same = other = 0.0
        sv = side[v]
        for w, cost in weighted[v]:
            sw = side.get(w)
            if sw is None:
                continue
            if sw == sv:
                same += cost
            else:
                other += cost
        inside[v] = same
        across[v] = other
    outside_neighbors = {
        v: sum(1 for w in neighbors[v] if side.get(w, side[v]) != side[v])
        for v in nodes
    }
    if b is not None:
        candidates = {v for v in nodes if outside_neighbors[v] > 0}
        if not candidates:
            return False
    else:
        candidates = set(side_a)

    moved = []
    moved_set = set()
    cumulative = 0.0
    best_cumulative = 0.0
    best_k = 0
    while candidates:
        v = min(candidates, key=lambda u: (inside[u] - across[u], u))
        delta = inside[v] - across[v]
        candidates.discard(v)
        moved_set.add(v)
        old = side[v]
        for w, cost in weighted[v]:
            sw = side.get(w)
            if sw is None:
                continue
            if sw == old:
                inside[w] -= cost
                across[w] += cost
            else:
                inside[w] += cost
                across[w] -= cost
        inside[v], across[v] = across[v], inside[v]
        side[v] = 1 - old
        left_behind = 0
        for w in neighbors[v]:
            sw = side.get(w)
            if sw is None:
                continue
            if sw == old:
                left_behind += 1
                outside_neighbors[w] += 1
                if w not in moved_set:
                    candidates.add(w)
            else:
                outside_neighbors[w] -= 1
                if outside_neighbors[w] == 0:
                    candidates.discard(w)
        outside_neighbors[v] = left_behind
        if b is None and not moved:
            candidates = {
                w for w in side_a if w not in moved_set and outside_neighbors[w] > 0
            }
        moved.append(v)
        cumulative += delta
        if cumulative < best_cumulative:
            best_cumulative = cumulative
            best_k = len(moved)

    options = []
    if best_k > 0:
        new_side = dict.fromkeys(side_a, 0)
        new_side.update(dict.fromkeys(side_b, 1))
        for v in moved[:best_k]:
            new_side[v] = 1 - new_side[v]
        pieces = state.split_pieces(nodes, new_side)
        kind = MOVE if b is not None else NEW_COMPONENT
        options.append((state.exact_delta(nodes, pieces), kind, pieces, new_side))
    if b is not None:
        joined = [sorted(nodes)]
        options.append(
            (-state.join_cost(a, b), JOIN, joined, dict.fromkeys(nodes, 0))
        )
    if not options:
        return False
    delta, kind, pieces, new_side = min(options, key=lambda option: option[0])
    if not delta < 0.0:
        return False
    state.commit(a, b, pieces, new_side, kind, delta)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("klj: %s on (%s, %s), delta=%r", kind, a, b, delta)
    return True


@solver("klj")
def klj(
    inst: LmpInstance,
    init: Optional[Partition] = None,
    max_iterations: Optional[int] = None,
) -> SolveReport:
    """Kernighan-Lin with joins.

    Starts from `init` (the output of gaec if None) and alternates
    bipartition updates over pairs of neighboring components with attempts
    to split nodes off into new components, until an outer iteration
    changes nothing or `max_iterations` is reached. The objective never
    increases.
    """
    started = time.perf_counter()
    if init is None:
        init = gaec(inst).partition
    max_iterations = int_setting(
        max_iterations, ENV_KLJ_MAX_ITERATIONS, DEFAULT_KLJ_MAX_ITERATIONS
    )
    if max_iterations < 1:
        raise LiftedMulticutException(
            f"max_iterations must be positive, got {max_iterations}"
        )
    state = KljState(inst, init)
    initial_objective = state.objective
    logger.info(
        "klj: %d nodes, %d edges, %d lifted edges, %d initial components",
        inst.node_count,
        inst.graph.edge_count,
        len(inst.lifted_edges),
        len(state.members),
    )
    dirty = set(state.members)
    iterations = 0
    hit_iteration_cap = False
    while True:
        if iterations == max_iterations:
            hit_iteration_cap = True
            logger.warning("klj: stopped at the iteration cap (%d)", max_iterations)
            break
        iterations += 1
        state.changed = set()
        for a, b in state.adjacent_pairs():
            if a not in dirty and b not in dirty:
                continue
            if a in state.members and b in state.members:
                update_bipartition(state, a, b)
        for a in sorted(dirty | state.changed):
            while a in state.members and update_bipartition(state, a, None):
                pass
        logger.debug(
            "klj: iteration %d, objective %r, %d components changed",
            iterations,
            state.objective,
            len(state.changed),
        )
        if not state.changed:
            break
        dirty = state.changed
    partition = canonicalize(inst, state.partition())
    report = SolveReport(
        algorithm="klj",
        partition=partition,
        objective=partition_objective(inst, partition),
        initial_objective=initial_objective,
        trace=state.trace,
        iterations=iterations,
        duration=time.perf_counter() - started,
        hit_iteration_cap=hit_iteration_cap,
    )
    logger.info("%s", report)
    return report


@solver("gaec-klj")
def gaec_klj(
    inst: LmpInstance,
    init: Optional[Partition] = None,
    max_iterations: Optional[int] = None,
) -> SolveReport:
    """klj applied to the output of gaec, with both traces concatenated"""
    if init is not None:
        raise LiftedMulticutException("gaec-klj always starts from single nodes")
    first = gaec(inst)
    second = klj(inst, first.partition, max_iterations=max_iterations)
    offset = len(first.trace)
    trace = first.trace + [
        TraceStep(offset + step.step, step.kind, step.delta) for step in second.trace
    ]
    return SolveReport(
        algorithm="gaec-klj",
        partition=second.partition,
        objective=second.objective,
        initial_objective=first.initial_objective,
        trace=trace,
        iterations=second.iterations,
        duration=first.duration + second.duration,
        hit_iteration_cap=second.hit_iteration_cap,
    )
