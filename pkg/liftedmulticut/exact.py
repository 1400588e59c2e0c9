from __future__ import annotations
import logging
import math
import time
from functools import lru_cache
from typing import Iterator, Optional
from .common import DEFAULT_EXACT_NODE_CAP, ENV_EXACT_NODE_CAP
from .common import LiftedMulticutException, int_setting
from .graph import Partition, same_blocks_connected
from .model import LmpInstance, labels_for_blocks
from .solvers import SolveReport, solver

logger = logging.getLogger(__name__)


class NodeCapExceeded(LiftedMulticutException):
    """The instance has too many nodes for exhaustive enumeration."""

    pass


@lru_cache(None)
def bell_number(n: int) -> int:
    """Number of partitions of an n-element set"""
    if n == 0:
        return 1
    return sum(math.comb(n - 1, k) * bell_number(k) for k in range(n))


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of 0..n-1 as restricted growth strings, ascending.

    A restricted growth string is the canonical block numbering of
    `Partition`, so the order is the canonical partition order.
    """
    labels = [0] * n

    def extend(i: int, blocks: int):
        if i == n:
            yield tuple(labels)
            return
        for label in range(blocks + 1):
            labels[i] = label
            yield from extend(i + 1, max(blocks, label + 1))

    if n == 0:
        yield ()
    else:
        yield from extend(1, 1)


def decompositions(inst: LmpInstance) -> Iterator[tuple[int, ...]]:
    """Block labels of every decomposition of G, in canonical order"""
    graph = inst.graph
    for labels in set_partitions(inst.node_count):
        blocks = max(labels, default=-1) + 1
        if same_blocks_connected(graph, labels) == blocks:
            yield labels


@solver("exact")
def solve_exact(
    inst: LmpInstance, init: Optional[Partition] = None, node_cap: int = None
) -> SolveReport:
    """Minimizes the objective by enumerating all decompositions of G.

    Only usable for small instances (Bell(10) = 115975 set partitions).
    Among minimizers, the first in canonical partition order wins.
    """
    if init is not None:
        raise LiftedMulticutException("exact does not take an initial partition")
    node_cap = int_setting(node_cap, ENV_EXACT_NODE_CAP, DEFAULT_EXACT_NODE_CAP)
    if inst.node_count > node_cap:
        logger.warning(
            "exact: refusing %d nodes (cap %d)", inst.node_count, node_cap
        )
        raise NodeCapExceeded(
            f"{inst.node_count} nodes exceed the exact solver cap of {node_cap}"
        )
    started = time.perf_counter()
    costs = inst.costs
    best_labels = None
    best_objective = math.inf
    enumerated = 0
    for labels in decompositions(inst):
        enumerated += 1
        value = math.fsum(costs[labels_for_blocks(inst, labels) == 1])
        if value < best_objective:
            best_objective = value
            best_labels = labels
    partition = Partition(best_labels)
    report = SolveReport(
        algorithm="exact",
        partition=partition,
        objective=best_objective,
        initial_objective=best_objective,
        trace=[],
        iterations=enumerated,
        duration=time.perf_counter() - started,
    )
    logger.info("%s", report)
    return report
