"""Comparison of partitions: variation of information and Rand's index."""

from __future__ import annotations
import math
from typing import NamedTuple
import numpy as np
from .common import LiftedMulticutException
from .graph import Partition


class GroundSetMismatch(LiftedMulticutException):
    """The partitions being compared are partitions of different sets."""

    pass


class TooFewElements(LiftedMulticutException):
    """Rand's index needs at least two elements."""

    pass


class ConfusionTable:
    """Overlap counts of two partitions of the same ground set with:

    - rows, cols, counts: The nonzero cells, n_ij = counts[k] for
      i = rows[k] (block of the first partition), j = cols[k]
    - row_sums: Block sizes of the first partition
    - col_sums: Block sizes of the second partition
    - n: Size of the ground set
    """

    def __init__(self, a: Partition, b: Partition) -> None:
        if a.nodes != b.nodes:
            raise GroundSetMismatch(
                f"Partitions of {len(a)} and {len(b)} different elements"
            )
        rows = np.asarray(a.block_of, dtype=np.int64)
        cols = np.asarray(b.block_of, dtype=np.int64)
        cells, counts = np.unique(rows * b.block_count + cols, return_counts=True)
        self.rows = cells // max(b.block_count, 1)
        self.cols = cells % max(b.block_count, 1)
        self.counts = counts
        self.row_sums = np.bincount(rows, minlength=a.block_count)
        self.col_sums = np.bincount(cols, minlength=b.block_count)
        self.n = len(a)

    def dense(self) -> np.ndarray:
        table = np.zeros((self.row_sums.size, self.col_sums.size), dtype=np.int64)
        table[self.rows, self.cols] = self.counts
        return table


class VariationOfInformation(NamedTuple):
    vi: float
    false_cut: float
    false_join: float


def _conditional_entropy(
    counts: np.ndarray, given_sizes: np.ndarray, n: int, base: float
) -> float:
    # 0 log 0 = 0: only nonzero cells are present.
    ratios = counts / given_sizes
    logs = np.log2(ratios) if base == 2 else np.log(ratios) / math.log(base)
    return max(0.0, math.fsum((-(counts / n) * logs).tolist()))


def variation_of_information(
    truth: Partition, pred: Partition, base: float = 2.0
) -> VariationOfInformation:
    """Variation of information, split into false cuts and false joins.

    false_join = H(truth | pred): uncertainty left about the truth given the
    prediction, which arises where the prediction joins what the truth
    separates. false_cut = H(pred | truth). vi is their sum. Logarithms are
    to base 2 by default.
    """
    table = ConfusionTable(truth, pred)
    if table.n == 0:
        return VariationOfInformation(0.0, 0.0, 0.0)
    false_join = _conditional_entropy(
        table.counts, table.col_sums[table.cols], table.n, base
    )
    false_cut = _conditional_entropy(
        table.counts, table.row_sums[table.rows], table.n, base
    )
    return VariationOfInformation(false_cut + false_join, false_cut, false_join)


def _pairs(counts: np.ndarray) -> int:
    return sum(c * (c - 1) // 2 for c in counts.tolist())


def rand_index(a: Partition, b: Partition) -> float:
    """Fraction of element pairs which both partitions join, or both separate"""
    table = ConfusionTable(a, b)
    if table.n < 2:
        raise TooFewElements(f"Rand's index needs 2 or more elements, got {table.n}")
    total = table.n * (table.n - 1) // 2
    joined_in_both = _pairs(table.counts)
    disagreements = (
        _pairs(table.row_sums) + _pairs(table.col_sums) - 2 * joined_in_both
    )
    return (total - disagreements) / total
