"""Text file formats.

Instance (`#` starts a comment, blank lines are ignored):

    LMP 1
    NODES <n>
    EDGE <u> <v> <cost>     one per edge of E, u < v
    LIFT <u> <v> <cost>     one per edge of F, u < v

Probabilistic graph: `PGRAPH 1`, `NODES <n>`, then `EDGE <u> <v> <p>`.
Partition: `<node> <block>` per line. Labeling: `0` or `1` per line, in
global edge order. Probability grid: one row of whitespace separated
values per line. Trace: CSV with header `step,kind,delta`.
"""

from __future__ import annotations
import csv
import io
import math
from typing import Optional
import numpy as np
from .common import LiftedMulticutException
from .graph import Graph, Partition
from .lifting import ProbabilisticGraph
from .model import EdgeLabeling, LmpInstance
from .solvers import SolveReport

INSTANCE_MAGIC = ["LMP", "1"]
PROBABILISTIC_GRAPH_MAGIC = ["PGRAPH", "1"]
TRACE_HEADER = ["step", "kind", "delta"]


class ParseError(LiftedMulticutException):
    """A file does not follow its format.

    - line_number: The offending line (1-based), or None if the problem is
      not tied to one line
    - cause: What is wrong
    """

    def __init__(self, line_number: Optional[int], cause: str) -> None:
        self.line_number = line_number
        self.cause = cause
        if line_number is None:
            super().__init__(cause)
        else:
            super().__init__(f"line {line_number}: {cause}")


def _records(text: str) -> list[tuple[int, list[str]]]:
    records = []
    for line_number, line in enumerate(text.splitlines(), 1):
        tokens = line.split("#", 1)[0].split()
        if tokens:
            records.append((line_number, tokens))
    return records


def _int(line_number: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_number, f"{what} is not an integer: {token!r}") from None


def _float(line_number: int, token: str, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(line_number, f"{what} is not a number: {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(line_number, f"{what} is not finite: {token!r}")
    return value


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8") as f:
        try:
            return f.read()
        except UnicodeDecodeError as e:
            raise ParseError(None, f"not UTF-8 text: {e}") from None


def _write_text(text: str, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _header(records, magic: list[str]) -> tuple[int, int]:
    """Checks magic and NODES lines, returns (node count, records consumed)"""
    if not records:
        raise ParseError(1, f"missing {' '.join(magic)} header")
    line_number, tokens = records[0]
    if tokens != magic:
        raise ParseError(line_number, f"bad magic {' '.join(tokens)!r}")
    if len(records) < 2 or records[1][1][0] != "NODES" or len(records[1][1]) != 2:
        raise ParseError(
            records[1][0] if len(records) > 1 else line_number + 1,
            "expected NODES <n>",
        )
    line_number, tokens = records[1]
    n = _int(line_number, tokens[1], "node count")
    if n < 0:
        raise ParseError(line_number, f"negative node count {n}")
    return n, 2


def _edge(line_number: int, tokens: list[str], n: int) -> tuple[int, int, float]:
    if len(tokens) != 4:
        raise ParseError(line_number, f"expected {tokens[0]} <u> <v> <value>")
    u = _int(line_number, tokens[1], "node")
    v = _int(line_number, tokens[2], "node")
    value = _float(line_number, tokens[3], "value")
    for w in (u, v):
        if not 0 <= w < n:
            raise ParseError(line_number, f"node {w} out of range 0..{n - 1}")
    if u == v:
        raise ParseError(line_number, f"self-loop ({u}, {v})")
    if u > v:
        raise ParseError(line_number, f"expected u < v, got ({u}, {v})")
    return u, v, value


def instance_from_text(text: str) -> LmpInstance:
    """Parses an instance, see the module docstring for the format"""
    records = _records(text)
    n, start = _header(records, INSTANCE_MAGIC)
    edges, edge_costs = [], []
    lifted, lifted_costs = [], []
    kind_of = {}
    for line_number, tokens in records[start:]:
        kind = tokens[0]
        if kind not in ("EDGE", "LIFT"):
            raise ParseError(line_number, f"unknown record {kind!r}")
        u, v, cost = _edge(line_number, tokens, n)
        if (u, v) in kind_of:
            if kind_of[(u, v)] != kind:
                raise ParseError(
                    line_number, f"({u}, {v}) is both an EDGE and a LIFT (F ∩ E)"
                )
            raise ParseError(line_number, f"duplicate {kind} ({u}, {v})")
        kind_of[(u, v)] = kind
        if kind == "EDGE":
            edges.append((u, v))
            edge_costs.append(cost)
        else:
            lifted.append((u, v))
            lifted_costs.append(cost)
    return LmpInstance(Graph(n, edges), lifted, edge_costs + lifted_costs)


def instance_as_text(inst: LmpInstance) -> str:
    """Serializes an instance, E by edge id, then F by edge id"""
    costs = inst.costs.tolist()
    lines = [" ".join(INSTANCE_MAGIC), f"NODES {inst.node_count}"]
    for edge, (u, v) in enumerate(inst.all_edges):
        kind = "LIFT" if inst.is_lifted(edge) else "EDGE"
        lines.append(f"{kind} {u} {v} {costs[edge]!r}")
    return "\n".join(lines) + "\n"


def instance_from_file(path) -> LmpInstance:
    return instance_from_text(_read_text(path))


def write_instance_file(inst: LmpInstance, path) -> None:
    _write_text(instance_as_text(inst), path)


def probabilistic_graph_from_text(text: str) -> ProbabilisticGraph:
    """Parses a graph with one cut probability per edge"""
    records = _records(text)
    n, start = _header(records, PROBABILISTIC_GRAPH_MAGIC)
    edges, probs = [], []
    seen = set()
    for line_number, tokens in records[start:]:
        if tokens[0] != "EDGE":
            raise ParseError(line_number, f"unknown record {tokens[0]!r}")
        u, v, p = _edge(line_number, tokens, n)
        if not 0.0 <= p <= 1.0:
            raise ParseError(line_number, f"probability {p} outside [0, 1]")
        if (u, v) in seen:
            raise ParseError(line_number, f"duplicate EDGE ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
        probs.append(p)
    return ProbabilisticGraph(Graph(n, edges), probs)


def probabilistic_graph_as_text(pg: ProbabilisticGraph) -> str:
    lines = [" ".join(PROBABILISTIC_GRAPH_MAGIC), f"NODES {pg.graph.node_count}"]
    for (u, v), p in zip(pg.graph.edges, pg.cut_prob.tolist()):
        lines.append(f"EDGE {u} {v} {p!r}")
    return "\n".join(lines) + "\n"


def probabilistic_graph_from_file(path) -> ProbabilisticGraph:
    return probabilistic_graph_from_text(_read_text(path))


def partition_from_text(text: str, node_count: int = None) -> Partition:
    """Parses `<node> <block>` lines into a canonical partition of 0..n-1.

    n is `node_count` if given, else one more than the largest node id.
    """
    labels = {}
    for line_number, tokens in _records(text):
        if len(tokens) != 2:
            raise ParseError(line_number, "expected <node_id> <block_id>")
        v = _int(line_number, tokens[0], "node id")
        block = _int(line_number, tokens[1], "block id")
        if v < 0:
            raise ParseError(line_number, f"negative node id {v}")
        if node_count is not None and v >= node_count:
            raise ParseError(line_number, f"node {v} out of range 0..{node_count - 1}")
        if v in labels:
            raise ParseError(line_number, f"duplicate node {v}")
        labels[v] = block
    n = node_count if node_count is not None else max(labels, default=-1) + 1
    missing = [v for v in range(n) if v not in labels]
    if missing:
        raise ParseError(None, f"missing node {missing[0]}")
    return Partition(labels[v] for v in range(n))


def partition_as_text(p: Partition) -> str:
    return "".join(f"{v} {block}\n" for v, block in zip(p.nodes, p.block_of))


def partition_from_file(path, node_count: int = None) -> Partition:
    return partition_from_text(_read_text(path), node_count)


def write_partition_file(p: Partition, path) -> None:
    _write_text(partition_as_text(p), path)


def labeling_from_text(text: str) -> EdgeLabeling:
    labels = []
    for line_number, tokens in _records(text):
        if len(tokens) != 1 or tokens[0] not in ("0", "1"):
            raise ParseError(line_number, "expected a single 0 or 1")
        labels.append(int(tokens[0]))
    return EdgeLabeling(labels)


def labeling_as_text(y: EdgeLabeling) -> str:
    return "".join(f"{label}\n" for label in y)


def labeling_from_file(path) -> EdgeLabeling:
    return labeling_from_text(_read_text(path))


def write_labeling_file(y: EdgeLabeling, path) -> None:
    _write_text(labeling_as_text(y), path)


def probability_grid_from_text(text: str) -> np.ndarray:
    """Parses a row-major grid of probabilities into a (height, width) array"""
    rows = []
    for line_number, tokens in _records(text):
        row = [_float(line_number, token, "probability") for token in tokens]
        if rows and len(row) != len(rows[0]):
            raise ParseError(
                line_number, f"row has {len(row)} values, expected {len(rows[0])}"
            )
        for value in row:
            if not 0.0 <= value <= 1.0:
                raise ParseError(line_number, f"probability {value} outside [0, 1]")
        rows.append(row)
    if not rows:
        raise ParseError(None, "empty probability grid")
    return np.array(rows, dtype=np.float64)


def probability_grid_as_text(grid: np.ndarray) -> str:
    return "".join(" ".join(repr(float(x)) for x in row) + "\n" for row in grid)


def probability_grid_from_file(path) -> np.ndarray:
    return probability_grid_from_text(_read_text(path))


def trace_as_csv(report: SolveReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for step in report.trace:
        writer.writerow([step.step, step.kind, repr(step.delta)])
    return out.getvalue()


def write_trace_file(report: SolveReport, path) -> None:
    _write_text(trace_as_csv(report), path)
