from __future__ import annotations
from collections import deque
from typing import Iterable, Optional, Sequence
from .common import LiftedMulticutException


class GraphConstructionError(LiftedMulticutException):
    """The edge list does not describe a simple undirected graph."""

    pass


class SelfLoop(GraphConstructionError):
    """An edge connects a node with itself."""

    pass


class DuplicateEdge(GraphConstructionError):
    """The same unordered node pair appears twice."""

    pass


class NodeOutOfRange(GraphConstructionError):
    """A node id is negative or not below the node count."""

    pass


class PartitionMismatch(LiftedMulticutException):
    """A partition does not cover the nodes it is used with."""

    pass


class Graph:
    """A simple undirected graph with:

    - node_count: The number of nodes, ids are 0..node_count-1
    - edges: List of (u, v) pairs with u < v. The position is the edge id
    - adjacency: For each node, the list of (neighbor, edge id) sorted by neighbor

    Use `build_graph` to construct one from an arbitrary edge list.
    """

    def __init__(self, node_count: int, edges: list[tuple[int, int]]) -> None:
        self.node_count = node_count
        self.edges = edges
        self._edge_ids = {}
        adjacency = [[] for _ in range(node_count)]
        for edge_id, (u, v) in enumerate(edges):
            self._edge_ids[(u, v)] = edge_id
            adjacency[u].append((v, edge_id))
            adjacency[v].append((u, edge_id))
        for neighbors in adjacency:
            neighbors.sort()
        self.adjacency = adjacency

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> list[int]:
        return [w for (w, _) in self.adjacency[v]]

    def edge_id(self, u: int, v: int) -> Optional[int]:
        """Returns the id of edge uv, or None if u and v are not neighbors"""
        if u > v:
            u, v = v, u
        return self._edge_ids.get((u, v))

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, Graph):
            return self.node_count == __o.node_count and self.edges == __o.edges
        return False

    def __hash__(self) -> int:
        return hash((self.node_count, tuple(self.edges)))

    def __repr__(self) -> str:
        return f"Graph({self.node_count}, {self.edges})"


def normalized_edges(
    node_count: int,
    edge_list: Iterable[tuple[int, int]],
    taken: Optional[set] = None,
) -> list[tuple[int, int]]:
    """Validates an edge list and returns it with every pair as (min, max).

    Pairs already present in `taken` count as duplicates. `taken` is
    updated with the accepted pairs.
    """
    seen = taken if taken is not None else set()
    result = []
    for u, v in edge_list:
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise NodeOutOfRange(
                f"Edge ({u}, {v}) has a node outside 0..{node_count - 1}"
            )
        if u == v:
            raise SelfLoop(f"Edge ({u}, {v}) is a self-loop")
        pair = (u, v) if u < v else (v, u)
        if pair in seen:
            raise DuplicateEdge(f"Edge {pair} appears more than once")
        seen.add(pair)
        result.append(pair)
    return result


def build_graph(node_count: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Builds a simple graph, validating the edge list"""
    if node_count < 0:
        raise GraphConstructionError(f"Negative node count: {node_count}")
    return Graph(node_count, normalized_edges(node_count, edge_list))


def _check_node(g: Graph, v: int) -> None:
    if not 0 <= v < g.node_count:
        raise NodeOutOfRange(f"Node {v} outside 0..{g.node_count - 1}")


def graph_distances(g: Graph, source: int, cap: int) -> dict[int, int]:
    """Breadth-first hop distances from `source`.

    Only nodes at distance <= cap are reported; nodes missing from the
    result are unreachable within the cap.
    """
    _check_node(g, source)
    if cap < 0:
        raise LiftedMulticutException(f"Negative distance cap: {cap}")
    distances = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = distances[v]
        if d == cap:
            continue
        for w, _ in g.adjacency[v]:
            if w not in distances:
                distances[w] = d + 1
                queue.append(w)
    return distances


class Partition:
    """A partition of a set of nodes into blocks with:

    - nodes: The ground set, as an ascending tuple of node ids
    - block_of: Block id per node of the ground set (aligned with `nodes`)

    Block ids are renumbered on construction so they are assigned 0..k-1 in
    order of first appearance, so equal partitions compare equal.
    """

    def __init__(
        self, block_of: Iterable[int], nodes: Optional[Sequence[int]] = None
    ) -> None:
        labels = list(block_of)
        if nodes is None:
            self.nodes = tuple(range(len(labels)))
            self._position = None
        else:
            if len(labels) != len(nodes):
                raise PartitionMismatch(
                    f"{len(labels)} block ids for {len(nodes)} nodes"
                )
            order = sorted(range(len(labels)), key=lambda i: nodes[i])
            self.nodes = tuple(nodes[i] for i in order)
            labels = [labels[i] for i in order]
            if len(set(self.nodes)) != len(self.nodes):
                raise PartitionMismatch("Duplicate node in partition ground set")
            if self.nodes == tuple(range(len(self.nodes))):
                self._position = None
            else:
                self._position = {v: i for i, v in enumerate(self.nodes)}
        renumbering = {}
        self.block_of = tuple(
            renumbering.setdefault(label, len(renumbering)) for label in labels
        )
        self.block_count = len(renumbering)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], node_count: int = None):
        """Builds a partition of 0..node_count-1 from a list of blocks.

        If node_count is None, the ground set is the union of the blocks.
        """
        pairs = [(v, i) for i, block in enumerate(blocks) for v in block]
        if node_count is None:
            return cls([i for (_, i) in pairs], [v for (v, _) in pairs])
        labels = [None] * node_count
        for v, i in pairs:
            if not 0 <= v < node_count or labels[v] is not None:
                raise PartitionMismatch(f"Node {v} is out of range or repeated")
            labels[v] = i
        if None in labels:
            raise PartitionMismatch(f"Node {labels.index(None)} is in no block")
        return cls(labels)

    @classmethod
    def singletons(cls, node_count: int) -> Partition:
        return cls(range(node_count))

    @classmethod
    def single_block(cls, node_count: int) -> Partition:
        return cls([0] * node_count)

    @property
    def is_dense(self) -> bool:
        """True if the ground set is 0..n-1"""
        return self._position is None

    def block(self, v: int) -> int:
        """Returns the block id of node v"""
        if self._position is None:
            return self.block_of[v]
        return self.block_of[self._position[v]]

    def blocks(self) -> list[list[int]]:
        """Returns the blocks as ascending node lists, ordered by block id"""
        result = [[] for _ in range(self.block_count)]
        for v, b in zip(self.nodes, self.block_of):
            result[b].append(v)
        return result

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, __o: object) -> bool:
        if isinstance(__o, Partition):
            return self.nodes == __o.nodes and self.block_of == __o.block_of
        return False

    def __hash__(self) -> int:
        return hash((self.nodes, self.block_of))

    def __str__(self) -> str:
        return "|".join(",".join(str(v) for v in block) for block in self.blocks())

    def __repr__(self) -> str:
        return f"Partition({{{self}}})"


class UnionFind:
    """Disjoint-set forest over 0..n-1 with union by rank and path compression."""

    def __init__(self, size: int) -> None:
        self._parents = list(range(size))
        self._ranks = [0] * size

    def __len__(self) -> int:
        return len(self._parents)

    def find(self, a: int) -> int:
        """Returns the representative of a"""
        parents = self._parents
        root = a
        while parents[root] != root:
            root = parents[root]
        while parents[a] != root:
            parents[a], a = root, parents[a]
        return root

    def union(self, a: int, b: int) -> int:
        """Merges the sets of a and b, returns the new representative"""
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return root_a
        rank_a = self._ranks[root_a]
        rank_b = self._ranks[root_b]
        if rank_a < rank_b:
            root_a, root_b = root_b, root_a
        self._parents[root_b] = root_a
        if rank_a == rank_b:
            self._ranks[root_a] += 1
        return root_a

    def partition(self) -> Partition:
        return Partition(self.find(v) for v in range(len(self._parents)))


def connected_components(
    g: Graph, node_subset: Optional[Iterable[int]] = None
) -> Partition:
    """Splits the nodes (or the given subset) into pieces connected in G.

    With a subset, only edges between nodes of the subset are used and the
    returned partition has the subset as ground set.
    """
    if node_subset is None:
        forest = UnionFind(g.node_count)
        for u, v in g.edges:
            forest.union(u, v)
        return forest.partition()
    nodes = sorted(set(node_subset))
    for v in nodes:
        _check_node(g, v)
    inside = set(nodes)
    component = {}
    for start in nodes:
        if start in component:
            continue
        component[start] = start
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w, _ in g.adjacency[v]:
                if w in inside and w not in component:
                    component[w] = start
                    queue.append(w)
    return Partition([component[v] for v in nodes], nodes)


def is_decomposition(g: Graph, p: Partition) -> bool:
    """True iff every block of p induces a connected subgraph of g"""
    if len(p) != g.node_count or not p.is_dense:
        raise PartitionMismatch(
            f"Partition of {len(p)} nodes used with a graph of {g.node_count} nodes"
        )
    return same_blocks_connected(g, p.block_of) == p.block_count


def same_blocks_connected(g: Graph, block_of: Sequence[int]) -> int:
    """Counts the connected pieces left when only edges inside blocks are kept"""
    forest = UnionFind(g.node_count)
    pieces = g.node_count
    for u, v in g.edges:
        if block_of[u] == block_of[v] and forest.find(u) != forest.find(v):
            forest.union(u, v)
            pieces -= 1
    return pieces
