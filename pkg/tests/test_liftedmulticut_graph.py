import random
import pytest
from liftedmulticut import graph


def sample_path(n: int = 3) -> graph.Graph:
    return graph.build_graph(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(rng: random.Random, n: int, density: float) -> graph.Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density
    ]
    return graph.build_graph(n, edges)


def test_build_graph_path():
    g = sample_path()
    assert g.node_count == 3
    assert g.edges == [(0, 1), (1, 2)]
    assert [g.degree(v) for v in range(3)] == [1, 2, 1]
    assert g.neighbors(1) == [0, 2]
    assert g.edge_id(2, 1) == 1
    assert g.edge_id(0, 2) is None


def test_build_graph_single_node():
    g = graph.build_graph(1, [])
    assert g.node_count == 1
    assert g.edge_count == 0


def test_build_graph_normalizes_pairs():
    g = graph.build_graph(3, [(1, 0), (2, 1)])
    assert g.edges == [(0, 1), (1, 2)]


def test_build_graph_rejects_duplicate_edge():
    with pytest.raises(graph.DuplicateEdge):
        graph.build_graph(3, [(0, 1), (0, 1)])
    with pytest.raises(graph.DuplicateEdge):
        graph.build_graph(3, [(0, 1), (1, 0)])


def test_build_graph_rejects_self_loop():
    with pytest.raises(graph.SelfLoop):
        graph.build_graph(3, [(1, 1)])


def test_build_graph_rejects_node_out_of_range():
    with pytest.raises(graph.NodeOutOfRange):
        graph.build_graph(3, [(0, 3)])
    with pytest.raises(graph.NodeOutOfRange):
        graph.build_graph(3, [(-1, 0)])


def test_graph_distances_path():
    g = sample_path()
    assert graph.graph_distances(g, 0, 2) == {0: 0, 1: 1, 2: 2}


def test_graph_distances_cap():
    g = sample_path()
    distances = graph.graph_distances(g, 0, 1)
    assert distances == {0: 0, 1: 1}
    assert 2 not in distances


def test_graph_distances_disconnected():
    g = graph.build_graph(2, [])
    assert 1 not in graph.graph_distances(g, 0, 5)


def test_graph_distances_symmetric():
    rng = random.Random(7)
    for _ in range(10):
        n = rng.randint(2, 25)
        g = random_graph(rng, n, 0.15)
        for _ in range(100):
            u, v = rng.randrange(n), rng.randrange(n)
            assert graph.graph_distances(g, u, n).get(v) == graph.graph_distances(
                g, v, n
            ).get(u)


def test_connected_components_subset():
    g = sample_path()
    p = graph.connected_components(g, {0, 2})
    assert p.nodes == (0, 2)
    assert p.block_count == 2
    assert p.block(0) != p.block(2)


def test_connected_components_full_set():
    g = sample_path(5)
    assert graph.connected_components(g) == graph.Partition.single_block(5)


def test_connected_components_empty_subset():
    p = graph.connected_components(sample_path(), [])
    assert len(p) == 0
    assert p.block_count == 0


def test_connected_components_isolated_nodes():
    g = graph.build_graph(4, [(0, 2)])
    assert graph.connected_components(g) == graph.Partition([0, 1, 0, 2])


def test_is_decomposition():
    g = sample_path()
    assert graph.is_decomposition(g, graph.Partition([0, 0, 0]))
    assert not graph.is_decomposition(g, graph.Partition([0, 1, 0]))
    assert graph.is_decomposition(g, graph.Partition.singletons(3))


def test_is_decomposition_rejects_size_mismatch():
    with pytest.raises(graph.PartitionMismatch):
        graph.is_decomposition(sample_path(), graph.Partition([0, 0]))


def test_union_find():
    forest = graph.UnionFind(4)
    forest.union(0, 1)
    assert forest.find(0) == forest.find(1)
    assert forest.find(2) != forest.find(0)
    forest.union(1, 2)
    assert forest.find(0) == forest.find(2)
    assert forest.partition() == graph.Partition([0, 0, 0, 1])


def test_union_find_union_returns_representative():
    forest = graph.UnionFind(3)
    root = forest.union(0, 2)
    assert root == forest.find(0) == forest.find(2)
    assert forest.union(2, 0) == root


def test_partition_is_canonical():
    assert graph.Partition([5, 5, 9]) == graph.Partition([0, 0, 1])
    assert graph.Partition([5, 5, 9]).block_of == (0, 0, 1)
    assert graph.Partition([2, 1, 2]).blocks() == [[0, 2], [1]]


def test_partition_from_blocks():
    p = graph.Partition.from_blocks([[2], [0, 1]], node_count=3)
    assert p == graph.Partition([0, 0, 1])
    assert str(p) == "0,1|2"


def test_partition_from_blocks_rejects_uncovered_node():
    with pytest.raises(graph.PartitionMismatch):
        graph.Partition.from_blocks([[0], [2]], node_count=3)
    with pytest.raises(graph.PartitionMismatch):
        graph.Partition.from_blocks([[0, 1], [1, 2]], node_count=3)


def test_partition_of_subset():
    p = graph.Partition([7, 7, 3], nodes=[4, 2, 9])
    assert p.nodes == (2, 4, 9)
    assert not p.is_dense
    assert p.block(2) == p.block(4) == 0
    assert p.block(9) == 1


def test_partition_rejects_mismatched_nodes():
    with pytest.raises(graph.PartitionMismatch):
        graph.Partition([0, 1], nodes=[0])
    with pytest.raises(graph.PartitionMismatch):
        graph.Partition([0, 1], nodes=[3, 3])
