from __future__ import annotations
import logging
from typing import Optional
import numpy as np
from .common import DEFAULT_PIXEL_RULE, DEFAULT_TILE_SIZE, PIXEL_RULES
from .common import PIXEL_RULE_MAX, LiftedMulticutException
from .graph import Graph, Partition, graph_distances
from .lifting import LiftingParams, ProbabilisticGraph, geodesic_lift
from .model import LmpInstance

logger = logging.getLogger(__name__)


class InvalidGeneratorParams(LiftedMulticutException):
    """Generator parameters or input data are out of range."""

    pass


def _check_dimensions(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise InvalidGeneratorParams(f"Invalid grid size {width}x{height}")


def grid_graph(width: int, height: int) -> Graph:
    """Pixel grid graph with 4-neighborhoods.

    Node id of pixel (x, y) is y * width + x. Edges are listed pixel by
    pixel in row-major order, right neighbor before lower neighbor.
    """
    _check_dimensions(width, height)
    edges = []
    for y in range(height):
        for x in range(width):
            v = y * width + x
            if x + 1 < width:
                edges.append((v, v + 1))
            if y + 1 < height:
                edges.append((v, v + width))
    return Graph(width * height, edges)


def edge_probabilities(
    graph: Graph, pixel_probs: np.ndarray, rule: str = DEFAULT_PIXEL_RULE
) -> np.ndarray:
    """Cut probability per edge from per-pixel boundary values"""
    if rule not in PIXEL_RULES:
        raise InvalidGeneratorParams(
            f"Unknown pixel rule {rule!r}, expected {PIXEL_RULES}"
        )
    flat = np.asarray(pixel_probs, dtype=np.float64).reshape(-1)
    if not graph.edges:
        return np.zeros(0, dtype=np.float64)
    ends = np.array(graph.edges, dtype=np.int64)
    first, second = flat[ends[:, 0]], flat[ends[:, 1]]
    if rule == PIXEL_RULE_MAX:
        return np.maximum(first, second)
    return (first + second) / 2.0


def gen_grid(
    width: int,
    height: int,
    pixel_probs: np.ndarray,
    params: LiftingParams,
    rule: str = DEFAULT_PIXEL_RULE,
    jobs: int = 1,
) -> LmpInstance:
    """Lifted multicut instance of a pixel grid.

    `pixel_probs` holds one boundary probability per pixel, shape
    (height, width). Edge probabilities follow `rule`, then the grid is
    lifted by `geodesic_lift` (d* = 1 gives the plain multicut instance).
    """
    _check_dimensions(width, height)
    pixel_probs = np.asarray(pixel_probs, dtype=np.float64)
    if pixel_probs.shape != (height, width):
        raise InvalidGeneratorParams(
            f"Probability grid is {pixel_probs.shape[::-1]}, expected {width}x{height}"
        )
    if not np.all((pixel_probs >= 0.0) & (pixel_probs <= 1.0)):
        raise InvalidGeneratorParams("Pixel probabilities must be within [0, 1]")
    graph = grid_graph(width, height)
    pg = ProbabilisticGraph(graph, edge_probabilities(graph, pixel_probs, rule))
    return geodesic_lift(pg, params, jobs=jobs)


def gen_random(
    n: int,
    edge_density: float,
    lift_fraction: float = 0.0,
    cost_range: tuple[float, float] = (-1.0, 1.0),
    seed: Optional[int] = None,
) -> LmpInstance:
    """Random connected instance.

    A random spanning tree is completed by adding every other pair with
    probability `edge_density`. Each pair at hop distance 2 or 3 becomes a
    lifted edge with probability `lift_fraction`. Costs are uniform in
    `cost_range`. The same seed gives the same instance.
    """
    if n < 1:
        raise InvalidGeneratorParams(f"Need at least one node, got {n}")
    if not 0.0 < edge_density <= 1.0:
        raise InvalidGeneratorParams(
            f"Edge density must be in (0, 1], got {edge_density}"
        )
    if not 0.0 <= lift_fraction <= 1.0:
        raise InvalidGeneratorParams(
            f"Lift fraction must be in [0, 1], got {lift_fraction}"
        )
    low, high = cost_range
    if not low <= high:
        raise InvalidGeneratorParams(f"Invalid cost range {cost_range}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    tree = set()
    for i in range(1, n):
        u, v = order[i], order[int(rng.integers(i))]
        tree.add((min(u, v), max(u, v)))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) in tree or rng.random() < edge_density:
                edges.append((u, v))
    graph = Graph(n, edges)
    lifted = []
    for u in range(n):
        for v, d in sorted(graph_distances(graph, u, 3).items()):
            if v > u and d > 1 and rng.random() < lift_fraction:
                lifted.append((u, v))
    costs = rng.uniform(low, high, size=len(edges) + len(lifted))
    logger.info(
        "Random instance: %d nodes, %d edges, %d lifted edges (seed %s)",
        n,
        len(edges),
        len(lifted),
        seed,
    )
    return LmpInstance(graph, lifted, costs)


def tiles_partition(
    width: int, height: int, tile: int = DEFAULT_TILE_SIZE
) -> Partition:
    """Decomposition of a pixel grid into tile x tile squares.

    Tiles at the right and bottom border are cut short.
    """
    _check_dimensions(width, height)
    if tile < 1:
        raise InvalidGeneratorParams(f"Tile size must be positive, got {tile}")
    tiles_per_row = (width + tile - 1) // tile
    return Partition(
        (y // tile) * tiles_per_row + x // tile
        for y in range(height)
        for x in range(width)
    )
