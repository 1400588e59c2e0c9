from __future__ import annotations
import argparse
import math
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from .common import DEFAULT_CLAMP_EPS, DEFAULT_D_STAR, DEFAULT_P_STAR
from .common import DEFAULT_PIXEL_RULE, DEFAULT_TILE_SIZE, MESH_D_STAR, MESH_P_STAR
from .common import IMAGE_D_STARS, PIXEL_RULES, LiftedMulticutException
from .common import configure_logging
from . import formats, generators, metrics
from .lifting import LiftingParams, geodesic_lift
from .model import LabelingLengthMismatch, check_feasibility, labeling_from_partition
from .solvers import algorithms, solve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3

KLJ_ALGORITHMS = ["klj"]


class UsageError(LiftedMulticutException):
    """Invalid command line."""

    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _number(value: float) -> str:
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _lifting_params(args, restrict_to_ball: bool = True) -> LiftingParams:
    return LiftingParams(
        d_star=args.dstar,
        p_star=args.pstar,
        clamp_eps=args.clamp_eps,
        restrict_to_ball=restrict_to_ball,
    )


def _gen_grid(args) -> int:
    grid = formats.probability_grid_from_file(args.probs)
    inst = generators.gen_grid(
        args.width,
        args.height,
        grid,
        _lifting_params(args, not args.no_ball),
        rule=args.pixel_rule,
        jobs=args.jobs,
    )
    formats.write_instance_file(inst, args.out)
    return EXIT_OK


def _gen_random(args) -> int:
    inst = generators.gen_random(
        args.nodes,
        args.density,
        lift_fraction=args.lift_fraction,
        cost_range=(args.cost_low, args.cost_high),
        seed=args.seed,
    )
    formats.write_instance_file(inst, args.out)
    return EXIT_OK


def _lift(args) -> int:
    pg = formats.probabilistic_graph_from_file(args.input)
    inst = geodesic_lift(pg, _lifting_params(args, not args.no_ball), jobs=args.jobs)
    formats.write_instance_file(inst, args.out)
    return EXIT_OK


def _tiles(args) -> int:
    p = generators.tiles_partition(args.width, args.height, args.tile)
    formats.write_partition_file(p, args.out)
    return EXIT_OK


def _solve(args) -> int:
    inst = formats.instance_from_file(args.input)
    options = {}
    if args.init:
        if args.algo not in KLJ_ALGORITHMS:
            raise UsageError(f"--init only applies to {KLJ_ALGORITHMS}")
        options["init"] = formats.partition_from_file(args.init, inst.node_count)
    if args.max_iterations is not None and args.algo in ("klj", "gaec-klj"):
        options["max_iterations"] = args.max_iterations
    if args.node_cap is not None and args.algo == "exact":
        options["node_cap"] = args.node_cap
    report = solve(args.algo, inst, **options)
    formats.write_partition_file(report.partition, args.out)
    if args.trace:
        formats.write_trace_file(report, args.trace)
    if args.emit_labels:
        labeling = labeling_from_partition(inst, report.partition)
        formats.write_labeling_file(labeling, args.emit_labels)
    print(f"objective {_number(report.objective)}")
    return EXIT_OK


def _check(args) -> int:
    inst = formats.instance_from_file(args.input)
    labeling = formats.labeling_from_file(args.labels)
    try:
        report = check_feasibility(inst, labeling)
    except LabelingLengthMismatch as e:
        raise formats.ParseError(None, str(e)) from e
    print(report)
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def _eval(args) -> int:
    truth = formats.partition_from_file(args.truth)
    pred = formats.partition_from_file(args.pred)
    if args.metric == "vi":
        base = 2.0 if args.base == "2" else math.e
        vi = metrics.variation_of_information(truth, pred, base=base)
        print(f"{vi.vi!r} {vi.false_cut!r} {vi.false_join!r}")
    else:
        print(repr(metrics.rand_index(truth, pred)))
    return EXIT_OK


def _sweep(args) -> int:
    grid = formats.probability_grid_from_file(args.probs)
    truth = None
    if args.truth:
        truth = formats.partition_from_file(args.truth, args.width * args.height)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    configs = [(p_star, d_star) for p_star in args.pstar for d_star in args.dstar]

    def run(config):
        p_star, d_star = config
        params = LiftingParams(d_star, p_star, args.clamp_eps)
        inst = generators.gen_grid(
            args.width, args.height, grid, params, rule=args.pixel_rule
        )
        report = solve(args.algo, inst)
        path = out_dir / f"partition_p{p_star}_d{d_star}.txt"
        formats.write_partition_file(report.partition, path)
        logger.info("sweep: p*=%r d*=%d written to %s", p_star, d_star, path)
        fields = [
            repr(p_star),
            str(d_star),
            _number(report.objective),
            str(report.partition.block_count),
        ]
        if truth is not None:
            vi = metrics.variation_of_information(truth, report.partition)
            fields += [repr(vi.vi), repr(vi.false_cut), repr(vi.false_join)]
        return " ".join(fields)

    with ThreadPoolExecutor(max_workers=args.jobs) as executor:
        lines = list(executor.map(run, configs))
    for line in lines:
        print(line)
    return EXIT_OK


def _probability(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


def _lifting_arguments(parser, p_star: float, d_star: int) -> None:
    parser.add_argument(
        "--pstar", type=float, default=p_star, help="Prior cut probability"
    )
    parser.add_argument(
        "--dstar", type=int, default=d_star, help="Maximum lifting distance"
    )
    parser.add_argument("--clamp-eps", type=float, default=DEFAULT_CLAMP_EPS)
    parser.add_argument(
        "--no-ball",
        action="store_true",
        help="Search max-probability paths in the whole graph",
    )
    parser.add_argument("--jobs", type=_positive_int, default=1, help="Worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="liftedmulticut",
        description="Minimum cost (lifted) multicut instances and heuristics",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("gen-grid", help="Instance from a pixel probability grid")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--probs", required=True, help="Probability grid file")
    p.add_argument("--pixel-rule", choices=PIXEL_RULES, default=DEFAULT_PIXEL_RULE)
    p.add_argument("--out", required=True)
    _lifting_arguments(p, DEFAULT_P_STAR, DEFAULT_D_STAR)
    p.set_defaults(handler=_gen_grid)

    p = commands.add_parser("gen-random", help="Random connected instance")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lift-fraction", type=float, default=0.0)
    p.add_argument("--cost-low", type=float, default=-1.0)
    p.add_argument("--cost-high", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_gen_random)

    p = commands.add_parser("lift", help="Instance from a probabilistic graph file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _lifting_arguments(p, MESH_P_STAR, MESH_D_STAR)
    p.set_defaults(handler=_lift)

    p = commands.add_parser("tiles", help="Tile decomposition of a pixel grid")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--tile", type=int, default=DEFAULT_TILE_SIZE)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_tiles)

    p = commands.add_parser("solve", help="Solve an instance")
    p.add_argument("--algo", choices=algorithms(), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--init", help="Initial partition (klj)")
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="CSV trace output")
    p.add_argument("--emit-labels", help="Edge labeling output")
    p.add_argument("--max-iterations", type=int, help="klj iteration cap")
    p.add_argument("--node-cap", type=int, help="exact solver node cap")
    p.set_defaults(handler=_solve)

    p = commands.add_parser("check", help="Check a labeling for feasibility")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--labels", required=True)
    p.set_defaults(handler=_check)

    p = commands.add_parser("eval", help="Compare two partitions")
    p.add_argument("--metric", choices=["vi", "ri"], required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--base", choices=["2", "e"], default="2", help="VI log base")
    p.set_defaults(handler=_eval)

    p = commands.add_parser("sweep", help="Solve a grid for several p* and d*")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--probs", required=True)
    p.add_argument("--pstar", type=_probability, nargs="+", default=[DEFAULT_P_STAR])
    p.add_argument("--dstar", type=int, nargs="+", default=list(IMAGE_D_STARS))
    p.add_argument("--clamp-eps", type=float, default=DEFAULT_CLAMP_EPS)
    p.add_argument("--pixel-rule", choices=PIXEL_RULES, default=DEFAULT_PIXEL_RULE)
    p.add_argument("--algo", choices=algorithms(), default="gaec-klj")
    p.add_argument("--truth", help="Ground truth partition, adds VI columns")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(handler=_sweep)
    return parser


def main(argv: list[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return e.code or EXIT_OK
    try:
        configure_logging(args.log_level)
        return args.handler(args)
    except formats.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except LiftedMulticutException as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
