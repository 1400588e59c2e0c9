import logging
import os


class LiftedMulticutException(Exception):
    """Base class for liftedmulticut exceptions."""

    pass


# Lifting defaults. Images: p* = 0.5 with d* in {5, 10, 20}. Meshes: p* = 0.55, d* = 70.
DEFAULT_P_STAR = 0.5
DEFAULT_D_STAR = 5
IMAGE_D_STARS = (5, 10, 20)
MESH_P_STAR = 0.55
MESH_D_STAR = 70
DEFAULT_CLAMP_EPS = 1e-6

# Pixel map to edge probability rules:
PIXEL_RULE_MEAN = "mean"
PIXEL_RULE_MAX = "max"
PIXEL_RULES = [PIXEL_RULE_MEAN, PIXEL_RULE_MAX]
DEFAULT_PIXEL_RULE = PIXEL_RULE_MEAN

# Solvers:
DEFAULT_EXACT_NODE_CAP = 10
DEFAULT_KLJ_MAX_ITERATIONS = 100
DEFAULT_TILE_SIZE = 30

# Environment variables:
ENV_EXACT_NODE_CAP = "LIFTEDMULTICUT_EXACT_NODE_CAP"
ENV_KLJ_MAX_ITERATIONS = "LIFTEDMULTICUT_KLJ_MAX_ITERATIONS"
ENV_LOG_LEVEL = "LIFTEDMULTICUT_LOG_LEVEL"


def int_setting(value: int, env_var: str, default: int) -> int:
    """Resolves an integer setting: explicit value, then env var, then default."""
    if value is not None:
        return value
    raw = os.environ.get(env_var)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise LiftedMulticutException(
            f"{env_var} must be an integer, got {raw!r}"
        ) from None


def configure_logging(level: str = None) -> None:
    """Installs a stderr handler on the root logger.

    Only the command line front end calls this; the library never configures
    handlers on its own.
    """
    level = (level or os.environ.get(ENV_LOG_LEVEL) or "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise LiftedMulticutException(f"Unknown log level: {level}")
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
