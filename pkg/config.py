"""
Configuration settings for the monogenic Bloch toolkit
"""

import os
import logging
from fractions import Fraction
from typing import Dict, Any, List

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

_handlers: List[logging.Handler] = [logging.StreamHandler()]
if os.getenv('LOG_FILE'):
    _handlers.append(logging.FileHandler(os.getenv('LOG_FILE')))

# Configure logging
logging.basicConfig(
    level=os.getenv('LOG_LEVEL', 'INFO'),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=_handlers
)

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.3.0"


class ConfigError(Exception):
    """Custom exception for configuration errors"""
    pass


def get_env_variable(name: str, default: Any = None, required: bool = False) -> str:
    """Get environment variable with error handling"""
    value = os.getenv(name, default)
    if required and value is None:
        raise ConfigError(f"Required environment variable {name} is not set")
    return value


def _int_setting(name: str, default: str) -> int:
    raw = get_env_variable(name, default)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {raw!r}")


# High-precision evaluation
PRECISION_DIGITS: int = _int_setting('TOOL_PRECISION_DIGITS', '50')

# Run defaults
CONFIG: Dict[str, Any] = {
    "degree_max": 6,
    "radius": Fraction(1),
    "seed": 42,
    "basis_degree_cap": 12,
    # sphere sampling used by the maximum modulus search
    "sphere_points": 4096,
    "refinement_rounds": 3,
    "refinement_shrink": 0.25,
    "refinement_candidates": 8,
    "refinement_steps": 20,
    # sweeps
    "pointwise_samples": 10_000,
    "lemma_functions": 50,
    "lemma_degree_max": 8,
    "lemma_directions": 64,
    "lemma_radii": [round(0.05 * k, 2) for k in range(1, 17)],
    "fourier_functions": 20,
    "probe_functions": 20,
    "probe_boundary_samples": 1000,
    "probe_perturbation": 0.05,
    "probe_degree_max": 4,
    "g_grid_points": 999,
}

# Validate configuration
if PRECISION_DIGITS < 20:
    error_msg = f"TOOL_PRECISION_DIGITS ({PRECISION_DIGITS}) must be at least 20"
    logger.error(error_msg)
    raise ConfigError(error_msg)

if CONFIG["degree_max"] > CONFIG["basis_degree_cap"]:
    error_msg = (f"degree_max ({CONFIG['degree_max']}) cannot exceed "
                 f"basis_degree_cap ({CONFIG['basis_degree_cap']})")
    logger.error(error_msg)
    raise ConfigError(error_msg)

logger.debug(f"Precision digits: {PRECISION_DIGITS}")
logger.debug(f"Default degree_max: {CONFIG['degree_max']}, seed: {CONFIG['seed']}")
