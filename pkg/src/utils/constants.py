import os
from dotenv import load_dotenv

from src.utils.exceptions import InvalidInput

load_dotenv()


def _env(name: str, default, cast):
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return cast(value)
    except ValueError:
        raise InvalidInput(f"Environment variable {name} must be {cast.__name__}, got {value!r}")


def env_int(name: str, default: int) -> int:
    return _env(name, default, int)


def env_float(name: str, default: float) -> float:
    return _env(name, default, float)


SCHEMA_VERSION = "surface-rigidity/1"

# Size caps for the exponential routines
MAX_ISOMORPHISM_VERTICES = env_int("SURFACE_RIGIDITY_ISO_MAX_N", 10)
MAX_ORACLE_VERTICES = env_int("SURFACE_RIGIDITY_ORACLE_MAX_N", 12)
MAX_BRUTE_FORCE_TREE_VERTICES = 6
MAX_ENUMERATION_VERTICES = 8

# Worker threads for verification fan-out
THREADS = max(1, env_int("SURFACE_RIGIDITY_THREADS", os.cpu_count() or 1))

# Rank and sampling
FLOAT_RANK_TOL = env_float("SURFACE_RIGIDITY_FLOAT_TOL", 1e-9)
DEFAULT_TRIALS = 3
SAMPLER_MAX_RETRIES = 20
MIN_POINT_SEPARATION = 1e-3
SAMPLE_DENOMINATOR = 97
SAMPLE_NUMERATOR_RANGE = 300

# Newton projection and flex continuation
PROJECTION_TOL = 1e-12
NEWTON_MAX_ITER = 25
STEP_HALVINGS = 6
DEFAULT_STEP_SIZE = 0.01
EDGE_DRIFT_TOL = 1e-9
SURFACE_DRIFT_TOL = 1e-12
WITNESS_DELTA = 1e-6

# Exit codes
EXIT_OK = 0
EXIT_PROPERTY_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_DISAGREEMENT = 3

surface_kind_map = {
    "planes": "ParallelPlanes",
    "spheres": "ConcentricSpheres",
    "cylinders": "ConcentricCylinders",
}
