"""Configuration settings and error types for the planar algebra engine."""

import logging
import os
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Backend(Enum):
    """Ambient group backends."""
    CONCRETE = "concrete"
    FREE_PRODUCT = "free_product"


class Shading(Enum):
    """Checkerboard shading of a region."""
    UNSHADED = "unshaded"
    SHADED = "shaded"


class CriticalKind(Enum):
    """Critical points of a string in slice form."""
    MAX = "max"
    MIN = "min"


class CommutantFlavor(Enum):
    """Which relative commutant a commutant element lives in."""
    NCOMM = "ncomm"
    MCOMM = "mcomm"


class OutputFormat(Enum):
    """Output formats of the command line."""
    TEXT = "text"
    JSON = "json"


class SuiteName(Enum):
    """Verification suites."""
    TL = "tl"
    ASSOC = "assoc"
    STATESUM = "statesum"
    COMPOSE = "compose"
    ISO = "iso"
    BIPROJ = "biproj"
    GRAM = "gram"
    INTERMEDIATE = "intermediate"
    CALIBRATION = "calibration"
    ALL = "all"


class TangleKind(Enum):
    """Structural tangles."""
    IDENTITY = "identity"
    ANNULAR_IDENTITY = "annular_identity"
    MULTIPLICATION = "multiplication"
    INCLUSION = "inclusion"
    JONES = "jones"
    COND_EXP_RIGHT = "cond_exp_right"
    COND_EXP_LEFT = "cond_exp_left"
    CLOSURE = "closure"
    LEFT_CLOSURE = "left_closure"


class ElementaryFamily(Enum):
    """Elementary tangle families."""
    CAPPING = "capping"
    CAP_INCLUSION = "cap_inclusion"
    LEFT_INCLUSION = "left_inclusion"
    DISC_INCLUSION = "disc_inclusion"
    DISC_INCLUSION_PRIME = "disc_inclusion_prime"


class PlanarAlgebraError(Exception):
    """Base error of the engine."""


class GroupError(PlanarAlgebraError):
    """Invalid group data, embedding, or free-product word."""


class ScalarDomainError(PlanarAlgebraError):
    """Arithmetic outside the domain of a scalar operation."""


class TangleValidationError(PlanarAlgebraError):
    """A tangle that is not a valid slice-form tangle."""

    def __init__(self, message: str, row: Optional[int] = None, line: Optional[int] = None):
        self.message = message
        self.row = row
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if row is not None:
            where.append(f"row {row}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class StateSumError(PlanarAlgebraError):
    """Missing or invalid disc labels for an evaluation."""


class LevelMismatchError(PlanarAlgebraError):
    """Operands at different levels or of different flavors."""


class ConfigError(PlanarAlgebraError):
    """Malformed context configuration or command-line word."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


# Hard cap on the level n accepted by the command line
MAX_LEVEL_CAP = 5

# Longest reduced word allowed in free-product mode
FREE_PRODUCT_MAX_LENGTH = 64

# Gram eigenvalues above -tolerance count as nonnegative
GRAM_TOLERANCE = 1e-9

# Basis pairs sampled per sweep before switching to random sampling
DEFAULT_SAMPLE_SIZE = 400

# Labelings tried per composed tangle, and the largest color the composition sweep reaches
COMPOSE_SAMPLE_SIZE = 40
COMPOSE_MAX_LEVEL = 2

LOG_LEVEL_ENV = "GROUP_PLANAR_LOG_LEVEL"
DEBUG_ENV = "GROUP_PLANAR_DEBUG"


def _env_flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in ("1", "true", "yes", "on")


@dataclass
class EngineSettings:
    """Tunable engine settings."""

    max_level: int = 3
    free_product_max_length: int = FREE_PRODUCT_MAX_LENGTH
    # Re-check derived triviality on every state found
    debug_checks: bool = False
    gram_tolerance: float = GRAM_TOLERANCE
    sample_size: int = DEFAULT_SAMPLE_SIZE
    compose_sample_size: int = COMPOSE_SAMPLE_SIZE
    compose_max_level: int = COMPOSE_MAX_LEVEL
    seed: int = 0

    @classmethod
    def from_env(cls) -> "EngineSettings":
        return cls(debug_checks=_env_flag(DEBUG_ENV))

    def update(
        self,
        max_level: Optional[int] = None,
        seed: Optional[int] = None,
        sample_size: Optional[int] = None,
    ) -> None:
        """Update settings from command-line values, clamped to the allowed range."""
        if max_level is not None:
            self.max_level = max(0, min(MAX_LEVEL_CAP, max_level))
        if seed is not None:
            self.seed = max(0, seed)
        if sample_size is not None:
            self.sample_size = max(1, sample_size)


def configure_logging(verbosity: int = 0) -> None:
    """Configure the root logger; the environment level wins over -v flags."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    env_level = os.getenv(LOG_LEVEL_ENV)
    if env_level:
        level = getattr(logging, env_level.upper(), level)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
