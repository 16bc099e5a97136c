"""
Application configuration management
"""
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

ENV_PREFIX = "LEGENDRE_"

load_dotenv()


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(ENV_PREFIX + name.upper(), str(default)))


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(ENV_PREFIX + name.upper(), repr(default)))


def _env_path(name: str, default: Path) -> Path:
    value = os.getenv(ENV_PREFIX + name.upper())
    return Path(value) if value else default


@dataclass
class Config:
    """Centralized configuration management"""

    # Sampling
    curve_samples: int = field(default_factory=lambda: _env_int("curve_samples", 2048))
    lift_samples: int = field(default_factory=lambda: _env_int("lift_samples", 512))
    conjugate_grid: int = field(default_factory=lambda: _env_int("conjugate_grid", 4096))
    biconjugate_grid: int = field(default_factory=lambda: _env_int("biconjugate_grid", 1024))
    max_flat_order: int = 8

    # Tolerances
    golden_xtol: float = field(default_factory=lambda: _env_float("golden_xtol", 1e-10))
    inflection_root_tol: float = field(default_factory=lambda: _env_float("inflection_root_tol", 1e-10))
    inflection_degenerate_tol: float = field(
        default_factory=lambda: _env_float("inflection_degenerate_tol", 1e-6))
    singular_tol: float = field(default_factory=lambda: _env_float("singular_tol", 1e-8))
    limit_rel_tol: float = field(default_factory=lambda: _env_float("limit_rel_tol", 1e-6))
    convexity_tol: float = 0.0
    contact_tol: float = field(default_factory=lambda: _env_float("contact_tol", 1e-9))
    p_prime_spread_tol: float = field(default_factory=lambda: _env_float("p_prime_spread_tol", 1e-8))
    sin_psi_tol: float = field(default_factory=lambda: _env_float("sin_psi_tol", 1e-12))
    zero_set_tol: float = 1e-9

    # Application Settings
    APP_NAME: str = "Legendre Duality Toolkit"
    VERSION: str = "1.0.0"
    DEBUG_MODE: bool = field(default_factory=lambda: os.getenv("DEBUG", "false").lower() == "true")

    # Input limits
    MAX_EXPRESSION_LENGTH: int = field(default_factory=lambda: _env_int("max_expression_length", 2000))
    CSV_DIGITS: int = 12

    # File Paths
    PROJECT_ROOT: Path = Path(__file__).parent
    OUTPUT_DIR: Path = field(default_factory=lambda: _env_path("output_dir", Path.cwd() / "out"))
    LOGS_DIR: Path = field(default_factory=lambda: _env_path("logs_dir", Path.cwd() / "logs"))

    def ensure_directories(self) -> None:
        """Create output and log directories"""
        self.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
        self.LOGS_DIR.mkdir(parents=True, exist_ok=True)

    def to_dict(self) -> dict[str, Any]:
        """Convert config to dictionary"""
        return {f.name: getattr(self, f.name) for f in fields(self) if not f.name.startswith("_")}

    def validate(self) -> bool:
        """Validate configuration settings"""
        counts = (self.curve_samples, self.lift_samples, self.conjugate_grid, self.biconjugate_grid)
        if any(n < 8 for n in counts):
            return False

        tolerances = (
            self.golden_xtol, self.inflection_root_tol, self.inflection_degenerate_tol,
            self.singular_tol, self.limit_rel_tol, self.contact_tol,
            self.p_prime_spread_tol, self.sin_psi_tol, self.zero_set_tol,
        )
        if any(tol <= 0 for tol in tolerances):
            return False

        return self.MAX_EXPRESSION_LENGTH > 0 and self.max_flat_order >= 3


default_config = Config()
