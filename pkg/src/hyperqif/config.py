"""Configuration loading for hyperqif."""

import os
from dataclasses import dataclass
from pathlib import Path

import yaml

# Tolerance for validating that a vector is a probability distribution.
EPS_NORM = 1e-9
# Tolerance for LP feasibility of refinement checks.
EPS_FEAS = 1e-7
# Lower clamp applied before taking -log2 in reports.
BITS_FLOOR = 1e-300
DEFAULT_SEED = 20170607
SCHEMA_TAG = "hyperqif/1"
# Significant digits of every float written to a document or printed in a table.
SIGNIFICANT_DIGITS = 12


@dataclass
class Settings:
    """Application settings."""

    norm_tolerance: float = EPS_NORM
    feasibility_tolerance: float = EPS_FEAS
    seed: int = DEFAULT_SEED
    max_bad_rows: int = 0
    log_level: str = "WARNING"
    selftest_instances: int = 200

    @classmethod
    def from_env(cls) -> "Settings":
        """Load settings from environment variables."""
        settings = cls()
        settings._apply_env()
        return settings

    @classmethod
    def from_file(cls, path: Path) -> "Settings":
        """Load settings from a YAML file, with env var overrides."""
        settings = cls()

        if path.exists():
            with open(path) as f:
                data = yaml.safe_load(f)

            if data and "tolerances" in data:
                tol = data["tolerances"]
                settings.norm_tolerance = float(tol.get("norm", settings.norm_tolerance))
                settings.feasibility_tolerance = float(
                    tol.get("feasibility", settings.feasibility_tolerance)
                )

            if data and "corpus" in data:
                settings.max_bad_rows = int(
                    data["corpus"].get("max_bad_rows", settings.max_bad_rows)
                )

            if data and "selftest" in data:
                st = data["selftest"]
                settings.seed = int(st.get("seed", settings.seed))
                settings.selftest_instances = int(
                    st.get("instances", settings.selftest_instances)
                )

            if data and "logging" in data:
                settings.log_level = data["logging"].get("level", settings.log_level)

        settings._apply_env()
        return settings

    def _apply_env(self) -> None:
        if "HYPERQIF_SEED" in os.environ:
            self.seed = int(os.environ["HYPERQIF_SEED"])
        if "HYPERQIF_LOG_LEVEL" in os.environ:
            self.log_level = os.environ["HYPERQIF_LOG_LEVEL"]
        if "HYPERQIF_NORM_TOLERANCE" in os.environ:
            self.norm_tolerance = float(os.environ["HYPERQIF_NORM_TOLERANCE"])
        if "HYPERQIF_FEASIBILITY_TOLERANCE" in os.environ:
            self.feasibility_tolerance = float(os.environ["HYPERQIF_FEASIBILITY_TOLERANCE"])
        if "HYPERQIF_MAX_BAD_ROWS" in os.environ:
            self.max_bad_rows = int(os.environ["HYPERQIF_MAX_BAD_ROWS"])
