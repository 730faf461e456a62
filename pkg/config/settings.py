import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

class Settings:
    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("LOG_FILE", "")

    # Enumeration
    DEFAULT_DEPTH = int(os.getenv("DEFAULT_DEPTH", "6"))
    MAX_DEPTH = int(os.getenv("MAX_DEPTH", "12"))
    DEFAULT_BOUNDARY = os.getenv("DEFAULT_BOUNDARY", "gamma0")

    # Reports
    DEFAULT_FORMAT = os.getenv("DEFAULT_FORMAT", "json")  # 'json' or 'csv'
    INCLUDE_TIMINGS = os.getenv("INCLUDE_TIMINGS", "false").lower() == "true"

    # Numerical tolerances
    TOL_RESIDUAL_ABS = float(os.getenv("TOL_RESIDUAL_ABS", "1e-9"))
    TOL_COMPARE_REL = float(os.getenv("TOL_COMPARE_REL", "1e-7"))
    TOL_PD_MARGIN = float(os.getenv("TOL_PD_MARGIN", "1e-9"))
    TOL_CONDITION_CAP = float(os.getenv("TOL_CONDITION_CAP", "1e12"))

    @classmethod
    def validate(cls):
        """Validate settings"""
        problems = []

        for name in ("TOL_RESIDUAL_ABS", "TOL_COMPARE_REL", "TOL_PD_MARGIN"):
            if not getattr(cls, name) > 0:
                problems.append(f"{name} must be positive")
        if not cls.TOL_CONDITION_CAP > 1:
            problems.append("TOL_CONDITION_CAP must exceed 1")
        if cls.DEFAULT_FORMAT not in ("json", "csv"):
            problems.append(f"DEFAULT_FORMAT must be json or csv, got {cls.DEFAULT_FORMAT}")
        if cls.DEFAULT_BOUNDARY not in ("gamma0", "gamma1", "gamma2"):
            problems.append(f"DEFAULT_BOUNDARY must be gamma0, gamma1 or gamma2, got {cls.DEFAULT_BOUNDARY}")
        if not 0 <= cls.MAX_DEPTH <= 20:
            problems.append(f"MAX_DEPTH must lie in [0, 20], got {cls.MAX_DEPTH}")
        if not 0 <= cls.DEFAULT_DEPTH <= cls.MAX_DEPTH:
            problems.append(f"DEFAULT_DEPTH must lie in [0, {cls.MAX_DEPTH}]")

        if problems:
            raise ValueError(f"Invalid settings: {', '.join(problems)}")

        return True

settings = Settings()
