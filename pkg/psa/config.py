import os
from typing import Dict, Any


def _default_threads() -> str:
    return str(os.cpu_count() or 1)


class Config:
    """Configuration management for the pseudospectral abscissa toolkit"""

    # Environment
    DEBUG = os.getenv("DEBUG", "false").lower() == "true"
    ENVIRONMENT = os.getenv("ENVIRONMENT", "development")

    # Parallelism
    PSA_THREADS = int(os.getenv("PSA_THREADS", _default_threads()))

    # Fixed-point defaults
    DEFAULT_TOL = float(os.getenv("PSA_TOL", "1e-8"))
    DEFAULT_MAX_ITER = int(os.getenv("PSA_MAX_ITER", "300"))
    DEFAULT_RESTARTS = int(os.getenv("PSA_RESTARTS", "1"))
    INNER_MAX = int(os.getenv("PSA_INNER_MAX", "50"))
    STAGNATION_WINDOW = 20
    STAGNATION_RTOL = 1e-6

    # Diagnostics thresholds
    SIMPLICITY_GAP_TOL = 1e-8
    RBVT_TOL_S = 1e-6
    RBVT_TOL_B_FACTOR = 1e-6
    EIGVEC_INNER_TOL = 1e-10  # |y*x| below this marks a near-defective eigenvalue
    SENSITIVITY_TOL = 1e-12   # |y*T'x| relative to ||T'||_F

    # Oracle defaults
    GRID_N = int(os.getenv("PSA_GRID_N", "201"))
    GRID_REFINE_DEPTH = int(os.getenv("PSA_GRID_REFINE_DEPTH", "4"))
    CRISSCROSS_TOL = 1e-10

    # Input limits
    MM_MAX_DIM = int(os.getenv("PSA_MM_MAX_DIM", "5000"))

    # Logging Configuration
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FORMAT = os.getenv("LOG_FORMAT", "standard")
    LOG_FILE = os.getenv("LOG_FILE", "")

    # Available algorithms, as selected by `--alg`
    AVAILABLE_ALGORITHMS = {
        "fp-nep": {
            "kind": "fixed_point",
            "problem": "nep",
            "termination": "absolute_complex",
            "description": "Fixed-point iteration for matrix-valued functions with weighted block perturbations",
        },
        "fp-nep-const": {
            "kind": "fixed_point",
            "problem": "nep",
            "termination": "absolute_complex",
            "description": "Fixed-point iteration under constant perturbations of the last block",
        },
        "fp-nep-scaled": {
            "kind": "fixed_point",
            "problem": "nep",
            "termination": "absolute_complex",
            "description": "Fixed-point iteration on the scaled function T/g with constant perturbations",
        },
        "fp-matrix": {
            "kind": "fixed_point",
            "problem": "matrix",
            "termination": "relative_real",
            "description": "Fixed-point iteration for the pseudospectral abscissa of a matrix",
        },
        "first-order": {
            "kind": "estimate",
            "problem": "any",
            "description": "First-order eigenvalue perturbation estimate",
        },
        "second-order": {
            "kind": "estimate",
            "problem": "matrix",
            "description": "Second-order eigenvalue perturbation estimate (matrices only)",
        },
        "grid": {
            "kind": "oracle",
            "problem": "any",
            "description": "Brute-force grid search with refinement and root polish",
        },
        "crisscross": {
            "kind": "oracle",
            "problem": "matrix",
            "description": "Criss-cross vertical/horizontal boundary searches (matrices only)",
        },
    }

    @classmethod
    def get_algorithm_config(cls, name: str) -> Dict[str, Any]:
        """Get configuration for a specific algorithm"""
        if name not in cls.AVAILABLE_ALGORITHMS:
            raise ValueError(
                f"Algorithm '{name}' not found. Available: {sorted(cls.AVAILABLE_ALGORITHMS)}"
            )
        return cls.AVAILABLE_ALGORITHMS[name]

    @classmethod
    def validate_config(cls) -> bool:
        """Validate configuration settings"""
        errors = []

        if cls.PSA_THREADS < 1:
            errors.append(f"PSA_THREADS must be >= 1, got {cls.PSA_THREADS}")
        if cls.DEFAULT_TOL <= 0:
            errors.append(f"PSA_TOL must be positive, got {cls.DEFAULT_TOL}")
        if cls.DEFAULT_MAX_ITER < 1:
            errors.append(f"PSA_MAX_ITER must be >= 1, got {cls.DEFAULT_MAX_ITER}")
        if cls.DEFAULT_RESTARTS < 1:
            errors.append(f"PSA_RESTARTS must be >= 1, got {cls.DEFAULT_RESTARTS}")
        if cls.GRID_N < 2:
            errors.append(f"PSA_GRID_N must be >= 2, got {cls.GRID_N}")
        if cls.MM_MAX_DIM < 1:
            errors.append(f"PSA_MM_MAX_DIM must be >= 1, got {cls.MM_MAX_DIM}")
        if cls.LOG_FORMAT not in ("json", "standard", "colored"):
            errors.append(f"LOG_FORMAT must be json, standard or colored, got '{cls.LOG_FORMAT}'")

        if errors:
            raise ValueError(f"Configuration validation failed: {'; '.join(errors)}")

        return True

    @classmethod
    def get_log_config(cls) -> Dict[str, Any]:
        """Get logging configuration"""
        formatter = cls.LOG_FORMAT if cls.LOG_FORMAT in ("json", "colored") else "standard"
        handlers: Dict[str, Any] = {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": formatter,
                "level": cls.LOG_LEVEL,
                "stream": "ext://sys.stderr",
            }
        }
        if cls.LOG_FILE:
            handlers["file"] = {
                "class": "logging.handlers.RotatingFileHandler",
                "filename": cls.LOG_FILE,
                "maxBytes": 10485760,  # 10MB
                "backupCount": 5,
                "formatter": "json" if cls.LOG_FORMAT == "json" else "standard",
                "level": cls.LOG_LEVEL,
            }

        return {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "json": {
                    "class": "pythonjsonlogger.jsonlogger.JsonFormatter",
                    "format": "%(asctime)s %(name)s %(levelname)s %(message)s",
                },
                "colored": {
                    "()": "coloredlogs.ColoredFormatter",
                    "fmt": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                    "datefmt": "%H:%M:%S",
                },
                "standard": {
                    "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                },
            },
            "handlers": handlers,
            "root": {
                "level": cls.LOG_LEVEL,
                "handlers": list(handlers),
            },
        }

    @classmethod
    def create_directories(cls):
        """Create necessary directories"""
        if cls.LOG_FILE:
            log_dir = os.path.dirname(cls.LOG_FILE)
            if log_dir:
                os.makedirs(log_dir, exist_ok=True)
