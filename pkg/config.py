"""
Configuration settings for the anyon phase-transition toolkit.
"""
import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Numerical tolerances
ANYON_TOL = float(os.getenv("ANYON_TOL", "1e-9"))
INT_RESIDUAL = float(os.getenv("ANYON_INT_RESIDUAL", "1e-6"))
PROPORTIONAL_TOL = float(os.getenv("ANYON_PROPORTIONAL_TOL", "1e-6"))

# Group and sweep limits
MAX_GROUP_ORDER = int(os.getenv("ANYON_MAX_GROUP_ORDER", "64"))
SWEEP_WORKERS = int(os.getenv("ANYON_SWEEP_WORKERS", "4"))

# Repair search bound for run_auto
MAX_REPAIR_REMOVALS = 2

# Bundled transition scripts
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
SCRIPTS_DIR = os.getenv("ANYON_SCRIPTS_DIR", os.path.join(BASE_DIR, "transition_scripts"))

LOG_LEVEL = os.getenv("ANYON_LOG_LEVEL", "WARNING")

# Service
PORT = int(os.getenv("PORT", "8000"))
APP_VERSION = "1.0.0"


def configure_logging(level: str = None):
    """Configure root logging once for CLI and service entry points."""
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    # numpy-heavy sweeps log per cell at DEBUG; keep the pool quiet by default
    logging.getLogger("concurrent.futures").setLevel(logging.WARNING)
