"""
Centralized path and config constants.

All modules that need PROJECT_ROOT, CONFIG_FILE or the packaged defaults
should import from here.
"""

from __future__ import annotations

from pathlib import Path

from dotenv import load_dotenv

# ---------------------------------------------------------------------------
# Project structure
# ---------------------------------------------------------------------------

PACKAGE_DIR = Path(__file__).resolve().parent
PROJECT_ROOT = PACKAGE_DIR.parent
CONFIG_FILE = PROJECT_ROOT / "moyal_lab.env"
DEFAULTS_FILE = PACKAGE_DIR / "defaults.yaml"

# Load config once at import time (before reading env vars that may be in the file)
load_dotenv(CONFIG_FILE)
