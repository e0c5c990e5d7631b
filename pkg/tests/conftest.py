"""Shared fixtures: a clean LabContext per test and a throwaway output directory."""

from __future__ import annotations

import numpy as np
import pytest

from moyal_lab import config
from moyal_lab.config import set_lab_context
from moyal_lab.moyal.params import MoyalParams


@pytest.fixture(autouse=True)
def fresh_context():
    set_lab_context(None)
    yield
    set_lab_context(None)


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    """Point MOYAL_LAB_OUTPUT_DIR at tmp_path for artifacts written without --out."""
    monkeypatch.setattr(config, "OUTPUT_DIR", tmp_path / "out")
    return tmp_path / "out"


@pytest.fixture
def plane() -> MoyalParams:
    return MoyalParams(theta=1.0, dim=2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
