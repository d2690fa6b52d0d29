"""Shared fixtures"""

import json

import numpy as np
import pytest

from ball_integration import SphereSampling


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def small_sampling():
    """Coarser sphere sampling that keeps unit tests quick"""
    return SphereSampling(points=512, rounds=3, shrink=0.25, candidates=4, steps=20, seed=42)


@pytest.fixture
def write_spec(tmp_path):
    """Write a JSON document to a temporary file and return its path"""
    def _write(data, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write
