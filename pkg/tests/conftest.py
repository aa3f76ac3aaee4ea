from __future__ import annotations

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from euler_fpt.formats import load_graph
from euler_fpt.graph import Graph

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def instance_path():
    def _path(name: str) -> str:
        return str(INSTANCES / name)

    return _path


@pytest.fixture
def bowtie() -> Graph:
    return load_graph(str(INSTANCES / "bowtie.graph"))


@pytest.fixture
def k4() -> Graph:
    return load_graph(str(INSTANCES / "k4.graph"))


@pytest.fixture(autouse=True)
def _no_user_config(monkeypatch, tmp_path):
    # A stray .euler.yaml in the working directory must not leak into tests.
    monkeypatch.delenv("EULER_FPT_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
