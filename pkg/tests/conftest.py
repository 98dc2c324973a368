from unittest.mock import patch

import numpy as np
import pytest
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter

from qctlearn.arch.graph import ArchGraph, build_grid, load_bundled
from qctlearn.circuit.ir import Circuit
from qctlearn.policy.network import PolicyModel
from qctlearn.telemetry import TelemetryManager

def pytest_addoption(parser):
    parser.addoption(
        "--run-slow", action="store_true", default=False, help="run slow acceptance tests"
    )

def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as a slow acceptance run")

def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        # --run-slow given in cli: do not skip slow tests
        return
    skip_slow = pytest.mark.skip(reason="need --run-slow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def grid2x3() -> ArchGraph:
    # column-major: edges (0,1) (0,2) (1,3) (2,3) (2,4) (3,5) (4,5)
    return build_grid(2, 3)

@pytest.fixture
def grid4x4() -> ArchGraph:
    return build_grid(4, 4)

@pytest.fixture
def tokyo() -> ArchGraph:
    return load_bundled("tokyo")

@pytest.fixture
def triangle() -> ArchGraph:
    return ArchGraph(3, [(0, 1), (1, 2), (0, 2)], name="triangle")

@pytest.fixture
def fig6_circuit() -> Circuit:
    """Five layers on Grid 2x3; front gate (1,5), last gate (0,2). Needs exactly 2 swaps."""
    return Circuit.from_pairs(6, [(1, 5), (1, 2), (2, 4), (2, 3), (0, 2)])

@pytest.fixture
def uniform_model(grid2x3: ArchGraph) -> PolicyModel:
    # zero final layer: every edge gets 1/|E|
    return PolicyModel.initialize(grid2x3, n_l=3, hidden=(8,), seed=0)

@pytest.fixture
def random_model(grid2x3: ArchGraph) -> PolicyModel:
    model = PolicyModel.initialize(grid2x3, n_l=3, hidden=(16,), seed=1)
    rng = np.random.default_rng(7)
    model.weights[-1][...] = rng.normal(0.0, 1.0, size=model.weights[-1].shape)
    model.biases[-1][...] = rng.normal(0.0, 0.5, size=model.biases[-1].shape)
    return model

@pytest.fixture
def spans():
    """Finished spans of the shared TelemetryManager, collected in memory."""
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    telemetry = TelemetryManager()
    with patch.object(telemetry, "enabled", True), patch.object(telemetry, "tracer", provider.get_tracer("test")):
        yield exporter
