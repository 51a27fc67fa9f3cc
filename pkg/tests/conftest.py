"""Pytest configuration and fixtures for the hdx toolkit"""
import pytest

from app.hdx.complex import FaceFunction
from app.hdx.config import reset_settings
from app.hdx.generators import generate_complete_complex, generate_hypercube_complex, make_rng

# ============================================================================
# PYTEST CONFIGURATION & MARKERS
# ============================================================================


def pytest_configure(config):
    """Register custom markers"""
    config.addinivalue_line("markers", "unit: mark test as a unit test (fast, <1s)")
    config.addinivalue_line("markers", "integration: mark test as an integration test (runs the CLI or a sweep)")
    config.addinivalue_line("markers", "slow: mark test as slow (trend sweeps)")
    config.addinivalue_line("markers", "smoke: mark test as a smoke test")


# ============================================================================
# COMPLEX FIXTURES
# ============================================================================


@pytest.fixture(scope="session")
def k3():
    """Complete complex on 3 vertices with top faces of size 2 (the triangle)."""
    return generate_complete_complex(3, 2)


@pytest.fixture(scope="session")
def k4():
    """Complete complex on 4 vertices with top faces of size 3."""
    return generate_complete_complex(4, 3)


@pytest.fixture(scope="session")
def complete_6_2():
    return generate_complete_complex(6, 2)


@pytest.fixture(scope="session")
def complete_7_3():
    return generate_complete_complex(7, 3)


@pytest.fixture(scope="session")
def hypercube_3():
    return generate_hypercube_complex(3)


# ============================================================================
# FUNCTION FIXTURES
# ============================================================================


@pytest.fixture
def vertex_indicator(k3):
    """1 on vertex 0 of K3, level 1."""
    return FaceFunction.indicator(k3, 1, [(0,)])


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def random_function(complete_7_3, rng):
    return FaceFunction(complete_7_3, 2, rng.standard_normal(complete_7_3.size(2)))


# ============================================================================
# ENVIRONMENT FIXTURES
# ============================================================================


@pytest.fixture
def out_dir(tmp_path):
    """Fresh output directory for reports"""
    path = tmp_path / "out"
    path.mkdir()
    return path


@pytest.fixture(autouse=True)
def reset_cached_settings(monkeypatch):
    """Every test starts from default settings; HDX_* variables set by a test are dropped afterwards"""
    for name in ("HDX_CACHE_DIR", "HDX_MAX_FACES", "HDX_SUM_TOL", "HDX_LOG_LEVEL", "HDX_JSON_LOGS"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


# ============================================================================
# PYTEST HOOKS
# ============================================================================


def pytest_collection_modifyitems(config, items):
    """Auto-mark tests based on their location"""
    for item in items:
        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)
        elif "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
