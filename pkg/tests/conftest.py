import ccsp
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=80,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(autouse=True)
def fresh_caches():
    # Memo tables are process-global; start every test clean so a test that
    # patches a semantic operator can never leak stale sets into another.
    ccsp.clear_caches()
    yield
