import pytest
from hypothesis import HealthCheck, settings

from plane_lct.gen import cusp, example_figure1

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex17():
    return example_figure1()


@pytest.fixture(scope="session")
def cusp_spec():
    return cusp()
