import logging

import pytest
from hypothesis import HealthCheck, settings

from dcmicro.sequence import RegularSequence

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def g2():
    return RegularSequence.gevrey(2.0)


@pytest.fixture(autouse=True)
def _quiet_numeric_warnings(caplog):
    caplog.set_level(logging.ERROR, logger="dcmicro")
