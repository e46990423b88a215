import numpy as np
import pytest

from hymac.domain import ClassConfig, TimingConstants


@pytest.fixture
def tc() -> TimingConstants:
    return TimingConstants()


@pytest.fixture
def small_cfg() -> ClassConfig:
    return ClassConfig(class_sizes=(30,), p_inl=0.05, alpha=1.0, arrival_rate=0.2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
