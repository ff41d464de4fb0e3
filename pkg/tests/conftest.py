import numpy as np
import pytest

from hankelcomp.errors import DatasetMissingError
from hankelcomp.experiments.data import load_dataset


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


def dataset_or_skip(name):
    try:
        return load_dataset(name)
    except DatasetMissingError as exc:
        pytest.skip(f"dataset {name!r} unavailable: {exc}")


@pytest.fixture
def deaths():
    return dataset_or_skip("deaths")


@pytest.fixture
def wine():
    return dataset_or_skip("wine")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
