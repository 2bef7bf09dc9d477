import itertools
import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def oracle_s(k, kappa):
    """s_k straight from its definition as a sum over k-subsets."""
    if k == 0:
        return 1.0
    return sum(math.prod(c) for c in itertools.combinations(list(kappa), k))


def oracle_f(name, kappa):
    """Independent evaluation of the built-in families on an eigenvalue tuple."""
    kappa = [float(x) for x in kappa]
    kind = name[0]
    if name.startswith("ratio:"):
        k, l = (int(x) for x in name.split(":")[1:])
        return (oracle_s(k, kappa) / oracle_s(l, kappa)) ** (1.0 / (k - l))
    k = int(name[1:])
    if kind == "p":
        return sum(x ** k for x in kappa)
    if kind == "s":
        return oracle_s(k, kappa)
    if kind == "q":
        return oracle_s(k, kappa) / oracle_s(k - 1, kappa)
    raise ValueError(name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
