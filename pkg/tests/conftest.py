import math

import pytest

from app.geometry.catalog import catalog

HALF_PI = math.pi / 2


@pytest.fixture
def worked_example():
    return catalog("paper-example")


@pytest.fixture
def helix11():
    return catalog("circular-helix", (1.0, 1.0))


@pytest.fixture
def helix21():
    return catalog("circular-helix", (2.0, 1.0))


@pytest.fixture
def unit_circle():
    return catalog("circle", (1.0,))


def example_kappa(s: float) -> float:
    return math.sqrt(1 + math.cos(s) ** 2)


def example_tau(s: float) -> float:
    c2 = math.cos(s) ** 2
    return -math.sin(s) * (2 + c2) / (1 + c2)


def example_psi(s: float) -> float:
    # kappa^2 + tau^2 = (5 + 3c^2) / (1 + c^2)^2, (tau/kappa)' = -6c / (1 + c^2)^(5/2)
    c2 = math.cos(s) ** 2
    return -6 * math.cos(s) * ((1 + c2) / (5 + 3 * c2)) ** 1.5


def example_tangent(s: float) -> tuple[float, float, float]:
    return math.sin(s), math.sin(s) * math.cos(s), math.cos(s) ** 2
