# tests/conftest.py
import pytest
from hypothesis import HealthCheck, settings

from src.core.generate import gen_random
from src.core.model import GraphInstance, Instance, InstanceKind

# Nested simulations are slow; examples are kept small instead of many
settings.register_profile(
    "kernelforge",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("kernelforge")


# --- Fixtures ---


@pytest.fixture
def e1():
    """Star family: every set contains element 1."""
    return Instance(d=2, n=4, k=1, family=[(1, 2), (1, 3), (1, 4)])


@pytest.fixture
def e2():
    return Instance(d=1, n=4, k=2, family=[(1,), (2,), (3,), (4,)])


@pytest.fixture
def e5():
    """Packing star: four pairs through element 1."""
    return Instance(
        kind=InstanceKind.SET_PACKING,
        d=2,
        n=5,
        k=2,
        family=[(1, 2), (1, 3), (1, 4), (1, 5)],
    )


@pytest.fixture
def triangle():
    return GraphInstance(n=3, k=1, edges=[(1, 2), (1, 3), (2, 3)])


@pytest.fixture
def path4():
    return GraphInstance(n=4, k=1, edges=[(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def k4():
    return GraphInstance(
        n=4, k=1, edges=[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    )


@pytest.fixture
def corpus():
    """
    Factory for seeded instances: corpus(kind, count, d=.., n=.., m=.., k=..)
    draws one instance per seed 0..count-1 with small varying sizes.
    """

    def _build(kind, count, *, d=2, n=7, m=12, k=2):
        built = []
        for seed in range(count):
            built.append(
                gen_random(
                    kind,
                    d=d,
                    n=n,
                    m=(seed * 7) % (m + 1),
                    k=seed % (k + 1),
                    seed=seed,
                )
            )
        return built

    return _build
