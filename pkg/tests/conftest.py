"""Shared fixtures: a one-time JIT warm-up for timing-sensitive tests."""

import pytest

from minsos import tracking


@pytest.fixture(scope="session")
def warm_backend():
    """Compile (or load from cache) the tracking kernels once per session.

    Timing assertions must not charge compilation to the measured run, so
    every test that asserts a wall-clock budget depends on this fixture.
    Returns the active backend name ("numba" or "numpy").
    """
    return tracking.warm_up()
