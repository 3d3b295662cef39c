"""Shared fixtures: coefficient tables are expensive, so build them once."""

import pytest

from oscbath.bath import BathSpec, build_coefficient_table
from oscbath.model import (
    SystemParams,
    effective_frequencies,
    expand_to_phase_space,
    mode_transform,
)


@pytest.fixture(scope="session")
def default_bath():
    return BathSpec()


@pytest.fixture(scope="session")
def params_uncoupled():
    return SystemParams(n_modes=3)


@pytest.fixture(scope="session")
def params_coupled():
    return SystemParams(n_modes=3, coupling=0.8)


@pytest.fixture(scope="session")
def freqs_uncoupled(params_uncoupled):
    return effective_frequencies(params_uncoupled)


@pytest.fixture(scope="session")
def freqs_coupled(params_coupled):
    return effective_frequencies(params_coupled)


@pytest.fixture(scope="session")
def table_uncoupled(default_bath, freqs_uncoupled):
    return build_coefficient_table(default_bath, freqs_uncoupled, t_max=30.0, dt=1e-3)


@pytest.fixture(scope="session")
def table_coupled(default_bath, freqs_coupled):
    return build_coefficient_table(default_bath, freqs_coupled, t_max=30.0, dt=1e-3)


@pytest.fixture(scope="session")
def phase_transform_3():
    return expand_to_phase_space(mode_transform(3))
