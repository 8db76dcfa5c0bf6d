import numpy as np
import pytest

from osnrgame import (
    PlayerParams,
    SeekerParams,
    ServicePartition,
    SystemMatrix,
    assemble,
)

GAMMA_A = np.array([[0.001, 0.002], [0.002, 0.001]])
N0_A = np.array([0.01, 0.01])


@pytest.fixture
def fixture_a():
    """Canonical 2-channel instance: one player, one 100x target seeker."""
    sysm = SystemMatrix(gamma=GAMMA_A.copy(), n0=N0_A.copy())
    partition = ServicePartition(
        roles=(PlayerParams(alpha=1.0, beta=2.0, a=0.01), SeekerParams(gamma=100.0))
    )
    return sysm, partition, assemble(sysm, partition)


@pytest.fixture
def fixture_a_prime():
    """Fixture A with a large player parameter so the bound preconditions hold."""
    sysm = SystemMatrix(gamma=GAMMA_A.copy(), n0=N0_A.copy())
    partition = ServicePartition(
        roles=(PlayerParams(alpha=1.0, beta=1.0, a=2.5), SeekerParams(gamma=100.0))
    )
    return sysm, partition, assemble(sysm, partition)


@pytest.fixture
def fixture_b():
    """Synthetic empty-feasible-set instance: player row parallel to the
    (strictly violated) seeker constraint boundary."""
    return (
        np.array([[1.0, 1.0]]),
        np.array([1.0]),
        np.array([[1.0, 1.0]]),
        np.array([2.0]),
    )
