import numpy as np
import pytest

from ckbackflow import CKParams, GaussianPacket, SuperposedState, TwoParticleState

# Reference parameter set used throughout (atomic units): sigma_p = 0.05
# (sigma_0 = 10), common center 0, kick momenta 1.4 / 0.3, alpha = 1.9.

SIGMA_P = 0.05
P0A = 1.4
P0B = 0.3
ALPHA = 1.9


@pytest.fixture
def packet_a():
    return GaussianPacket(x0=0.0, p0=P0A, sigma_p=SIGMA_P)


@pytest.fixture
def packet_b():
    return GaussianPacket(x0=0.0, p0=P0B, sigma_p=SIGMA_P)


@pytest.fixture
def free_params():
    return CKParams(gamma=0.0)


@pytest.fixture
def damped_params():
    return CKParams(gamma=0.3)


@pytest.fixture
def reference_state(packet_a, packet_b):
    return SuperposedState(packet_a, packet_b, alpha=ALPHA, theta=np.pi)


def stretched_state(eta: float, alpha: float = ALPHA, theta: float = np.pi):
    a = GaussianPacket(x0=0.0, p0=P0A, sigma_p=SIGMA_P, eta=eta)
    b = GaussianPacket(x0=0.0, p0=P0B, sigma_p=SIGMA_P, eta=eta)
    return SuperposedState(a, b, alpha=alpha, theta=theta)


@pytest.fixture
def pair_states(packet_a, packet_b):
    chi = SuperposedState(packet_a, packet_b, ALPHA, np.pi)
    phi = SuperposedState(packet_a, packet_b, ALPHA, 1.01 * np.pi)
    return chi, phi


@pytest.fixture
def boson_state(pair_states):
    chi, phi = pair_states
    return TwoParticleState(chi=chi, phi=phi, symmetry=1)


@pytest.fixture
def fermion_state(pair_states):
    chi, phi = pair_states
    return TwoParticleState(chi=chi, phi=phi, symmetry=-1)
