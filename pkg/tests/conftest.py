import numpy as np
import pytest

from xebkit.circuit import Circuit, Gate, GateKind, LatticeSpec, Variant


def hand_circuit(lattice, cycles, variant=Variant.SEC4, seed=0):
    """Small helper for literal test circuits."""
    return Circuit(lattice, seed, variant, tuple(tuple(c) for c in cycles))


@pytest.fixture
def bell_like():
    """[H x H, CZ] on a 1x2 lattice: (|00>+|01>+|10>-|11>)/2."""
    lat = LatticeSpec(1, 2)
    return hand_circuit(
        lat,
        [
            [Gate(GateKind.H, (0,)), Gate(GateKind.H, (1,))],
            [Gate(GateKind.CZ, (0, 1))],
        ],
    )


def dense_reference_apply(amps, u, q, n):
    """Independent oracle: full 2^n matrix built by Kronecker products."""
    full = np.kron(np.kron(np.eye(1 << (n - 1 - q)), u), np.eye(1 << q))
    return full @ amps


def random_amps(n, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    amps /= np.linalg.norm(amps)
    return amps
