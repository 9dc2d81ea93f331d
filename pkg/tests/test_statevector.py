import numpy as np
import pytest

from xebkit.circuit import MATRIX, Gate, GateKind, LatticeSpec, generate_circuit
from xebkit.errors import CapacityError, ConfigError
from xebkit.rng import stream
from xebkit.statevector import (
    StateVector,
    amplitude,
    apply_circuit,
    apply_cz,
    apply_gate_matrix,
    apply_single_qubit,
    init_state,
    load_state,
    norm_sq,
    probabilities,
    run_circuit,
    sample,
    save_state,
)

SQRT_HALF = 1 / np.sqrt(2)


class TestInit:
    def test_one_qubit(self):
        s = init_state(1)
        assert np.array_equal(s.amps, [1, 0])

    def test_three_qubits(self):
        s = init_state(3)
        assert s.amps[0] == 1
        assert norm_sq(s) == 1.0

    def test_capacity(self):
        with pytest.raises(CapacityError):
            init_state(11, cap=10)
        with pytest.raises(ConfigError):
            init_state(0)


class TestGates:
    def test_h_on_zero(self):
        s = apply_single_qubit(init_state(1), GateKind.H, 0)
        assert np.allclose(s.amps, [SQRT_HALF, SQRT_HALF])

    def test_t_after_h(self):
        s = apply_single_qubit(init_state(1), GateKind.H, 0)
        apply_single_qubit(s, GateKind.T, 0)
        assert np.allclose(s.amps, [SQRT_HALF, SQRT_HALF * np.exp(1j * np.pi / 4)])

    def test_x_half_squares_to_x(self):
        s = init_state(1)
        apply_single_qubit(s, GateKind.X_HALF, 0)
        apply_single_qubit(s, GateKind.X_HALF, 0)
        assert abs(abs(s.amps[1]) ** 2 - 1.0) < 1e-12

    def test_cz_phases(self):
        for x in range(4):
            s = init_state(2)
            s.amps[0] = 0
            s.amps[x] = 1
            apply_cz(s, 0, 1)
            expect = -1 if x == 3 else 1
            assert s.amps[x] == expect

    def test_cz_involution(self):
        rng = np.random.default_rng(1)
        s = init_state(3)
        s.amps[:] = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        before = s.amps.copy()
        apply_cz(s, 0, 2)
        apply_cz(s, 0, 2)
        assert np.array_equal(s.amps, before)

    def test_unitarity_round_trips(self):
        s = init_state(4)
        s.amps[:] = np.random.default_rng(3).standard_normal(16)
        s.amps /= np.sqrt(norm_sq(s))
        before = s.amps.copy()
        apply_single_qubit(s, GateKind.H, 2)
        apply_single_qubit(s, GateKind.H, 2)
        t_dag = MATRIX[GateKind.T].conj().T
        apply_single_qubit(s, GateKind.T, 1)
        apply_gate_matrix(s, t_dag, 1)
        assert np.max(np.abs(s.amps - before)) < 1e-12

    def test_bad_qubit(self):
        with pytest.raises(ConfigError):
            apply_single_qubit(init_state(2), GateKind.H, 2)
        with pytest.raises(ConfigError):
            apply_cz(init_state(2), 1, 1)

    def test_specialized_vs_generic_diagonal(self):
        # the diag_unit fast path must agree with the generic 2x2 kernel
        for n in (3, 6, 10):
            for q in range(n):
                rng = np.random.default_rng(n * 17 + q)
                amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
                amps /= np.linalg.norm(amps)
                a = StateVector(n, amps.copy())
                b = StateVector(n, amps.copy())
                apply_single_qubit(a, GateKind.T, q)
                apply_gate_matrix(b, MATRIX[GateKind.T], q)
                assert np.max(np.abs(a.amps - b.amps)) < 1e-12


class TestCircuit:
    def test_bell_like(self, bell_like):
        s = run_circuit(bell_like)
        assert np.allclose(s.amps, [0.5, 0.5, 0.5, -0.5])
        assert np.allclose(probabilities(s), [0.25] * 4)
        assert amplitude(s, 3) == pytest.approx(-0.5)

    def test_dimension_mismatch(self, bell_like):
        with pytest.raises(ConfigError):
            apply_circuit(init_state(3), bell_like)

    def test_observer_contract(self):
        c = generate_circuit(LatticeSpec(2, 2), 7, 0)
        calls = []

        def obs(t, view):
            calls.append(t)
            with pytest.raises((ValueError, RuntimeError)):
                view[0] = 0

        run_circuit(c, obs)
        assert calls == list(range(c.num_cycles))

    def test_norm_preserved_deep(self):
        c = generate_circuit(LatticeSpec(4, 4), 20, 2)
        s = run_circuit(c)
        assert abs(norm_sq(s) - 1.0) < 1e-10

    def test_fused_matches_unfused(self):
        c = generate_circuit(LatticeSpec(4, 3), 16, 5)
        plain = run_circuit(c)
        fused = run_circuit(c, fuse=True)
        assert np.max(np.abs(plain.amps - fused.amps)) < 1e-12

    def test_amplitude_range(self, bell_like):
        s = run_circuit(bell_like)
        with pytest.raises(ConfigError):
            amplitude(s, 4)


class TestSampling:
    def test_delta(self):
        probs = np.zeros(8)
        probs[5] = 1.0
        out = sample(probs, 20, stream(0, "s"))
        assert np.all(out.bitstrings == 5)

    def test_uniform_frequencies(self):
        probs = np.full(4, 0.25)
        out = sample(probs, 100_000, stream(1, "s"))
        freqs = np.bincount(out.bitstrings, minlength=4) / out.m
        assert np.all(np.abs(freqs - 0.25) < 0.01)

    def test_deterministic(self):
        s = run_circuit(generate_circuit(LatticeSpec(2, 2), 6, 3))
        a = sample(s, 50, stream(9, "draw"))
        b = sample(s, 50, stream(9, "draw"))
        assert np.array_equal(a.bitstrings, b.bitstrings)

    def test_empty_sample_rejected(self):
        with pytest.raises(ConfigError):
            sample(np.full(4, 0.25), 0, stream(0, "s"))


class TestDump:
    def test_round_trip(self, tmp_path, bell_like):
        s = run_circuit(bell_like)
        path = tmp_path / "state.bin"
        save_state(s, path)
        loaded = load_state(path)
        assert loaded.n == s.n
        assert np.array_equal(loaded.amps, s.amps)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOTASTATE" + b"\x00" * 32)
        with pytest.raises(ConfigError):
            load_state(path)
