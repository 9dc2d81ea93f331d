import numpy as np
import pytest
from scipy.stats import chisquare

from xebkit import analysis
from xebkit.circuit import (
    ErrorLocation,
    Gate,
    GateKind,
    LatticeSpec,
    Variant,
    count_gates,
    generate_circuit,
    insert_pauli_error,
)
from xebkit.errors import ConfigError
from xebkit.noise import (
    Checkpoints,
    NoiseModel,
    apply_bitflip_channel,
    average_noisy_distribution,
    noisy_delta_h_exact,
    noisy_sample,
    noisy_xeb,
    read_sample,
    sample_trajectory,
    simulate_trajectory,
    single_error_distribution,
    write_sample,
)
from xebkit.rng import stream
from xebkit.statevector import basis_state, apply_circuit, probabilities, run_circuit

from conftest import hand_circuit


def t_chain_circuit(cycles=6):
    """One qubit, H then T every cycle; g1 = cycles + 1."""
    lat = LatticeSpec(1, 1)
    body = [[Gate(GateKind.T, (0,))] for _ in range(cycles)]
    return hand_circuit(lat, [[Gate(GateKind.H, (0,))]] + body)


class TestNoiseModel:
    def test_validation(self):
        with pytest.raises(ConfigError):
            NoiseModel(r1=-0.1)
        with pytest.raises(ConfigError):
            NoiseModel(r_mes=1.5)

    def test_round_trip(self):
        m = NoiseModel(r1=0.001, r2=0.01, r_init=0.02, r_mes=0.03)
        assert NoiseModel.from_dict(m.as_dict()) == m


class TestTrajectorySampling:
    def test_zero_rates(self):
        c = generate_circuit(LatticeSpec(2, 2), 6, 0)
        traj = sample_trajectory(c, NoiseModel(), stream(0, "traj", 0))
        assert traj.insertions == ()
        assert traj.init_mask == 0 and traj.mes_mask == 0

    def test_certain_two_qubit_error(self):
        c = generate_circuit(LatticeSpec(1, 2), 1, 0)  # one CZ at cycle 1
        traj = sample_trajectory(c, NoiseModel(r2=1.0), stream(0, "traj", 1))
        assert 1 <= len(traj.insertions) <= 2
        assert all(cycle == 1 for cycle, _ in traj.insertions)
        assert all(g.qubits[0] in (0, 1) for _, g in traj.insertions)

    def test_single_qubit_error_rate(self):
        c = t_chain_circuit(9)  # g1 = 10
        r1 = 0.08
        noise = NoiseModel(r1=r1)
        n_traj = 10_000
        events = 0
        for i in range(n_traj):
            traj = sample_trajectory(c, noise, stream(5, "traj", i))
            events += len({(cyc, g.qubits[0]) for cyc, g in traj.insertions})
        g1 = count_gates(c).g1
        mean = events / n_traj
        sigma = np.sqrt(g1 * r1 * (1 - r1) / n_traj)
        assert abs(mean - r1 * g1) < 3 * sigma

    def test_reproducible(self):
        c = generate_circuit(LatticeSpec(2, 2), 8, 3)
        noise = NoiseModel(r1=0.2, r2=0.3, r_init=0.1, r_mes=0.1)
        a = sample_trajectory(c, noise, stream(9, "traj", 4))
        b = sample_trajectory(c, noise, stream(9, "traj", 4))
        assert a == b


class TestTrajectorySimulation:
    def test_derived_circuit_route_matches(self):
        c = generate_circuit(LatticeSpec(2, 2), 8, 1)
        noise = NoiseModel(r1=0.1, r2=0.2, r_init=0.2)
        traj = sample_trajectory(c, noise, stream(1, "traj", 2))
        assert traj.insertions  # otherwise the test is vacuous
        fast = simulate_trajectory(traj)
        derived = traj.to_circuit()
        state = basis_state(c.n, traj.init_mask)
        apply_circuit(state, derived)
        assert np.max(np.abs(fast - state.amps)) < 1e-14

    def test_checkpoint_path_is_bitwise_identical(self):
        c = generate_circuit(LatticeSpec(3, 3), 12, 2)
        noise = NoiseModel(r1=0.05, r2=0.05, r_init=0.05)
        cps = Checkpoints(c, stride=3)
        for i in range(12):
            traj = sample_trajectory(c, noise, stream(2, "traj", i))
            a = simulate_trajectory(traj)
            b = simulate_trajectory(traj, cps)
            assert np.array_equal(a, b)


class TestNoisySampling:
    def test_zero_rates_match_ideal(self):
        c = generate_circuit(LatticeSpec(2, 2), 8, 4)
        p = probabilities(run_circuit(c))
        got = noisy_sample(c, NoiseModel(), 20_000, 7)
        counts = np.bincount(got.bitstrings, minlength=16)
        result = chisquare(counts, p * got.m)
        assert result.pvalue > 1e-3

    def test_full_measurement_flips_stay_uniform(self):
        c = generate_circuit(LatticeSpec(1, 2), 0, 0)  # Hadamards only
        got = noisy_sample(c, NoiseModel(r_mes=0.5), 40_000, 1)
        freqs = np.bincount(got.bitstrings, minlength=4) / got.m
        assert np.all(np.abs(freqs - 0.25) < 0.012)

    def test_draws_per_traj_counts(self):
        c = generate_circuit(LatticeSpec(1, 2), 2, 0)
        got = noisy_sample(c, NoiseModel(r1=0.5), 25, 0, draws_per_traj=10)
        assert got.m == 25

    def test_noisy_xeb_ideal_limit(self):
        c = generate_circuit(LatticeSpec(3, 3), 16, 5)
        rep = noisy_xeb(c, NoiseModel(), 4000, 3)
        assert abs(rep.alpha - 1.0) < 3 * rep.stderr + 0.05


class TestAverageDistribution:
    def test_single_trajectory_zero_rates(self):
        c = generate_circuit(LatticeSpec(2, 2), 6, 6)
        avg = average_noisy_distribution(c, NoiseModel(), 1, 0)
        assert np.max(np.abs(avg - probabilities(run_circuit(c)))) < 1e-12

    def test_two_seeds_agree_within_mc_error(self):
        c = generate_circuit(LatticeSpec(2, 2), 8, 7)
        noise = NoiseModel(r1=0.02, r2=0.05, r_init=0.02, r_mes=0.02)
        n_traj = 2000
        a = average_noisy_distribution(c, noise, n_traj, 100)
        b = average_noisy_distribution(c, noise, n_traj, 200)
        tv = 0.5 * np.abs(a - b).sum()
        # crude per-entry MC scale: entries are means of [0, 1] variates
        mc = 0.5 * len(a) * np.sqrt(np.max(a) / n_traj)
        assert tv <= 5 * mc

    def test_strong_noise_approaches_uniform(self):
        # r_mes = 1/2 uniformizes the measured distribution exactly, so the
        # rescaled average concentrates at N p = 1 up to Monte Carlo noise
        c = generate_circuit(LatticeSpec(2, 2), 8, 8)
        noise = NoiseModel(r1=0.5, r2=0.5, r_init=0.5, r_mes=0.5)
        avg = average_noisy_distribution(c, noise, 1500, 3)
        n_amp = len(avg)
        assert np.max(np.abs(avg * n_amp - 1.0)) < 0.2
        assert 0.5 * np.abs(avg - 1.0 / n_amp).sum() < 0.05


class TestSingleError:
    def test_z_at_final_cycle_is_invisible(self):
        c = generate_circuit(LatticeSpec(3, 3), 10, 9)
        p0 = probabilities(run_circuit(c))
        p1 = single_error_distribution(c, ErrorLocation(c.num_cycles - 1, 4, "z"))
        assert np.max(np.abs(p1 - p0)) < 1e-12

    def test_x_after_hadamards_is_invisible(self):
        c = generate_circuit(LatticeSpec(3, 3), 10, 9)
        p0 = probabilities(run_circuit(c))
        p1 = single_error_distribution(c, ErrorLocation(0, 2, "x"))
        assert np.max(np.abs(p1 - p0)) < 1e-12

    def test_mid_circuit_z_decorrelates(self):
        c = generate_circuit(LatticeSpec(4, 4), 20, 0)
        p0 = probabilities(run_circuit(c))
        p1 = single_error_distribution(c, ErrorLocation(10, 7, "z"))
        r, _, _ = analysis.error_correlation(p0, p1)
        assert abs(r) < 0.2

    def test_checkpoint_route_matches_insert_route(self):
        c = generate_circuit(LatticeSpec(2, 2), 10, 1)
        loc = ErrorLocation(4, 1, "x")
        direct = probabilities(run_circuit(insert_pauli_error(c, loc)))
        via_cp = single_error_distribution(c, loc, checkpoints=Checkpoints(c))
        assert np.max(np.abs(direct - via_cp)) < 1e-14


class TestExactDeltaH:
    def test_zero_noise_gives_one_when_converged(self):
        c = generate_circuit(LatticeSpec(3, 3), 20, 3)
        dh, err = noisy_delta_h_exact(c, NoiseModel(), 1, 0)
        assert dh == pytest.approx(
            analysis.cross_entropy_difference(
                probabilities(run_circuit(c)), probabilities(run_circuit(c))
            ),
            abs=1e-12,
        )

    def test_tracks_predicted_fidelity(self):
        c = generate_circuit(LatticeSpec(3, 3), 24, 1)
        noise = NoiseModel(r1=0.001, r2=0.01, r_init=0.01, r_mes=0.01)
        dh, err = noisy_delta_h_exact(c, noise, 200, 5)
        predicted = analysis.predicted_fidelity(count_gates(c), noise, c.n)
        assert abs(dh - predicted) < max(5 * err, 0.06)


class TestBitflipChannel:
    def test_full_flip_permutes(self):
        p = np.array([0.5, 0.3, 0.15, 0.05])
        flipped = apply_bitflip_channel(p.copy(), 1.0)
        assert np.allclose(flipped, [0.05, 0.15, 0.3, 0.5])

    def test_half_flip_is_uniform(self):
        p = np.array([1.0, 0.0, 0.0, 0.0])
        assert np.allclose(apply_bitflip_channel(p.copy(), 0.5), 0.25)


class TestSampleFiles:
    def test_round_trip(self, tmp_path):
        from xebkit.statevector import Sample

        sample = Sample(3, np.array([0, 5, 7, 2], dtype=np.int64))
        path = tmp_path / "sample.txt"
        write_sample(path, sample, seed=42)
        loaded, seed = read_sample(path)
        assert seed == 42
        assert loaded.n == 3
        assert np.array_equal(loaded.bitstrings, sample.bitstrings)
        lines = path.read_text().splitlines()
        assert lines[0] == "#n=3 m=4 seed=42"
        assert lines[1] == "000"
        assert lines[2] == "101"  # qubit 0 leftmost

    def test_bad_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("000\n")
        with pytest.raises(ConfigError):
            read_sample(path)
        path.write_text("#n=3 m=1 seed=0\n0102\n")
        with pytest.raises(ConfigError):
            read_sample(path)
