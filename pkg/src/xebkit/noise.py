"""Digital error model via quantum trajectories.

Each gate is followed by a probabilistic Pauli insertion (rate r1 for
single-qubit gates, r2 split evenly over the 15 two-qubit Pauli products
for CZ), initialization bit-flips happen before cycle 0, and measurement
bit-flips are applied to sampled bitstrings.  A trajectory is reproducible
from (seed, "traj", index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import XebReport, cross_entropy_difference, estimate_alpha
from .circuit import Circuit, ErrorLocation, Gate, GateKind, insert_pauli_error
from .errors import ConfigError
from .rng import stream
from .statevector import (
    DEFAULT_CAP,
    Sample,
    StateVector,
    _apply_kind,
    basis_state,
    init_state,
    probabilities,
    run_circuit,
    sample_from_probs,
    threads,
)

# Y is inserted as Z then X; the global phase i is irrelevant to sampling.
_PAULI_GATES = {
    "x": (GateKind.X,),
    "y": (GateKind.Z, GateKind.X),
    "z": (GateKind.Z,),
}
_SINGLE_PAULIS = ("x", "y", "z")
_PAIR_PAULIS = tuple(
    (a, b)
    for a in ("i", "x", "y", "z")
    for b in ("i", "x", "y", "z")
    if (a, b) != ("i", "i")
)


@dataclass(frozen=True)
class NoiseModel:
    r1: float = 0.0
    r2: float = 0.0
    r_init: float = 0.0
    r_mes: float = 0.0

    def __post_init__(self):
        for name in ("r1", "r2", "r_init", "r_mes"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {rate}")

    @property
    def is_zero(self) -> bool:
        return self.r1 == self.r2 == self.r_init == self.r_mes == 0.0

    def as_dict(self) -> dict:
        return {"r1": self.r1, "r2": self.r2, "r_init": self.r_init, "r_mes": self.r_mes}

    @classmethod
    def from_dict(cls, obj: dict) -> "NoiseModel":
        return cls(
            r1=float(obj.get("r1", 0.0)),
            r2=float(obj.get("r2", 0.0)),
            r_init=float(obj.get("r_init", 0.0)),
            r_mes=float(obj.get("r_mes", 0.0)),
        )


@dataclass(frozen=True)
class Trajectory:
    circuit: Circuit
    insertions: tuple  # ((cycle, Gate), ...) applied after that cycle, in order
    init_mask: int
    mes_mask: int
    key: tuple = ()

    @property
    def n_inserted_gates(self) -> int:
        return len(self.insertions)

    def to_circuit(self) -> Circuit:
        """Materialize the inserted Paulis as extra one-gate cycles.

        Initialization flips are not part of the returned circuit; simulate
        it from the basis state `init_mask` to reproduce the trajectory.
        """
        cycles = [list(c) for c in self.circuit.cycles]
        grouped: dict[int, list[Gate]] = {}
        for cyc, gate in self.insertions:
            grouped.setdefault(cyc, []).append(gate)
        out = []
        for t, cyc in enumerate(cycles):
            out.append(tuple(cyc))
            for gate in grouped.get(t, ()):
                out.append((gate,))
        return Circuit(
            self.circuit.lattice, self.circuit.seed, self.circuit.variant, tuple(out)
        )


def _draw_mask(rng: np.random.Generator, n: int, rate: float) -> int:
    if rate <= 0.0:
        return 0
    bits = rng.random(n) < rate
    mask = 0
    for q in range(n):
        if bits[q]:
            mask |= 1 << q
    return mask


def sample_trajectory(
    circuit: Circuit, noise: NoiseModel, rng: np.random.Generator, key: tuple = ()
) -> Trajectory:
    """Draw one error realization for the circuit.

    Draw order is fixed: initialization mask, then one uniform variate per
    gate in cycle order (plus the Pauli choice when it fires), then the
    measurement mask.
    """
    n = circuit.n
    init_mask = _draw_mask(rng, n, noise.r_init)
    insertions = []
    for t, cycle in enumerate(circuit.cycles):
        for gate in cycle:
            if gate.kind is GateKind.CZ:
                if noise.r2 > 0.0 and rng.random() < noise.r2:
                    pa, pb = _PAIR_PAULIS[int(rng.integers(15))]
                    for q, p in zip(gate.qubits, (pa, pb)):
                        for kind in _PAULI_GATES.get(p, ()):
                            insertions.append((t, Gate(kind, (q,))))
            else:
                if noise.r1 > 0.0 and rng.random() < noise.r1:
                    p = _SINGLE_PAULIS[int(rng.integers(3))]
                    for kind in _PAULI_GATES[p]:
                        insertions.append((t, Gate(kind, (gate.qubits[0],))))
    mes_mask = _draw_mask(rng, n, noise.r_mes)
    return Trajectory(circuit, tuple(insertions), init_mask, mes_mask, key)


class Checkpoints:
    """Stored states of the ideal circuit at a stride of cycles.

    Trajectories that first deviate at cycle c resume from the latest
    checkpoint at or before c, which replays the identical operations and
    therefore reproduces a from-scratch run bit for bit.
    """

    def __init__(self, circuit: Circuit, stride: int | None = None, cap: int = DEFAULT_CAP):
        self.circuit = circuit
        num = circuit.num_cycles
        if stride is None:
            stride = max(1, num // 10)
        self.stride = stride
        self.states: dict[int, np.ndarray] = {}
        state = init_state(circuit.n, cap)
        nt = threads()
        for t, cycle in enumerate(circuit.cycles):
            for gate in cycle:
                _apply_kind(state.amps, gate.kind, gate.qubits, nt)
            if t % stride == 0 or t == num - 1:
                self.states[t] = state.amps.copy()
        self.final = state.amps

    def latest_at_or_before(self, t: int):
        usable = [c for c in self.states if c <= t]
        if not usable:
            return None
        c = max(usable)
        return c, self.states[c]


def simulate_trajectory(
    traj: Trajectory, checkpoints: Checkpoints | None = None, cap: int = DEFAULT_CAP
) -> np.ndarray:
    """Pure-state amplitudes of one trajectory (measurement mask not applied)."""
    circuit = traj.circuit
    nt = threads()
    grouped: dict[int, list[Gate]] = {}
    for cyc, gate in traj.insertions:
        grouped.setdefault(cyc, []).append(gate)

    start_cycle = 0
    amps = None
    if traj.init_mask == 0 and checkpoints is not None and checkpoints.circuit is circuit:
        if grouped:
            first_dirty = min(grouped)
        else:
            return checkpoints.final.copy()
        hit = checkpoints.latest_at_or_before(first_dirty)
        if hit is not None:
            c, stored = hit
            amps = stored.copy()
            for gate in grouped.get(c, ()):
                _apply_kind(amps, gate.kind, gate.qubits, nt)
            start_cycle = c + 1
    if amps is None:
        amps = basis_state(circuit.n, traj.init_mask, cap).amps
        for gate in grouped.get(-1, ()):  # pragma: no cover - no pre-circuit insertions
            _apply_kind(amps, gate.kind, gate.qubits, nt)

    for t in range(start_cycle, circuit.num_cycles):
        for gate in circuit.cycles[t]:
            _apply_kind(amps, gate.kind, gate.qubits, nt)
        for gate in grouped.get(t, ()):
            _apply_kind(amps, gate.kind, gate.qubits, nt)
    return amps


def noisy_sample(
    circuit: Circuit,
    noise: NoiseModel,
    m: int,
    seed: int,
    *,
    draws_per_traj: int = 1,
    checkpoints: Checkpoints | None = None,
    cap: int = DEFAULT_CAP,
) -> Sample:
    """m bitstrings from the noise-averaged output distribution.

    One bitstring per trajectory gives i.i.d. samples.  `draws_per_traj`
    trades that for speed: draws within a trajectory share its error
    realization (measurement flips stay per-draw), so they are correlated
    across the trajectory and reported standard errors understate the
    trajectory-level fluctuation.
    """
    if m < 1:
        raise ConfigError("sample size must be >= 1")
    if draws_per_traj < 1:
        raise ConfigError("draws_per_traj must be >= 1")
    n = circuit.n
    out = np.empty(m, dtype=np.int64)
    filled = 0
    index = 0
    while filled < m:
        rng = stream(seed, "traj", index)
        traj = sample_trajectory(circuit, noise, rng, key=(seed, "traj", index))
        amps = simulate_trajectory(traj, checkpoints, cap)
        p = np.abs(amps)
        np.multiply(p, p, out=p)
        k = min(draws_per_traj, m - filled)
        draws = sample_from_probs(p, k, rng)
        draws[0] ^= traj.mes_mask
        for j in range(1, k):
            draws[j] ^= _draw_mask(rng, n, noise.r_mes)
        out[filled : filled + k] = draws
        filled += k
        index += 1
    return Sample(n, out)


def noisy_xeb(
    circuit: Circuit,
    noise: NoiseModel,
    m: int,
    seed: int,
    *,
    draws_per_traj: int = 1,
    p_ideal: np.ndarray | None = None,
    checkpoints: Checkpoints | None = None,
    cap: int = DEFAULT_CAP,
) -> XebReport:
    """Sample noisily and score against the ideal distribution."""
    if p_ideal is None:
        if checkpoints is not None:
            amps = checkpoints.final
            p_ideal = np.abs(amps)
            p_ideal = p_ideal * p_ideal
        else:
            p_ideal = probabilities(run_circuit(circuit, cap=cap))
    sample = noisy_sample(
        circuit, noise, m, seed,
        draws_per_traj=draws_per_traj, checkpoints=checkpoints, cap=cap,
    )
    return estimate_alpha(sample, p_ideal, circuit.n)


def apply_bitflip_channel(p: np.ndarray, rate: float) -> np.ndarray:
    """Exact per-qubit bit-flip channel on a probability vector (in place)."""
    if rate <= 0.0:
        return p
    n = int(round(math.log2(len(p))))
    keep = 1.0 - rate
    for q in range(n):
        view = p.reshape(-1, 2, 1 << q)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] = keep * lo + rate * hi
        view[:, 1, :] = rate * lo + keep * hi
    return p


def noisy_delta_h_exact(
    circuit: Circuit,
    noise: NoiseModel,
    n_traj: int,
    seed: int,
    *,
    p_ideal: np.ndarray | None = None,
    checkpoints: Checkpoints | None = None,
    cap: int = DEFAULT_CAP,
):
    """Trajectory mean of the exact cross entropy difference.

    Replaces per-trajectory bitstring draws with the full per-trajectory
    distribution (measurement flips applied as an exact channel), so the
    only Monte Carlo noise left is over error realizations.  Returns
    (mean, standard error).
    """
    if n_traj < 1:
        raise ConfigError("n_traj must be >= 1")
    if p_ideal is None:
        if checkpoints is None:
            checkpoints = Checkpoints(circuit, cap=cap)
        p_ideal = np.abs(checkpoints.final)
        p_ideal = p_ideal * p_ideal
    values = np.empty(n_traj)
    for i in range(n_traj):
        rng = stream(seed, "traj", i)
        traj = sample_trajectory(circuit, noise, rng, key=(seed, "traj", i))
        amps = simulate_trajectory(traj, checkpoints, cap)
        p = np.abs(amps)
        np.multiply(p, p, out=p)
        apply_bitflip_channel(p, noise.r_mes)
        values[i] = cross_entropy_difference(p, p_ideal)
    err = float(np.std(values, ddof=1) / math.sqrt(n_traj)) if n_traj > 1 else 0.0
    return float(np.mean(values)), err


def average_noisy_distribution(
    circuit: Circuit, noise: NoiseModel, n_traj: int, seed: int, cap: int = DEFAULT_CAP
) -> np.ndarray:
    """Mean of per-trajectory probability vectors (measurement mask included)."""
    if n_traj < 1:
        raise ConfigError("n_traj must be >= 1")
    total = np.zeros(1 << circuit.n)
    idx = np.arange(1 << circuit.n)
    checkpoints = Checkpoints(circuit, cap=cap)
    for i in range(n_traj):
        rng = stream(seed, "traj", i)
        traj = sample_trajectory(circuit, noise, rng, key=(seed, "traj", i))
        amps = simulate_trajectory(traj, checkpoints, cap)
        p = np.abs(amps)
        np.multiply(p, p, out=p)
        if traj.mes_mask:
            p = p[idx ^ traj.mes_mask]
        total += p
    total /= total.sum()
    return total


def single_error_distribution(
    circuit: Circuit,
    loc: ErrorLocation,
    *,
    checkpoints: Checkpoints | None = None,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Exact output distribution with one inserted Pauli error."""
    if checkpoints is not None:
        traj = Trajectory(circuit, ((loc.cycle, Gate(loc.pauli, (loc.qubit,))),), 0, 0)
        amps = simulate_trajectory(traj, checkpoints, cap)
        p = np.abs(amps)
        np.multiply(p, p, out=p)
        return p
    errored = insert_pauli_error(circuit, loc)
    return probabilities(run_circuit(errored, cap=cap))


def write_sample(path, sample: Sample, seed: int) -> None:
    """One bitstring per line, qubit 0 leftmost, with a metadata header."""
    with open(path, "w") as fh:
        fh.write(f"#n={sample.n} m={sample.m} seed={seed}\n")
        for x in sample.bitstrings:
            fh.write("".join("1" if (int(x) >> q) & 1 else "0" for q in range(sample.n)))
            fh.write("\n")


def read_sample(path) -> tuple[Sample, int]:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ConfigError("sample file must start with a '#n=... m=... seed=...' header")
        fields = dict(part.split("=", 1) for part in header[1:].split())
        n = int(fields["n"])
        seed = int(fields.get("seed", 0))
        bits = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            if len(line) != n or set(line) - {"0", "1"}:
                raise ConfigError(f"bad bitstring on line {lineno}")
            bits.append(sum(1 << q for q, ch in enumerate(line) if ch == "1"))
    if not bits:
        raise ConfigError("sample file holds no bitstrings")
    return Sample(n, np.array(bits, dtype=np.int64)), seed
