"""Full-amplitude state-vector simulation.

Amplitudes live in one contiguous complex128 array, little-endian in the
qubit index (bit q of the array index is qubit q).  Gate application
dispatches to specialized kernels: dense 2x2 for the two-sparse gates,
set-bit-only updates for diagonal gates with a unit entry, and a sign flip
for CZ.  Runs of gates confined to the lowest `block` qubits can optionally
be fused into a single blockwise matrix product.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import MATRIX, Circuit, Gate, GateKind
from .errors import CapacityError, ConfigError

DEFAULT_CAP = 28  # 2^28 complex doubles = 4 GiB
FUSE_BLOCK = 5
STATE_MAGIC = b"XEBSV1\x00\x00"

_T_PHASE = np.exp(1j * np.pi / 4)


def threads() -> int:
    """Worker thread count, from XEB_THREADS (default: available cores)."""
    raw = os.environ.get("XEB_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"XEB_THREADS must be an integer, got {raw!r}") from None
        if value < 1:
            raise ConfigError("XEB_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


@dataclass(eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())


@dataclass(eq=False)
class Sample:
    n: int
    bitstrings: np.ndarray  # int64 values in [0, 2^n)

    @property
    def m(self) -> int:
        return len(self.bitstrings)


def init_state(n: int, cap: int = DEFAULT_CAP) -> StateVector:
    """|0...0> on n qubits."""
    if n < 1:
        raise ConfigError("need at least one qubit")
    if n > cap:
        raise CapacityError(f"{n} qubits exceeds the cap of {cap}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def basis_state(n: int, x: int, cap: int = DEFAULT_CAP) -> StateVector:
    state = init_state(n, cap)
    if x:
        state.amps[0] = 0.0
        state.amps[x] = 1.0
    return state


def _apply_kind(amps: np.ndarray, kind: GateKind, qubits, nthreads: int) -> None:
    if kind is GateKind.CZ:
        a, b = qubits
        kernels.active.cz(amps, min(a, b), max(a, b), nthreads)
    elif kind is GateKind.T:
        kernels.active.diag_unit(amps, qubits[0], _T_PHASE, nthreads)
    elif kind is GateKind.Z:
        kernels.active.diag_unit(amps, qubits[0], -1.0 + 0.0j, nthreads)
    else:
        m = MATRIX[kind]
        kernels.active.two_sparse(
            amps, qubits[0], m[0, 0], m[0, 1], m[1, 0], m[1, 1], nthreads
        )


def apply_single_qubit(state: StateVector, kind: GateKind, q: int) -> StateVector:
    if not 0 <= q < state.n:
        raise ConfigError(f"qubit {q} out of range")
    if kind is GateKind.CZ:
        raise ConfigError("cz is not a single-qubit gate")
    _apply_kind(state.amps, kind, (q,), threads())
    return state


def apply_cz(state: StateVector, q1: int, q2: int) -> StateVector:
    if q1 == q2 or not (0 <= q1 < state.n and 0 <= q2 < state.n):
        raise ConfigError(f"bad cz qubits ({q1}, {q2})")
    _apply_kind(state.amps, GateKind.CZ, (q1, q2), threads())
    return state


def apply_gate_matrix(state: StateVector, u: np.ndarray, q: int) -> StateVector:
    """Generic 2x2 path with no specialization (benchmark baseline)."""
    if not 0 <= q < state.n:
        raise ConfigError(f"qubit {q} out of range")
    kernels.active.two_sparse(
        state.amps, q, complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]), threads()
    )
    return state


class _Fuser:
    """Accumulates gates on the lowest `block` qubits into one matrix."""

    def __init__(self, amps: np.ndarray, block: int):
        self.amps = amps
        self.block = block
        self.dim = 1 << block
        self.u: np.ndarray | None = None
        self.count = 0

    def accepts(self, gate: Gate) -> bool:
        return self.dim <= len(self.amps) and all(q < self.block for q in gate.qubits)

    def add(self, gate: Gate) -> None:
        if self.u is None:
            self.u = np.eye(self.dim, dtype=np.complex128)
        if gate.kind is GateKind.CZ:
            idx = np.arange(self.dim)
            a, b = gate.qubits
            signs = 1.0 - 2.0 * (((idx >> a) & 1) & ((idx >> b) & 1))
            self.u = signs[:, None] * self.u
        else:
            m = MATRIX[gate.kind]
            q = gate.qubits[0]
            full = np.kron(
                np.kron(np.eye(1 << (self.block - 1 - q)), m), np.eye(1 << q)
            )
            self.u = full @ self.u
        self.count += 1

    def flush(self) -> None:
        if self.u is None:
            return
        ut = np.ascontiguousarray(self.u.T)
        view = self.amps.reshape(-1, self.dim)
        chunk = max(1, (1 << 16) // self.dim)
        for start in range(0, view.shape[0], chunk):
            rows = view[start : start + chunk]
            rows[:] = rows @ ut
        self.u = None
        self.count = 0


def apply_circuit(
    state: StateVector,
    circuit: Circuit,
    observer=None,
    *,
    fuse: bool = False,
    block: int = FUSE_BLOCK,
) -> StateVector:
    """Apply all cycles in order.

    The observer, if given, is called as ``observer(t, amps_view)`` after
    every cycle (cycle 0 included) with a read-only view.  With ``fuse``
    enabled, consecutive gates confined to the lowest `block` qubits are
    combined into one 2^block matrix and applied blockwise; probabilities
    agree with unfused application to better than 1e-12.
    """
    if circuit.n != state.n:
        raise ConfigError(f"circuit has {circuit.n} qubits, state has {state.n}")
    nt = threads()
    fuser = _Fuser(state.amps, block) if fuse else None
    for t, cycle in enumerate(circuit.cycles):
        for gate in cycle:
            if fuser is not None and fuser.accepts(gate):
                fuser.add(gate)
                continue
            if fuser is not None:
                fuser.flush()
            _apply_kind(state.amps, gate.kind, gate.qubits, nt)
        if observer is not None:
            if fuser is not None:
                fuser.flush()
            view = state.amps.view()
            view.flags.writeable = False
            observer(t, view)
    if fuser is not None:
        fuser.flush()
    return state


def run_circuit(circuit: Circuit, observer=None, *, fuse: bool = False,
                cap: int = DEFAULT_CAP) -> StateVector:
    state = init_state(circuit.n, cap)
    return apply_circuit(state, circuit, observer, fuse=fuse)


def probabilities(state: StateVector) -> np.ndarray:
    p = np.abs(state.amps)
    np.multiply(p, p, out=p)
    return p


def amplitude(state: StateVector, x: int) -> complex:
    if not 0 <= x < len(state.amps):
        raise ConfigError(f"bitstring {x} out of range")
    return complex(state.amps[x])


def norm_sq(state: StateVector) -> float:
    return float(np.vdot(state.amps, state.amps).real)


def sample_from_probs(probs: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw m i.i.d. indices by inverse CDF; deterministic given the stream."""
    if m < 1:
        raise ConfigError("sample size must be >= 1")
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, rng.random(m), side="right")
    return np.minimum(idx, len(probs) - 1).astype(np.int64)


def sample(source, m: int, rng: np.random.Generator) -> Sample:
    """Sample bitstrings from a StateVector or a probability vector."""
    if isinstance(source, StateVector):
        n = source.n
        probs = probabilities(source)
    else:
        probs = np.asarray(source, dtype=np.float64)
        n = int(np.log2(len(probs)))
        if 1 << n != len(probs):
            raise ConfigError("probability vector length must be a power of two")
    return Sample(n, sample_from_probs(probs, m, rng))


def save_state(state: StateVector, path) -> None:
    """Binary dump: 16-byte header then little-endian (re, im) double pairs."""
    with open(path, "wb") as fh:
        fh.write(STATE_MAGIC)
        fh.write(struct.pack("<II", state.n, 0))
        fh.write(state.amps.astype("<c16", copy=False).tobytes())


def load_state(path) -> StateVector:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != STATE_MAGIC:
            raise ConfigError(f"not a state dump (bad magic {magic!r})")
        n, _reserved = struct.unpack("<II", fh.read(8))
        raw = fh.read()
    if len(raw) != 16 << n:
        raise ConfigError(f"state dump truncated: expected {16 << n} payload bytes")
    amps = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
    return StateVector(int(n), amps)
