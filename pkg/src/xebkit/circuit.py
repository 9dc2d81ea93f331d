"""Seeded generation of pseudo-random circuits on 2D qubit lattices.

Circuits are an ordered list of cycles; cycle 0 is a layer of Hadamards and
later cycles mix CZ layouts with single-qubit gates drawn from
{X^1/2, Y^1/2, T} under the placement rules implemented in
:func:`generate_circuit`.  Generation is a pure function of
(lattice, depth, seed, variant).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .errors import CircuitFormatError, ConfigError
from .rng import stream

SQRT_HALF = 1.0 / np.sqrt(2.0)


class GateKind(enum.Enum):
    H = "h"
    X_HALF = "x2"
    Y_HALF = "y2"
    T = "t"
    CZ = "cz"
    X = "x"  # only from insert_pauli_error / noise trajectories
    Z = "z"

    @property
    def n_qubits(self) -> int:
        return 2 if self is GateKind.CZ else 1

    @property
    def is_two_sparse(self) -> bool:
        """Two nonzero entries per row/column: the only basis-flipping gates."""
        return self in (GateKind.H, GateKind.X_HALF, GateKind.Y_HALF, GateKind.X)

    @property
    def is_diagonal(self) -> bool:
        return self in (GateKind.T, GateKind.Z, GateKind.CZ)


# Fixed matrix conventions; X_HALF and Y_HALF square exactly to X and Y.
MATRIX = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=np.complex128) * SQRT_HALF,
    GateKind.X_HALF: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    GateKind.Y_HALF: 0.5 * np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]]),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=np.complex128),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_SQ_CHOICES = (GateKind.X_HALF, GateKind.Y_HALF, GateKind.T)


class Variant(enum.Enum):
    SEC4 = "sec4"
    DENSE = "dense"
    STAT_ENSEMBLE = "stat_ensemble"


@dataclass(frozen=True)
class LatticeSpec:
    rows: int
    cols: int
    periodic: bool = False

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigError(f"lattice must be at least 1x1, got {self.rows}x{self.cols}")
        if self.periodic and (self.rows % 2 or self.cols % 2):
            raise ConfigError(
                f"periodic lattice requires even dimensions, got {self.rows}x{self.cols}"
            )

    @property
    def n(self) -> int:
        return self.rows * self.cols

    def index(self, r: int, c: int) -> int:
        """Row-major qubit index; wraps when periodic."""
        return (r % self.rows) * self.cols + (c % self.cols)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Nearest-neighbour pairs: horizontal row-major, then vertical."""
        out = []
        seen = set()
        hmax = self.cols if self.periodic else self.cols - 1
        vmax = self.rows if self.periodic else self.rows - 1
        for r in range(self.rows):
            for c in range(hmax):
                a, b = self.index(r, c), self.index(r, c + 1)
                e = (min(a, b), max(a, b))
                if a != b and e not in seen:
                    seen.add(e)
                    out.append(e)
        for r in range(vmax):
            for c in range(self.cols):
                a, b = self.index(r, c), self.index(r + 1, c)
                e = (min(a, b), max(a, b))
                if a != b and e not in seen:
                    seen.add(e)
                    out.append(e)
        return tuple(out)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        if self.kind is GateKind.CZ:
            if len(qs) != 2 or qs[0] == qs[1]:
                raise ConfigError(f"cz requires two distinct qubits, got {qs}")
            qs = (min(qs), max(qs))
        elif len(qs) != 1:
            raise ConfigError(f"{self.kind.value} acts on one qubit, got {qs}")
        object.__setattr__(self, "qubits", qs)


def _cycle_key(g: Gate):
    return (g.qubits, g.kind.value)


@dataclass(frozen=True)
class Circuit:
    lattice: LatticeSpec
    seed: int
    variant: Variant
    cycles: tuple[tuple[Gate, ...], ...]

    def __post_init__(self):
        cycles = tuple(tuple(sorted(cyc, key=_cycle_key)) for cyc in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        self._validate()

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def num_cycles(self) -> int:
        return len(self.cycles)

    def gates(self):
        for cyc in self.cycles:
            yield from cyc

    def _validate(self):
        n = self.n
        edge_set = self.lattice.edge_set()
        overlaps_ok = self.variant is Variant.STAT_ENSEMBLE
        if self.variant is Variant.SEC4 and self.lattice.periodic:
            raise ConfigError("sec4 circuits use open boundaries")
        if self.variant is Variant.DENSE and not self.lattice.periodic:
            raise ConfigError("dense circuits require a periodic lattice")
        for t, cyc in enumerate(self.cycles):
            seen: set[int] = set()
            for g in cyc:
                for q in g.qubits:
                    if not 0 <= q < n:
                        raise ConfigError(f"qubit {q} out of range in cycle {t}")
                    if q in seen and not overlaps_ok:
                        raise ConfigError(f"qubit {q} appears twice in cycle {t}")
                    seen.add(q)
                if g.kind is GateKind.CZ and g.qubits not in edge_set:
                    raise ConfigError(f"cz on non-adjacent qubits {g.qubits} in cycle {t}")
            if self.variant is Variant.SEC4:
                self._check_cz_exclusion(cyc, t)
            if self.variant is Variant.DENSE:
                czs = [g for g in cyc if g.kind is GateKind.CZ]
                if czs and 2 * len(czs) != n:
                    raise ConfigError(f"dense cz cycle {t} is not a perfect cover")
        if self.variant in (Variant.SEC4, Variant.DENSE):
            if not self.cycles:
                raise ConfigError("circuit needs at least the Hadamard cycle")
            cyc0 = self.cycles[0]
            if len(cyc0) != n or any(g.kind is not GateKind.H for g in cyc0):
                raise ConfigError("cycle 0 must be one Hadamard per qubit")

    def _check_cz_exclusion(self, cyc, t):
        # No two CZ gates may touch lattice-adjacent qubits in the same cycle.
        edge_set = self.lattice.edge_set()
        czs = [g for g in cyc if g.kind is GateKind.CZ]
        for i in range(len(czs)):
            for j in range(i + 1, len(czs)):
                for a in czs[i].qubits:
                    for b in czs[j].qubits:
                        if (min(a, b), max(a, b)) in edge_set:
                            raise ConfigError(
                                f"adjacent cz gates {czs[i].qubits} and {czs[j].qubits}"
                                f" in cycle {t}"
                            )


@dataclass(frozen=True)
class GateCensus:
    g1: int  # all single-qubit gates, initial Hadamard cycle included
    g1_excluding_h: int
    g2: int
    t_count: int
    depth: int  # cycle count

    def as_dict(self) -> dict:
        return {
            "g1": self.g1,
            "g1_excluding_h": self.g1_excluding_h,
            "g2": self.g2,
            "t_count": self.t_count,
            "depth": self.depth,
        }


@dataclass(frozen=True)
class ErrorLocation:
    cycle: int
    qubit: int
    pauli: GateKind

    def __post_init__(self):
        pauli = self.pauli
        if isinstance(pauli, str):
            pauli = GateKind(pauli.lower())
            object.__setattr__(self, "pauli", pauli)
        if pauli not in (GateKind.X, GateKind.Z):
            raise ConfigError(f"error pauli must be x or z, got {pauli}")


def build_cz_layouts(lattice: LatticeSpec, variant: Variant = Variant.SEC4):
    """Ordered CZ layouts cycled through by the generator.

    SEC4 staggers edges so that no layout holds CZ gates on adjacent qubit
    pairs and each edge fires once per eight cycles.  DENSE emits four
    perfect dimer covers of the periodic lattice.
    """
    if variant is Variant.SEC4:
        h = [[] for _ in range(4)]
        v = [[] for _ in range(4)]
        for r in range(lattice.rows):
            for c in range(lattice.cols - 1):
                h[(c + 2 * r) % 4].append((lattice.index(r, c), lattice.index(r, c + 1)))
        for r in range(lattice.rows - 1):
            for c in range(lattice.cols):
                v[(r + 2 * c) % 4].append((lattice.index(r, c), lattice.index(r + 1, c)))
        order = [h[0], h[2], v[0], v[2], h[1], h[3], v[1], v[3]]
        return tuple(tuple(sorted(lay)) for lay in order)
    if variant is Variant.DENSE:
        if not lattice.periodic:
            raise ConfigError("dense layouts require a periodic lattice")
        h = [[] for _ in range(2)]
        v = [[] for _ in range(2)]
        for r in range(lattice.rows):
            for c in range(lattice.cols):
                if c % 2 == 0:
                    h[0].append((lattice.index(r, c), lattice.index(r, c + 1)))
                else:
                    h[1].append((lattice.index(r, c), lattice.index(r, c + 1)))
        for c in range(lattice.cols):
            for r in range(lattice.rows):
                if r % 2 == 0:
                    v[0].append((lattice.index(r, c), lattice.index(r + 1, c)))
                else:
                    v[1].append((lattice.index(r, c), lattice.index(r + 1, c)))
        order = [h[0], v[0], h[1], v[1]]
        return tuple(tuple(sorted((min(a, b), max(a, b)) for a, b in lay)) for lay in order)
    raise ConfigError(f"no fixed layouts for variant {variant.value}")


class _SingleQubitChooser:
    """Tracks the per-qubit placement rules for random single-qubit gates."""

    def __init__(self, rng):
        self.rng = rng
        self.last: dict[int, GateKind] = {}

    def pick(self, q: int) -> Gate:
        prev = self.last.get(q)
        if prev is None:
            kind = GateKind.T  # first gate after the Hadamard cycle
        else:
            options = [k for k in _SQ_CHOICES if k is not prev]
            kind = options[int(self.rng.integers(len(options)))]
        self.last[q] = kind
        return Gate(kind, (q,))


def generate_circuit(
    lattice: LatticeSpec,
    depth: int,
    seed: int,
    variant: Variant = Variant.SEC4,
    *,
    p_cz: float = 0.25,
) -> Circuit:
    """Generate a random circuit of `depth` cycles (layers for DENSE).

    Randomness comes from the stream keyed by (seed, "circuit"); the same
    arguments always return an identical circuit, and shallower circuits
    are prefixes of deeper ones at the same seed.
    """
    if depth < 0:
        raise ConfigError("depth must be >= 0")
    rng = stream(seed, "circuit")
    n = lattice.n
    h_cycle = tuple(Gate(GateKind.H, (q,)) for q in range(n))

    if variant is Variant.SEC4:
        layouts = build_cz_layouts(lattice, variant)
        chooser = _SingleQubitChooser(rng)
        cycles = [h_cycle]
        prev_cz: set[int] = set()
        for t in range(1, depth + 1):
            layout = layouts[(t - 1) % len(layouts)]
            gates = [Gate(GateKind.CZ, pair) for pair in layout]
            cz_qubits = {q for pair in layout for q in pair}
            for q in range(n):
                if q not in cz_qubits and q in prev_cz:
                    gates.append(chooser.pick(q))
            cycles.append(tuple(gates))
            prev_cz = cz_qubits
        return Circuit(lattice, seed, variant, tuple(cycles))

    if variant is Variant.DENSE:
        layouts = build_cz_layouts(lattice, variant)
        chooser = _SingleQubitChooser(rng)
        cycles = [h_cycle]
        prev_cz: set[int] = set()
        for t in range(1, depth + 1):
            sq = tuple(chooser.pick(q) for q in range(n) if q in prev_cz)
            cycles.append(sq)
            layout = layouts[(t - 1) % len(layouts)]
            cycles.append(tuple(Gate(GateKind.CZ, pair) for pair in layout))
            prev_cz = set(range(n))  # every qubit participates in one CZ
        return Circuit(lattice, seed, variant, tuple(cycles))

    if variant is Variant.STAT_ENSEMBLE:
        if not 0.0 <= p_cz <= 1.0:
            raise ConfigError("p_cz must be in [0, 1]")
        edges = lattice.edges()
        cycles = [h_cycle]
        for _ in range(depth):
            kinds = rng.integers(3, size=n)
            cycles.append(tuple(Gate(_SQ_CHOICES[k], (q,)) for q, k in enumerate(kinds)))
            mask = rng.random(len(edges)) < p_cz
            cycles.append(
                tuple(Gate(GateKind.CZ, e) for e, hit in zip(edges, mask) if hit)
            )
        return Circuit(lattice, seed, variant, tuple(cycles))

    raise ConfigError(f"unknown variant {variant!r}")


def count_gates(circuit: Circuit) -> GateCensus:
    g1 = g1_no_h = g2 = t_count = 0
    for g in circuit.gates():
        if g.kind is GateKind.CZ:
            g2 += 1
        else:
            g1 += 1
            if g.kind is not GateKind.H:
                g1_no_h += 1
            if g.kind is GateKind.T:
                t_count += 1
    return GateCensus(g1, g1_no_h, g2, t_count, circuit.num_cycles)


def insert_pauli_error(circuit: Circuit, loc: ErrorLocation) -> Circuit:
    """Splice a one-gate X or Z cycle immediately after the given cycle."""
    if not 0 <= loc.cycle < circuit.num_cycles:
        raise ConfigError(f"cycle {loc.cycle} out of range")
    if not 0 <= loc.qubit < circuit.n:
        raise ConfigError(f"qubit {loc.qubit} out of range")
    extra = (Gate(loc.pauli, (loc.qubit,)),)
    cycles = circuit.cycles[: loc.cycle + 1] + (extra,) + circuit.cycles[loc.cycle + 1 :]
    return Circuit(circuit.lattice, circuit.seed, circuit.variant, cycles)


def remove_pauli_error(circuit: Circuit, loc: ErrorLocation) -> Circuit:
    """Inverse of :func:`insert_pauli_error` for the same location."""
    idx = loc.cycle + 1
    if idx >= circuit.num_cycles:
        raise ConfigError(f"no inserted cycle at {idx}")
    expected = (Gate(loc.pauli, (loc.qubit,)),)
    if circuit.cycles[idx] != expected:
        raise ConfigError(f"cycle {idx} does not hold the expected inserted gate")
    cycles = circuit.cycles[:idx] + circuit.cycles[idx + 1 :]
    return Circuit(circuit.lattice, circuit.seed, circuit.variant, cycles)


def serialize(circuit: Circuit) -> str:
    obj = {
        "rows": circuit.lattice.rows,
        "cols": circuit.lattice.cols,
        "periodic": circuit.lattice.periodic,
        "seed": circuit.seed,
        "variant": circuit.variant.value,
        "cycles": [
            [{"g": g.kind.value, "q": list(g.qubits)} for g in cyc]
            for cyc in circuit.cycles
        ],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def parse(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CircuitFormatError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(obj, dict):
        raise CircuitFormatError("circuit document must be a JSON object")
    for key in ("rows", "cols", "periodic", "seed", "variant", "cycles"):
        if key not in obj:
            raise CircuitFormatError("missing required field", field=key)
    try:
        lattice = LatticeSpec(int(obj["rows"]), int(obj["cols"]), bool(obj["periodic"]))
    except (TypeError, ValueError) as e:
        raise CircuitFormatError(f"bad lattice: {e}", field="rows/cols") from e
    try:
        variant = Variant(obj["variant"])
    except ValueError:
        raise CircuitFormatError(
            f"unknown variant {obj['variant']!r}", field="variant"
        ) from None
    cycles = []
    for i, cyc in enumerate(obj["cycles"]):
        gates = []
        for j, g in enumerate(cyc):
            if not isinstance(g, dict) or "g" not in g or "q" not in g:
                raise CircuitFormatError("gate needs 'g' and 'q'", cycle=i, gate=j)
            try:
                kind = GateKind(g["g"])
            except ValueError:
                raise CircuitFormatError(
                    f"unknown gate name {g['g']!r}", cycle=i, gate=j, field="g"
                ) from None
            try:
                gate = Gate(kind, tuple(g["q"]))
            except (ConfigError, TypeError) as e:
                raise CircuitFormatError(str(e), cycle=i, gate=j, field="q") from e
            gates.append(gate)
        cycles.append(tuple(gates))
    return Circuit(lattice, int(obj["seed"]), variant, tuple(cycles))
