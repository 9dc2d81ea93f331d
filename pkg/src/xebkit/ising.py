"""Compilation of circuits to complex-temperature Ising models.

Output amplitudes <x|psi> become path sums over free spins: one spin per
two-sparse gate per qubit worldline, with the last spin of each worldline
pinned to the output bit.  Phases accumulate in integer half-units of pi/8
(so T-gate fields stay integral) which keeps all bookkeeping exact.

Couplings, fields and boundary terms are extracted from the gate script by
exact finite differencing of the integer phase function rather than by
transcribing closed-form coefficient formulas; the script evaluator remains
the ground truth and the quadratic form is checked against it.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateKind, LatticeSpec, Variant, generate_circuit
from .errors import CapacityError, ConfigError
from .rng import stream
from .statevector import DEFAULT_CAP, run_circuit

K_SECTORS = 8
MAX_FREE_DEFAULT = 24
_ENUM_BLOCK = 1 << 16

# Term codes for the compiled gate script.
_X2, _Y2, _HCZ, _T = 0, 1, 2, 3
_CONST = -1  # variable id for a qubit still pinned to |0>


@dataclass(frozen=True)
class Worldline:
    qubit: int
    vertex_cycles: tuple[int, ...]  # cycle of each two-sparse gate, in order
    kinds: tuple[GateKind, ...]  # which two-sparse gate created each vertex

    @property
    def d(self) -> int:
        """Free spins on this worldline (vertices minus the pinned one)."""
        return max(0, len(self.vertex_cycles) - 1)


@dataclass(frozen=True)
class IsingModel:
    n: int
    x: int  # output bitstring, bit q = qubit q
    worldlines: tuple[Worldline, ...]
    n_free: int
    g_sparse: int
    spin_vertices: tuple  # (qubit, k, cycle) per free spin id
    terms: tuple  # compiled gate script: (code, var_a, var_b)
    quad: dict  # (spin, spin) -> coupling, half-units of pi/8
    lin: np.ndarray  # per-spin field, half-units, x-independent part
    boundary: dict  # (spin, qubit) -> coupling to the output spin, half-units
    const0: int
    bconst: dict  # qubit -> linear output-spin term, half-units
    bbconst: dict  # (qubit, qubit) -> output-output term, half-units
    phase_correction_units: int  # reinstates per-gate constant phases
    t_marks: tuple  # (qubit, k, cycle) per T gate
    cz_marks: tuple  # ((qubit, k), (qubit, k), cycle) per CZ

    def with_output(self, x: int) -> "IsingModel":
        """Same structure, retargeted to another output bitstring."""
        if not 0 <= x < (1 << self.n):
            raise ConfigError(f"bitstring {x} out of range")
        return dataclasses.replace(self, x=x)

    def x_string(self) -> str:
        return "".join("1" if (self.x >> q) & 1 else "0" for q in range(self.n))


@dataclass(frozen=True)
class PhaseHistogram:
    counts: np.ndarray  # Q_k per phase sector, k in [0..7]
    model: IsingModel

    @property
    def q_total(self) -> int:
        return int(self.counts.sum())


def _parse_bitstring(x, n: int) -> int:
    if isinstance(x, str):
        if len(x) != n or set(x) - {"0", "1"}:
            raise ConfigError(f"output bitstring must be {n} chars of 0/1, got {x!r}")
        return sum(1 << q for q, ch in enumerate(x) if ch == "1")
    x = int(x)
    if not 0 <= x < (1 << n):
        raise ConfigError(f"bitstring {x} out of range for {n} qubits")
    return x


def map_to_ising(circuit: Circuit, x) -> IsingModel:
    """Compile a circuit over {H, X^1/2, Y^1/2, T, CZ} to its Ising model."""
    n = circuit.n
    x_int = _parse_bitstring(x, n)

    vertex_cycles: list[list[int]] = [[] for _ in range(n)]
    vertex_kinds: list[list[GateKind]] = [[] for _ in range(n)]
    links = []  # (kind, qubit, k) for the k-th two-sparse gate on qubit
    t_marks = []
    cz_marks = []
    n_x2 = n_y2 = 0
    for t, cycle in enumerate(circuit.cycles):
        for gate in cycle:
            kind = gate.kind
            if kind in (GateKind.X, GateKind.Z):
                raise ConfigError(f"unsupported gate kind for the Ising map: {kind.value}")
            if kind.is_two_sparse:
                q = gate.qubits[0]
                k = len(vertex_cycles[q])
                vertex_cycles[q].append(t)
                vertex_kinds[q].append(kind)
                links.append((kind, q, k))
                if kind is GateKind.X_HALF:
                    n_x2 += 1
                elif kind is GateKind.Y_HALF:
                    n_y2 += 1
            elif kind is GateKind.T:
                q = gate.qubits[0]
                t_marks.append((q, len(vertex_cycles[q]) - 1, t))
            elif kind is GateKind.CZ:
                a, b = gate.qubits
                cz_marks.append(
                    ((a, len(vertex_cycles[a]) - 1), (b, len(vertex_cycles[b]) - 1), t)
                )
            else:  # pragma: no cover - enum is exhaustive
                raise ConfigError(f"unsupported gate kind {kind.value}")

    worldlines = tuple(
        Worldline(q, tuple(vertex_cycles[q]), tuple(vertex_kinds[q])) for q in range(n)
    )
    # Free spins: all vertices but each worldline's last.  The last one is
    # pinned to the output bit and becomes variable id n_free + qubit.
    spin_index: dict[tuple[int, int], int] = {}
    spin_vertices = []
    for q in range(n):
        for k in range(len(vertex_cycles[q]) - 1):
            spin_index[(q, k)] = len(spin_vertices)
            spin_vertices.append((q, k, vertex_cycles[q][k]))
    n_free = len(spin_vertices)
    g_sparse = sum(len(vc) for vc in vertex_cycles)

    def var_of(q: int, k: int) -> int:
        if k < 0:
            return _CONST
        if k == len(vertex_cycles[q]) - 1:
            return n_free + q
        return spin_index[(q, k)]

    terms = []
    for kind, q, k in links:
        code = {GateKind.X_HALF: _X2, GateKind.Y_HALF: _Y2, GateKind.H: _HCZ}[kind]
        terms.append((code, var_of(q, k - 1), var_of(q, k)))
    for q, k, _t in t_marks:
        terms.append((_T, _CONST, var_of(q, k)))
    for (qa, ka), (qb, kb), _t in cz_marks:
        terms.append((_HCZ, var_of(qa, ka), var_of(qb, kb)))
    terms = tuple(terms)

    quad, lin, boundary, const0, bconst, bbconst = _extract_quadratic(
        terms, n_free, n
    )
    return IsingModel(
        n=n,
        x=x_int,
        worldlines=worldlines,
        n_free=n_free,
        g_sparse=g_sparse,
        spin_vertices=tuple(spin_vertices),
        terms=terms,
        quad=quad,
        lin=lin,
        boundary=boundary,
        const0=const0,
        bconst=bconst,
        bbconst=bbconst,
        phase_correction_units=(n_y2 - n_x2) % 8,
        t_marks=tuple(t_marks),
        cz_marks=tuple(cz_marks),
    )


def eval_script_half_units(model: IsingModel, spins, x: int | None = None) -> int:
    """Ground-truth phase of one path, in half-units, straight off the script.

    `spins` holds +-1 per free spin; the output spins come from `x`
    (default: the model's stored bitstring).
    """
    x_int = model.x if x is None else _parse_bitstring(x, model.n)
    svals = list(spins) + [1 - 2 * ((x_int >> q) & 1) for q in range(model.n)]
    return _eval_terms(model.terms, svals)


def _eval_terms(terms, svals) -> int:
    total = 0
    for code, a, b in terms:
        sa = 1 if a == _CONST else svals[a]
        sb = 1 if b == _CONST else svals[b]
        if code == _X2:
            total += 2 * (1 + sa * sb)
        elif code == _Y2:
            total += 2 * (1 - sa) * (1 + sb)
        elif code == _HCZ:
            total += 2 * (1 - sa) * (1 - sb)
        else:
            total += 1 - sb
    return total


def _extract_quadratic(terms, n_free: int, n: int):
    """Exact finite differencing of the script over single and pairwise flips."""
    n_vars = n_free + n
    base = [1] * n_vars
    f0 = _eval_terms(terms, base)

    single = np.empty(n_vars, dtype=np.int64)
    for v in range(n_vars):
        base[v] = -1
        single[v] = _eval_terms(terms, base)
        base[v] = 1

    candidates = sorted(
        {
            (min(a, b), max(a, b))
            for code, a, b in terms
            if code != _T and a != _CONST and b != _CONST and a != b
        }
    )
    pair_coeff: dict[tuple[int, int], int] = {}
    for a, b in candidates:
        base[a] = base[b] = -1
        fab = _eval_terms(terms, base)
        base[a] = base[b] = 1
        num = f0 - single[a] - single[b] + fab
        if num % 4:
            raise AssertionError("phase function is not quadratic over spin flips")
        c = num // 4
        if c:
            pair_coeff[(a, b)] = c

    pair_sum = np.zeros(n_vars, dtype=np.int64)
    for (a, b), c in pair_coeff.items():
        pair_sum[a] += c
        pair_sum[b] += c
    diffs = f0 - single
    if np.any(diffs % 2):
        raise AssertionError("phase function has non-integral linear terms")
    lin_all = diffs // 2 - pair_sum
    const0 = int(f0 - lin_all.sum() - sum(pair_coeff.values()))

    quad = {}
    boundary = {}
    bbconst = {}
    for (a, b), c in pair_coeff.items():
        if b < n_free:
            quad[(a, b)] = int(c)
        elif a < n_free:
            boundary[(a, b - n_free)] = int(c)
        else:
            bbconst[(a - n_free, b - n_free)] = int(c)
    lin = lin_all[:n_free].copy()
    bconst = {q: int(lin_all[n_free + q]) for q in range(n) if lin_all[n_free + q]}
    return quad, lin, boundary, const0, bconst, bbconst


def _effective_form(model: IsingModel):
    """Fields and constant with the stored output bits substituted in."""
    xs = np.array([1 - 2 * ((model.x >> q) & 1) for q in range(model.n)], dtype=np.int64)
    lin = model.lin.copy()
    for (v, q), c in model.boundary.items():
        lin[v] += c * xs[q]
    const = model.const0
    for q, c in model.bconst.items():
        const += c * xs[q]
    for (qa, qb), c in model.bbconst.items():
        const += c * xs[qa] * xs[qb]
    pairs = sorted(model.quad.items())
    pa = np.array([p[0][0] for p in pairs], dtype=np.int64)
    pb = np.array([p[0][1] for p in pairs], dtype=np.int64)
    pc = np.array([p[1] for p in pairs], dtype=np.int64)
    return int(const), lin, pa, pb, pc


def _half_units_bulk(spins: np.ndarray, const, lin, pa, pb, pc) -> np.ndarray:
    vals = spins @ lin
    vals += const
    if len(pc):
        vals += (spins[:, pa] * spins[:, pb]) @ pc
    return vals


def sector_counts(model: IsingModel, max_free: int = MAX_FREE_DEFAULT) -> np.ndarray:
    """Exact path counts per phase sector by full enumeration."""
    if model.n_free > max_free:
        raise CapacityError(
            f"{model.n_free} free spins exceeds the enumeration cap of {max_free}"
        )
    const, lin, pa, pb, pc = _effective_form(model)
    counts = np.zeros(K_SECTORS, dtype=np.int64)
    total = 1 << model.n_free
    if model.n_free == 0:
        counts[(const >> 1) % K_SECTORS] = 1
        return counts
    bit_pos = np.arange(model.n_free, dtype=np.int64)
    for start in range(0, total, _ENUM_BLOCK):
        idx = np.arange(start, min(start + _ENUM_BLOCK, total), dtype=np.int64)
        spins = 1 - 2 * ((idx[:, None] >> bit_pos) & 1)
        half = _half_units_bulk(spins, const, lin, pa, pb, pc)
        counts += np.bincount((half >> 1) % K_SECTORS, minlength=K_SECTORS)
    return counts


def path_sum_amplitude(model: IsingModel, max_free: int = MAX_FREE_DEFAULT) -> complex:
    """<x|psi> as 2^(-g/2) * sum over paths of exp(i pi units / 4).

    The prefactor exponent is the total two-sparse gate count (each such
    gate halves every path amplitude), and the per-gate constant phases of
    X^1/2 and Y^1/2 are reinstated, so the result matches the simulator
    amplitude exactly rather than only up to a global phase.
    """
    for wl in model.worldlines:
        if not wl.vertex_cycles and (model.x >> wl.qubit) & 1:
            return 0.0j  # qubit never leaves |0>
    counts = sector_counts(model, max_free)
    omega = np.exp(1j * np.pi / 4 * np.arange(K_SECTORS))
    z = complex(np.dot(counts.astype(np.float64), omega))
    corr = np.exp(1j * np.pi / 4 * model.phase_correction_units)
    return complex(2.0 ** (-model.g_sparse / 2.0) * corr * z)


def phase_histogram(
    model: IsingModel,
    q_samples: int,
    rng: np.random.Generator | None = None,
    *,
    exhaustive: bool = False,
    max_free: int = MAX_FREE_DEFAULT,
) -> PhaseHistogram:
    """Score Q uniform spin assignments into the eight phase sectors."""
    if exhaustive:
        return PhaseHistogram(sector_counts(model, max_free), model)
    if q_samples < 1:
        raise ConfigError("need at least one sample")
    if rng is None:
        raise ConfigError("a random stream is required unless exhaustive=True")
    const, lin, pa, pb, pc = _effective_form(model)
    counts = np.zeros(K_SECTORS, dtype=np.int64)
    remaining = q_samples
    while remaining > 0:
        block = min(remaining, _ENUM_BLOCK)
        if model.n_free == 0:
            half = np.full(block, const, dtype=np.int64)
        else:
            spins = 1 - 2 * rng.integers(0, 2, size=(block, model.n_free), dtype=np.int64)
            half = _half_units_bulk(spins, const, lin, pa, pb, pc)
        counts += np.bincount((half >> 1) % K_SECTORS, minlength=K_SECTORS)
        remaining -= block
    return PhaseHistogram(counts, model)


def bayesian_alpha(hist: PhaseHistogram, n: int, rho_bar=None) -> float:
    """Equivalent sampling fidelity from a phase histogram.

    rho_bar defaults to the empirical sector excess Q_k/Q - 1/8 with its
    projections onto the two cos/sin Fourier modes removed, which enforces
    the three posterior constraints at leading order in Q/L.
    """
    counts = np.asarray(hist.counts, dtype=np.float64)
    q_total = counts.sum()
    if q_total < 1:
        raise ConfigError("empty histogram")
    k = np.arange(K_SECTORS)
    cosv = np.cos(2 * np.pi * k / K_SECTORS)
    sinv = np.sin(2 * np.pi * k / K_SECTORS)
    if rho_bar is None:
        r = counts / q_total - 1.0 / K_SECTORS
        r = r - (r @ cosv) / (cosv @ cosv) * cosv - (r @ sinv) / (sinv @ sinv) * sinv
        rho_bar = r
    else:
        rho_bar = np.asarray(rho_bar, dtype=np.float64)
    denom = K_SECTORS * rho_bar + 1.0
    w = counts / denom
    s = float(w @ cosv) ** 2 + float(w @ sinv) ** 2
    # alpha = S / (N L) with N = 2^n and L = 2^g; scale in exponent space.
    return math.ldexp(s, -(n + hist.model.g_sparse))


def quadratic_consistency_check(model: IsingModel, rng: np.random.Generator,
                                trials: int = 32) -> None:
    """Assert the extracted form reproduces the script on random assignments."""
    const, lin, pa, pb, pc = _effective_form(model)
    for _ in range(trials):
        spins = 1 - 2 * rng.integers(0, 2, size=model.n_free, dtype=np.int64)
        direct = eval_script_half_units(model, spins.tolist())
        quad = _half_units_bulk(spins[None, :], const, lin, pa, pb, pc)[0]
        if direct != quad:
            raise AssertionError(
                f"quadratic form disagrees with the gate script: {quad} != {direct}"
            )


# ---------------------------------------------------------------------------
# Coupling statistics over the layered random ensemble


@dataclass(frozen=True)
class CouplingStats:
    p_cz: float
    depth: int
    n_models: int
    n_segments: int
    r_values: np.ndarray
    p_empirical: np.ndarray
    p_theory: np.ndarray
    kl_k: np.ndarray  # vertex orders with data, within the requested range
    kl_count: np.ndarray
    kl_mean_diff: np.ndarray  # mean of (k - l) per k
    kl_var_diff: np.ndarray  # variance of (k - l) per k
    kl_mean_l: np.ndarray
    kl_var_ref: np.ndarray  # Gaussian reference (k + mean_l) / 3


def lateral_coupling_pmf(r, p_cz: float):
    """Closed-form P(r) for the lateral coupling strength."""
    r = np.asarray(r)
    scale = 1.0 + p_cz / 8.0
    ratio = (p_cz / 8.0) / scale
    out = np.where(r == 0, (1.0 - p_cz) / scale, 9.0 / scale * ratio ** np.maximum(r, 1))
    return out if out.ndim else float(out)


def gaussian_kl_pdf(k, l):
    """Local Gaussian approximation to p(l | k)."""
    k = np.asarray(k, dtype=np.float64)
    l = np.asarray(l, dtype=np.float64)
    tot = k + l
    return np.sqrt(3.0 / (2.0 * np.pi * tot)) * np.exp(-3.0 * (k - l) ** 2 / (2.0 * tot))


def coupling_statistics(
    lattice: LatticeSpec,
    depth: int,
    p_cz: float,
    n_models: int,
    seed: int,
    *,
    r_max: int = 6,
    k_range=range(10, 31),
) -> CouplingStats:
    """Empirical lateral-coupling and vertex-offset statistics.

    Draws `n_models` layered random circuits, walks every adjacent worldline
    pair, and tallies the CZ count of each renewal segment (the lateral
    coupling J between a fixed vertex pair) plus, for every new vertex k,
    the neighbouring worldline's current vertex index l.  Only interior
    segments are counted: the opening segment (cycle-0 Hadamards cannot
    carry a CZ) and the trailing unterminated one are biased and dropped.
    """
    if n_models < 1:
        raise ConfigError("n_models must be >= 1")
    edges = lattice.edges()
    if not edges:
        raise ConfigError("lattice has no adjacent pairs")
    seed_rng = stream(seed, "coupling_stats")
    model_seeds = seed_rng.integers(0, 2**63, size=n_models)

    r_counts = np.zeros(r_max + 1, dtype=np.int64)
    n_segments = 0
    kmax = max(k_range) + 1
    kl_count = np.zeros(kmax, dtype=np.int64)
    kl_sum = np.zeros(kmax, dtype=np.float64)
    kl_sumsq = np.zeros(kmax, dtype=np.float64)
    kl_sum_l = np.zeros(kmax, dtype=np.float64)

    n = lattice.n
    for ms in model_seeds:
        circ = generate_circuit(lattice, depth, int(ms), Variant.STAT_ENSEMBLE, p_cz=p_cz)
        two_sparse = np.zeros((n, depth + 1), dtype=bool)
        two_sparse[:, 0] = True  # cycle-0 Hadamards
        cz_hits = np.zeros((len(edges), depth + 1), dtype=np.int8)
        edge_idx = {e: i for i, e in enumerate(edges)}
        for layer in range(1, depth + 1):
            for gate in circ.cycles[2 * layer - 1]:
                if gate.kind.is_two_sparse:
                    two_sparse[gate.qubits[0], layer] = True
            for gate in circ.cycles[2 * layer]:
                cz_hits[edge_idx[gate.qubits], layer] += 1

        vertex_no = np.cumsum(two_sparse[:, 1:], axis=1)  # post-H vertex count
        for ei, (a, b) in enumerate(edges):
            renewals = np.flatnonzero(two_sparse[a] | two_sparse[b])
            cz_cum = np.concatenate(([0], np.cumsum(cz_hits[ei])))
            for u, v in zip(renewals[:-1], renewals[1:]):
                if u < 1:
                    continue
                r = int(cz_cum[v] - cz_cum[u])
                if r <= r_max:
                    r_counts[r] += 1
                n_segments += 1
            for i, j in ((a, b), (b, a)):
                layers = np.flatnonzero(two_sparse[i, 1:])  # 0-based layer - 1
                ks = vertex_no[i, layers]
                ls = vertex_no[j, layers]
                sel = ks < kmax
                ks, ls = ks[sel], ls[sel]
                np.add.at(kl_count, ks, 1)
                np.add.at(kl_sum, ks, (ks - ls).astype(np.float64))
                np.add.at(kl_sumsq, ks, ((ks - ls) ** 2).astype(np.float64))
                np.add.at(kl_sum_l, ks, ls.astype(np.float64))

    ks = np.array([k for k in k_range if kl_count[k] > 1], dtype=np.int64)
    mean_diff = kl_sum[ks] / kl_count[ks]
    var_diff = kl_sumsq[ks] / kl_count[ks] - mean_diff**2
    mean_l = kl_sum_l[ks] / kl_count[ks]
    r_values = np.arange(r_max + 1)
    return CouplingStats(
        p_cz=p_cz,
        depth=depth,
        n_models=n_models,
        n_segments=n_segments,
        r_values=r_values,
        p_empirical=r_counts / max(n_segments, 1),
        p_theory=lateral_coupling_pmf(r_values, p_cz),
        kl_k=ks,
        kl_count=kl_count[ks],
        kl_mean_diff=mean_diff,
        kl_var_diff=var_diff,
        kl_mean_l=mean_l,
        kl_var_ref=(ks + mean_l) / 3.0,
    )


# ---------------------------------------------------------------------------
# Treewidth upper bound


def min_fill_width(adjacency: dict[int, set[int]]) -> int:
    """Width of a greedy min-fill elimination ordering (treewidth upper bound)."""
    adj = {v: set(ns) for v, ns in adjacency.items()}
    width = 0
    while adj:
        best = None
        for v in adj:
            ns = adj[v]
            fill = 0
            ns_list = list(ns)
            for i in range(len(ns_list)):
                for j in range(i + 1, len(ns_list)):
                    if ns_list[j] not in adj[ns_list[i]]:
                        fill += 1
            key = (fill, len(ns), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        ns = adj.pop(v)
        width = max(width, len(ns))
        for a in ns:
            adj[a].discard(v)
        ns_list = list(ns)
        for i in range(len(ns_list)):
            for j in range(i + 1, len(ns_list)):
                adj[ns_list[i]].add(ns_list[j])
                adj[ns_list[j]].add(ns_list[i])
    return width


def interaction_graph(model: IsingModel) -> dict[int, set[int]]:
    """Free spins as vertices, nonzero couplings as edges."""
    adj: dict[int, set[int]] = {v: set() for v in range(model.n_free)}
    for (a, b), _c in model.quad.items():
        adj[a].add(b)
        adj[b].add(a)
    return adj


def treewidth_upper_bound(model: IsingModel) -> int:
    return min_fill_width(interaction_graph(model))


# ---------------------------------------------------------------------------
# Verification and export


def verify_path_sum(
    circuit: Circuit,
    *,
    atol: float = 1e-9,
    max_free: int = MAX_FREE_DEFAULT,
    cap: int = DEFAULT_CAP,
):
    """Compare path-sum amplitudes against the simulator for all outputs.

    Returns (max_abs_error, global_phase).  The phase is taken from the
    largest-magnitude amplitude and must be consistent across every output.
    """
    state = run_circuit(circuit, cap=cap)
    model = map_to_ising(circuit, 0)
    amps_ps = np.array(
        [path_sum_amplitude(model.with_output(x), max_free) for x in range(1 << circuit.n)]
    )
    ref = int(np.argmax(np.abs(state.amps)))
    if abs(state.amps[ref]) == 0.0:
        raise ConfigError("simulator state is identically zero")
    phase = amps_ps[ref] / state.amps[ref]
    err = float(np.max(np.abs(amps_ps - phase * state.amps)))
    return err, complex(phase)


def _units_json(half: int):
    return half // 2 if half % 2 == 0 else half / 2.0


def ising_to_dict(model: IsingModel) -> dict:
    """JSON-ready export; `units` values are integer multiples of pi/4
    (half-integral fields appear as x.5).  Fields and the constant are
    resolved under the stored output bitstring; boundary couplings are
    listed separately for reference."""
    eff_const, eff_lin, _, _, _ = _effective_form(model)
    return {
        "n": model.n,
        "n_free": model.n_free,
        "g_sparse": model.g_sparse,
        "vertices": [
            {"qubit": q, "k": k, "cycle": t} for q, k, t in model.spin_vertices
        ],
        "couplings": [
            {"a": a, "b": b, "units": _units_json(c)}
            for (a, b), c in sorted(model.quad.items())
        ],
        "fields": [
            {"v": v, "units": _units_json(int(eff_lin[v]))} for v in range(model.n_free)
        ],
        "boundary_couplings": [
            {"v": v, "qubit": q, "units": _units_json(c)}
            for (v, q), c in sorted(model.boundary.items())
        ],
        "const_units": _units_json(eff_const),
        "phase_correction_units": model.phase_correction_units,
        "x": model.x_string(),
    }
