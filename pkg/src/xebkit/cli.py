"""Command-line entry point for reproducible experiment runs.

Every structured output embeds the tool version and the resolved
configuration, so any emitted file can be regenerated from its own header.
Exit codes: 0 success, 2 configuration error, 3 capacity error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, analysis, ising, noise as noise_mod
from .circuit import (
    Circuit,
    LatticeSpec,
    Variant,
    count_gates,
    generate_circuit,
    parse,
    serialize,
)
from .errors import CapacityError, ConfigError, VerificationError
from .rng import stream
from .statevector import (
    DEFAULT_CAP,
    init_state,
    amplitude,
    apply_circuit,
    load_state,
    probabilities,
    sample as sample_state,
    save_state,
    threads,
)


def _add_lattice_args(p):
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="sec4")
    p.add_argument("--periodic", action="store_true", default=None,
                   help="periodic boundaries (default: only for dense)")
    p.add_argument("--p-cz", type=float, default=0.25,
                   help="per-edge CZ probability for the stat_ensemble variant")


def _add_common_args(p):
    p.add_argument("--circuit", help="read the circuit from a JSON file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--threads", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="maximum simulable qubit count")


def _add_noise_args(p):
    p.add_argument("--r1", type=float, default=0.0)
    p.add_argument("--r2", type=float, default=0.0)
    p.add_argument("--r-init", type=float, default=0.0)
    p.add_argument("--r-mes", type=float, default=0.0)


def _resolved_config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _meta(args, command: str) -> dict:
    return {
        "tool": "xebkit",
        "version": __version__,
        "command": command,
        "threads": threads(),
        "config": _resolved_config(args),
    }


def _emit_json(obj: dict, out) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_text(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_circuit(args) -> Circuit:
    if args.circuit:
        with open(args.circuit) as fh:
            return parse(fh.read())
    if args.rows is None or args.cols is None or args.depth is None:
        raise ConfigError("need --circuit or all of --rows/--cols/--depth")
    variant = Variant(args.variant)
    periodic = args.periodic
    if periodic is None:
        periodic = variant is Variant.DENSE
    lattice = LatticeSpec(args.rows, args.cols, periodic)
    return generate_circuit(lattice, args.depth, args.seed, variant, p_cz=args.p_cz)


def _noise_model(args) -> noise_mod.NoiseModel:
    return noise_mod.NoiseModel(
        r1=args.r1, r2=args.r2, r_init=args.r_init, r_mes=args.r_mes
    )


# ---------------------------------------------------------------------------
# Subcommands


def cmd_generate(args) -> int:
    circuit = _build_circuit(args)
    text = serialize(circuit)
    census = count_gates(circuit)
    report = {**_meta(args, "generate"), "census": census.as_dict()}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit_json(report, None)
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(report) + "\n")
    return 0


def cmd_simulate(args) -> int:
    circuit = _build_circuit(args)
    entropies: list[float] = []
    iprs: dict[int, list[float]] = {k: [] for k in range(2, 11)}

    def observer(t, view):
        p = np.abs(view)
        p = p * p
        entropies.append(analysis.entropy(p))
        for k in iprs:
            iprs[k].append(analysis.normalized_ipr(p, k))

    state = init_state(circuit.n, args.cap)
    apply_circuit(state, circuit, observer, fuse=args.fuse)
    p_final = probabilities(state)
    delta_h = analysis.cross_entropy_difference(p_final, p_final)
    conv = analysis.pt_convergence_depth(entropies, circuit.n)
    report = {
        **_meta(args, "simulate"),
        "n": circuit.n,
        "depth": circuit.num_cycles - 1,
        "seed": circuit.seed,
        "entropy": entropies,
        "ipr": {str(k): v for k, v in iprs.items()},
        "delta_h": delta_h,
        "alpha": delta_h,
        "stderr": 0.0,
        "pt_entropy": analysis.pt_entropy(circuit.n),
        "convergence_cycle": conv,
    }
    if args.dump_state:
        save_state(state, args.dump_state)
        report["state_dump"] = args.dump_state
    if args.trace_csv:
        with open(args.trace_csv, "w") as fh:
            fh.write("cycle,entropy," + ",".join(f"ipr{k}" for k in range(2, 11)) + "\n")
            for t, h in enumerate(entropies):
                row = [str(t), repr(h)] + [repr(iprs[k][t]) for k in range(2, 11)]
                fh.write(",".join(row) + "\n")
    _emit_json(report, args.out)
    return 0


def cmd_sample(args) -> int:
    circuit = _build_circuit(args)
    model = _noise_model(args)
    if model.is_zero:
        state = init_state(circuit.n, args.cap)
        apply_circuit(state, circuit)
        result = sample_state(state, args.m, stream(args.seed, "sample"))
    else:
        result = noise_mod.noisy_sample(
            circuit, model, args.m, args.seed,
            draws_per_traj=args.draws_per_traj,
            checkpoints=noise_mod.Checkpoints(circuit, cap=args.cap),
            cap=args.cap,
        )
    if args.out:
        noise_mod.write_sample(args.out, result, args.seed)
        _emit_json({**_meta(args, "sample"), "m": result.m, "n": result.n}, None)
    else:
        noise_mod.write_sample("/dev/stdout", result, args.seed)
    return 0


def cmd_xeb(args) -> int:
    circuit = _build_circuit(args)
    sample, _file_seed = noise_mod.read_sample(args.sample)
    if sample.n != circuit.n:
        raise ConfigError(f"sample has {sample.n} qubits, circuit has {circuit.n}")
    state = init_state(circuit.n, args.cap)
    apply_circuit(state, circuit)
    p_u = probabilities(state)
    report = analysis.estimate_alpha(sample, p_u, circuit.n)
    _emit_json({**_meta(args, "xeb"), **report.as_dict()}, args.out)
    return 0


def _parse_sizes(spec: str):
    sizes = []
    for token in spec.split(","):
        token = token.strip().lower()
        try:
            r, c = token.split("x")
            sizes.append((int(r), int(c)))
        except ValueError:
            raise ConfigError(f"bad size {token!r}; expected ROWSxCOLS") from None
    return sizes


def cmd_sweep(args) -> int:
    sizes = _parse_sizes(args.sizes)
    rates = [float(tok) for tok in args.rates.split(",")]
    seeds = list(range(args.seeds))
    rows_out = []
    summary = {}
    for rows, cols in sizes:
        lattice = LatticeSpec(rows, cols)
        for seed in seeds:
            circuit = generate_circuit(lattice, args.depth, seed)
            census = count_gates(circuit)
            checkpoints = noise_mod.Checkpoints(circuit, cap=args.cap)
            for r in rates:
                model = noise_mod.NoiseModel(
                    r1=r * args.r1_factor, r2=r, r_init=r, r_mes=r
                )
                n_traj = 1 if model.is_zero else args.n_traj
                delta_h, err = noise_mod.noisy_delta_h_exact(
                    circuit, model, n_traj, seed, checkpoints=checkpoints, cap=args.cap
                )
                predicted = analysis.predicted_fidelity(census, model, circuit.n)
                rows_out.append(
                    (rows, cols, circuit.n, args.depth, seed, r,
                     model.r1, model.r2, model.r_init, model.r_mes,
                     n_traj, delta_h, err, predicted)
                )
                summary.setdefault((rows, cols, r), []).append(delta_h)
    header = ("rows,cols,n,depth,seed,r,r1,r2,r_init,r_mes,"
              "n_traj,delta_h,delta_h_err,predicted_alpha")
    lines = ["# " + json.dumps(_meta(args, "sweep")), header]
    for row in rows_out:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    _emit_text("\n".join(lines) + "\n", args.out)
    for (rows, cols, r), values in sorted(summary.items()):
        mean = float(np.mean(values))
        std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        sys.stderr.write(f"{rows}x{cols} r={r}: delta_h = {mean:.4f} +- {std:.4f}\n")
    return 0


def cmd_ising(args) -> int:
    if args.stats:
        if args.rows is None or args.cols is None:
            raise ConfigError("--stats needs --rows/--cols")
        lattice = LatticeSpec(args.rows, args.cols, bool(args.periodic))
        stats = ising.coupling_statistics(
            lattice, args.stat_depth, args.p_cz, args.models, args.seed
        )
        lines = ["# " + json.dumps(_meta(args, "ising-stats"))]
        lines.append("r,p_empirical,p_theory")
        for r, pe, pt in zip(stats.r_values, stats.p_empirical, stats.p_theory):
            lines.append(f"{r},{pe!r},{pt!r}")
        lines.append("k,count,mean_k_minus_l,var_k_minus_l,gaussian_var_ref")
        for i, k in enumerate(stats.kl_k):
            lines.append(
                f"{k},{stats.kl_count[i]},{stats.kl_mean_diff[i]!r},"
                f"{stats.kl_var_diff[i]!r},{stats.kl_var_ref[i]!r}"
            )
        _emit_text("\n".join(lines) + "\n", args.out)
        return 0

    circuit = _build_circuit(args)
    x = args.x if args.x is not None else "0" * circuit.n
    model = ising.map_to_ising(circuit, x)
    report = {**_meta(args, "ising"), **ising.ising_to_dict(model)}
    if args.treewidth:
        report["treewidth_upper_bound"] = ising.treewidth_upper_bound(model)
    if args.bayes:
        hist = ising.phase_histogram(
            model, args.bayes, stream(args.seed, "bayes"), max_free=args.max_free
        )
        report["bayes_q"] = args.bayes
        report["bayes_alpha"] = ising.bayesian_alpha(hist, circuit.n)
        report["phase_counts"] = hist.counts.tolist()
    if args.verify:
        err, phase = ising.verify_path_sum(
            circuit, max_free=args.max_free, cap=args.cap
        )
        ok = err <= args.tol and abs(abs(phase) - 1.0) <= args.tol
        report["verify"] = {
            "max_abs_error": err,
            "global_phase": [phase.real, phase.imag],
            "tolerance": args.tol,
            "ok": ok,
        }
        status = "consistent" if ok else "INCONSISTENT"
        sys.stderr.write(f"global phase {status}, max err {err:.3e}\n")
        if not ok:
            _emit_json(report, args.out)
            raise VerificationError(
                f"path-sum amplitudes deviate from the simulator by {err:.3e}"
            )
    _emit_json(report, args.out)
    return 0


def cmd_amplitude(args) -> int:
    state = load_state(args.state)
    if len(args.x) != state.n or set(args.x) - {"0", "1"}:
        raise ConfigError(f"--x must be {state.n} chars of 0/1")
    x = sum(1 << q for q, ch in enumerate(args.x) if ch == "1")
    a = amplitude(state, x)
    _emit_json(
        {
            **_meta(args, "amplitude"),
            "n": state.n,
            "x": args.x,
            "amplitude": [a.real, a.imag],
            "prob": abs(a) ** 2,
        },
        args.out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xebkit",
        description="Random-circuit sampling, XEB statistics, and Ising compilation",
    )
    parser.add_argument("--version", action="version", version=f"xebkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a circuit and print its gate census")
    _add_lattice_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="simulate and emit per-cycle statistics")
    _add_lattice_args(p)
    _add_common_args(p)
    p.add_argument("--fuse", action="store_true", help="enable low-qubit gate fusion")
    p.add_argument("--dump-state", help="write the final state as a binary dump")
    p.add_argument("--trace-csv", help="write the per-cycle trace as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="draw bitstrings (ideal or noisy)")
    _add_lattice_args(p)
    _add_common_args(p)
    _add_noise_args(p)
    p.add_argument("-m", type=int, required=True, help="number of bitstrings")
    p.add_argument("--draws-per-traj", type=int, default=1,
                   help="bitstrings per noise trajectory (>1 trades "
                        "independence for speed)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("xeb", help="score a sample file against a circuit")
    _add_lattice_args(p)
    _add_common_args(p)
    p.add_argument("--sample", required=True, help="sample file to score")
    p.set_defaults(func=cmd_xeb)

    p = sub.add_parser("sweep", help="ensemble sweep over sizes, seeds and rates")
    _add_common_args(p)
    p.add_argument("--sizes", required=True, help="comma list like 4x4,5x4")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--seeds", type=int, default=10, help="use seeds 0..N-1")
    p.add_argument("--rates", required=True, help="comma list of base rates r")
    p.add_argument("--r1-factor", type=float, default=0.1,
                   help="r1 = factor * r (two-qubit, init and mes rates equal r)")
    p.add_argument("--n-traj", type=int, default=60,
                   help="trajectories per cell for the noisy cells")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ising", help="compile to an Ising model and analyse it")
    _add_lattice_args(p)
    _add_common_args(p)
    p.add_argument("--x", help="output bitstring (qubit 0 leftmost; default all zeros)")
    p.add_argument("--verify", action="store_true",
                   help="check path-sum amplitudes against the simulator")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--treewidth", action="store_true",
                   help="report the greedy elimination treewidth bound")
    p.add_argument("--bayes", type=int, metavar="Q",
                   help="sample Q spin configurations and report the Bayesian alpha")
    p.add_argument("--max-free", type=int, default=ising.MAX_FREE_DEFAULT,
                   help="enumeration cap on free spins")
    p.add_argument("--stats", action="store_true",
                   help="emit coupling statistics for the layered random ensemble")
    p.add_argument("--models", type=int, default=2000)
    p.add_argument("--stat-depth", type=int, default=48)
    p.set_defaults(func=cmd_ising)

    p = sub.add_parser("amplitude", help="read one amplitude from a state dump")
    p.add_argument("--state", required=True, help="binary state dump")
    p.add_argument("--x", required=True, help="bitstring, qubit 0 leftmost")
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_amplitude)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        os.environ["XEB_THREADS"] = str(args.threads)
    try:
        return args.func(args) or 0
    except CapacityError as e:
        sys.stderr.write(f"capacity error: {e}\n")
        return 3
    except VerificationError as e:
        sys.stderr.write(f"verification failure: {e}\n")
        return 4
    except ConfigError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
