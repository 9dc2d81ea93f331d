"""Cross-entropy benchmarking statistics and Porter-Thomas diagnostics.

All entropies are in nats.  Probabilities below ``LOG_FLOOR`` are clamped
before taking logs; reports carry the clamp count so scored-impossible
bitstrings are visible rather than silent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .circuit import GateCensus
from .errors import ConfigError
from .statevector import Sample

EULER_GAMMA = float(np.euler_gamma)
LOG_FLOOR = 1e-300
PT_ENTROPY_SIGMA = 0.75  # std of the output entropy scales as 0.75 * 2^(-n/2)


def entropy(p: np.ndarray) -> float:
    """Shannon entropy -sum p log p with 0 log 0 := 0."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0.0]
    return float(-np.dot(nz, np.log(nz)))


def pt_entropy(n: int) -> float:
    """Entropy of a Porter-Thomas distributed output: ln N - 1 + gamma."""
    return n * math.log(2.0) - 1.0 + EULER_GAMMA


def h0(n: int) -> float:
    """Cross entropy of the uniform sampler: ln N + gamma."""
    return n * math.log(2.0) + EULER_GAMMA


def _clamped_log(p: np.ndarray) -> tuple[np.ndarray, int]:
    p = np.asarray(p, dtype=np.float64)
    clamped = int(np.count_nonzero(p < LOG_FLOOR))
    return np.log(np.maximum(p, LOG_FLOOR)), clamped


def cross_entropy(p_a: np.ndarray, p_u: np.ndarray) -> float:
    """H(p_a, p_u) = -sum p_a log p_u."""
    logs, _ = _clamped_log(p_u)
    return float(-np.dot(np.asarray(p_a, dtype=np.float64), logs))


def cross_entropy_difference(p_a: np.ndarray, p_u: np.ndarray) -> float:
    """Delta H = H0 - H(p_a, p_u); 1 for an ideal Porter-Thomas sampler, 0 for uniform."""
    n = int(round(math.log2(len(p_u))))
    return h0(n) - cross_entropy(p_a, p_u)


@dataclass(frozen=True)
class XebReport:
    alpha: float
    h0: float
    stderr: float
    m: int
    n: int
    clamped: int = 0

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "h0": self.h0,
            "stderr": self.stderr,
            "m": self.m,
            "n": self.n,
            "clamped": self.clamped,
        }


def estimate_alpha(sample, p_u: np.ndarray, n: int | None = None) -> XebReport:
    """XEB estimate: alpha = H0 - mean(log 1/p_u(x)) over the sample."""
    if isinstance(sample, Sample):
        xs = sample.bitstrings
        if n is None:
            n = sample.n
    else:
        xs = np.asarray(sample, dtype=np.int64)
    if n is None:
        n = int(round(math.log2(len(p_u))))
    if len(xs) == 0:
        raise ConfigError("empty sample")
    logs, clamped = _clamped_log(np.asarray(p_u, dtype=np.float64)[xs])
    ref = h0(n)
    alpha = ref + float(np.mean(logs))
    stderr = float(np.std(logs, ddof=1) / math.sqrt(len(xs))) if len(xs) > 1 else 0.0
    return XebReport(alpha=alpha, h0=ref, stderr=stderr, m=len(xs), n=n, clamped=clamped)


def predicted_fidelity(census: GateCensus, noise, n: int) -> float:
    """Digital error model estimate exp(-r1 g1 - r2 g2 - r_init n - r_mes n).

    g1 counts every single-qubit gate including the initial Hadamard cycle,
    since the model attaches an error channel to every gate.
    """
    expo = (
        noise.r1 * census.g1
        + noise.r2 * census.g2
        + noise.r_init * n
        + noise.r_mes * n
    )
    return math.exp(-expo)


def pt_pdf(z, alpha: float):
    """Density of z = log(N p) for a sampler of fidelity alpha."""
    z = np.asarray(z, dtype=np.float64)
    ez = np.exp(z)
    return np.exp(z - ez) * (1.0 + alpha * (ez - 1.0))


def pt_cdf(z, alpha: float):
    z = np.asarray(z, dtype=np.float64)
    ez = np.exp(z)
    return 1.0 - np.exp(-ez) * (1.0 + alpha * ez)


def fit_alpha(zs) -> float:
    """Maximum-likelihood fidelity over [0, 1] from z = log(N p) values."""
    zs = np.asarray(zs, dtype=np.float64)
    if len(zs) == 0:
        raise ConfigError("need at least one z value")
    w = np.exp(zs) - 1.0

    def neg_ll(a):
        return -float(np.sum(np.log1p(a * w)))

    res = minimize_scalar(neg_ll, bounds=(0.0, 1.0), method="bounded",
                          options={"xatol": 1e-6})
    return float(res.x)


def rescaled_log_probs(p_u: np.ndarray, bitstrings) -> np.ndarray:
    """z = log(N p_u(x)) for each sampled bitstring."""
    xs = bitstrings.bitstrings if isinstance(bitstrings, Sample) else np.asarray(bitstrings)
    logs, _ = _clamped_log(np.asarray(p_u, dtype=np.float64)[xs])
    return logs + math.log(len(p_u))


def normalized_ipr(p: np.ndarray, k: int) -> float:
    """N^(k-1) sum p^k; tends to k! in the Porter-Thomas regime."""
    if k < 2:
        raise ConfigError("ipr order must be >= 2")
    p = np.asarray(p, dtype=np.float64)
    return float(np.sum(p**k)) * float(len(p)) ** (k - 1)


def ipr_profile(p: np.ndarray, ks=range(2, 11)) -> dict[int, float]:
    return {int(k): normalized_ipr(p, int(k)) for k in ks}


@dataclass(frozen=True)
class PtStats:
    cycle: int
    entropy: float
    normalized_ipr: dict


def pt_convergence_depth(entropy_trace, n: int, sigmas: float = 4.0):
    """First cycle whose entropy stays within the Porter-Thomas band forever after.

    The band is sigmas * 0.75 * 2^(-n/2) around ln N - 1 + gamma.  Returns
    None when the trace never settles inside the band.
    """
    trace = np.asarray(entropy_trace, dtype=np.float64)
    if len(trace) == 0:
        raise ConfigError("empty entropy trace")
    band = sigmas * PT_ENTROPY_SIGMA * 2.0 ** (-n / 2.0)
    ok = np.abs(trace - pt_entropy(n)) <= band
    t = len(trace)
    for i in range(len(trace) - 1, -1, -1):
        if not ok[i]:
            break
        t = i
    return None if t == len(trace) else int(t)


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation; 0 by convention when either vector is constant."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    da = a - a.mean()
    db = b - b.mean()
    va = float(np.dot(da, da))
    vb = float(np.dot(db, db))
    if va == 0.0 or vb == 0.0:
        return 0.0
    return float(np.dot(da, db) / math.sqrt(va * vb))


def error_correlation(p_ideal: np.ndarray, p_err: np.ndarray, bins: int = 50,
                      lo: float = 1e-4, hi: float = 1e2):
    """Correlation of two output distributions plus a log-log 2D histogram.

    Histogram axes are N*p for the ideal (x) and errored (y) vectors with
    fixed logarithmic binning over [lo, hi].
    """
    if len(p_ideal) != len(p_err):
        raise ConfigError("probability vectors must have equal length")
    r = pearson(p_ideal, p_err)
    n_amp = float(len(p_ideal))
    edges = np.logspace(math.log10(lo), math.log10(hi), bins + 1)
    counts, _, _ = np.histogram2d(
        np.clip(n_amp * np.asarray(p_ideal), lo, hi),
        np.clip(n_amp * np.asarray(p_err), lo, hi),
        bins=(edges, edges),
    )
    return r, counts, edges


def log_likelihood_gap(p_u: np.ndarray, sample_a, sample_b) -> float:
    """sum log p_u over sample_a minus the same over sample_b."""
    xs_a = sample_a.bitstrings if isinstance(sample_a, Sample) else np.asarray(sample_a)
    xs_b = sample_b.bitstrings if isinstance(sample_b, Sample) else np.asarray(sample_b)
    if len(xs_a) != len(xs_b):
        raise ConfigError("samples must have the same size")
    logs, _ = _clamped_log(np.asarray(p_u, dtype=np.float64))
    return float(np.sum(logs[xs_a]) - np.sum(logs[xs_b]))
