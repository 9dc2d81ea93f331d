"""NumPy fallback kernels; same contracts as the compiled core.

All functions mutate the complex128 state in place.  `nthreads` is accepted
for interface parity and ignored.
"""

from __future__ import annotations

import numpy as np


def two_sparse(amps, q, m00, m01, m10, m11, nthreads=1):
    view = amps.reshape(-1, 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = m00 * a0 + m01 * a1
    view[:, 1, :] = m10 * a0 + m11 * a1


def diag_unit(amps, q, d1, nthreads=1):
    view = amps.reshape(-1, 2, 1 << q)
    view[:, 1, :] *= d1


def diag(amps, q, d0, d1, nthreads=1):
    view = amps.reshape(-1, 2, 1 << q)
    view[:, 0, :] *= d0
    view[:, 1, :] *= d1


def cz(amps, q_lo, q_hi, nthreads=1):
    mid = 1 << (q_hi - q_lo - 1) if q_hi - q_lo > 1 else 1
    view = amps.reshape(-1, 2, mid, 2, 1 << q_lo)
    np.negative(view[:, 1, :, 1, :], out=view[:, 1, :, 1, :])
