"""Deterministic counter-based random number streams.

Every stochastic component draws from its own Philox stream keyed by
``(seed, *labels)``, so results are reproducible and independent of the
order in which components execute.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def stream_key(seed: int, *labels) -> np.ndarray:
    """128-bit Philox key derived from (seed, labels) via SHA-256."""
    h = hashlib.sha256()
    h.update(struct.pack("<Q", int(seed) & _MASK64))
    for label in labels:
        if isinstance(label, (bool,)):
            raise TypeError("stream labels must be str or int")
        if isinstance(label, (int, np.integer)):
            h.update(b"i")
            h.update(struct.pack("<q", int(label)))
        elif isinstance(label, str):
            h.update(b"s")
            h.update(label.encode("utf-8"))
            h.update(b"\x00")
        else:
            raise TypeError(f"stream labels must be str or int, got {type(label)!r}")
    return np.frombuffer(h.digest()[:16], dtype=np.uint64).copy()


def stream(seed: int, *labels) -> np.random.Generator:
    """Independent random stream for (seed, labels)."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, *labels)))
