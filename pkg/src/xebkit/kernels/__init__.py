"""Gate kernel backends.

The compiled Cython core is selected when importable; otherwise the NumPy
fallback is used.  `XEB_BACKEND=pure|compiled` forces the choice (forcing
`compiled` raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _pure as pure

_requested = os.environ.get("XEB_BACKEND", "auto").lower()

if _requested == "pure":
    active = pure
    BACKEND = "pure"
elif _requested in ("auto", "compiled"):
    try:
        from . import _core as active  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        active = pure
        BACKEND = "pure"
else:
    raise ValueError(f"XEB_BACKEND must be auto, pure or compiled, not {_requested!r}")


def backends() -> dict:
    """All importable backends, for equivalence tests and benchmarks."""
    out = {"pure": pure}
    try:
        from . import _core

        out["compiled"] = _core
    except ImportError:
        pass
    return out
