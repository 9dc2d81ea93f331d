"""Random-circuit sampling, cross-entropy benchmarking, and Ising compilation."""

__version__ = "0.1.0"

from .circuit import (  # noqa: F401
    Circuit,
    ErrorLocation,
    Gate,
    GateCensus,
    GateKind,
    LatticeSpec,
    Variant,
    build_cz_layouts,
    count_gates,
    generate_circuit,
    insert_pauli_error,
    parse,
    remove_pauli_error,
    serialize,
)
from .errors import CapacityError, CircuitFormatError, ConfigError, VerificationError  # noqa: F401
from .rng import stream  # noqa: F401
