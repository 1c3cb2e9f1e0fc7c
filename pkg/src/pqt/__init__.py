"""
Probabilistic teleportation through a non-maximally entangled GHZ channel.

Alice holds the input qubit and two halves of ``cos(chi)|000> + sin(chi)|111>``;
Bob holds the third.  She measures the input together with one channel qubit
in a generalized Bell basis and, when the outcome leaves Bob's qubit in a
state he cannot fix with a Pauli, tries again with the other channel qubit
and a basis matched to the collapsed state.

Modules
-------
statevector
    Labelled pure states, projective measurements, Pauli corrections.
bases
    Generalized Bell and von Neumann measurement bases.
protocol
    The repeated-measurement protocol: exact enumeration and sampling.
analytic
    Closed-form branch and success probabilities used as oracles.
sweeps
    Concurrence sweeps of success probability and average fidelity.
verification
    Self-checks comparing the simulator with the closed forms.
"""

from .analytic import baseline_fidelity, p_success
from .bases import BellBasis, VnmBasis, VnmKind, bell_vector, mixed_basis, normalization, vnm_basis
from .errors import (
    BasisNotOrthonormal,
    CapacityExceeded,
    InvalidSpec,
    NoMatchedBasis,
    NotNormalized,
    OutOfRange,
    PQTError,
    UnknownQubitLabel,
    UnsupportedDepth,
)
from .protocol import (
    ProtocolConfig,
    ProtocolTrace,
    Status,
    Termination,
    classify,
    derive_correction,
    enumerate_leaves,
    run_enumeration,
    run_sampled,
    select_basis,
    terminate_with_vnm,
)
from .statevector import (
    GhzResource,
    InfoQubit,
    PauliCorrection,
    PureState,
    fidelity,
    make_ghz,
    make_info_state,
    measure_pair,
    measure_single,
    tensor,
)
from .sweeps import SweepSpec, average_fidelity, maf_rows, success_probability, sweep_rows

__version__ = "0.1.0"
