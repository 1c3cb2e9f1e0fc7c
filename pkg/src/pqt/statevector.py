"""
Dense pure states over small labelled qubit registers.

Amplitudes are stored big-endian: the first label in ``PureState.labels`` is
the most significant bit of the amplitude index.  Measurements remove the
measured qubits from the register and return the renormalised residual over
the qubits that remain, keeping their labels.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BasisNotOrthonormal,
    CapacityExceeded,
    NotNormalized,
    OutOfRange,
    UnknownQubitLabel,
)

NORM_TOL = 1e-12
INPUT_TOL = 1e-9
DEFAULT_MAX_QUBITS = 8


def max_qubits():
    """Register capacity guard; ``PQT_MAX_QUBITS`` overrides the default of 8."""
    raw = os.environ.get("PQT_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError:
        raise OutOfRange(f"PQT_MAX_QUBITS must be an integer, got {raw!r}")
    if value < 1:
        raise OutOfRange(f"PQT_MAX_QUBITS must be positive, got {value}")
    return value


@dataclass(frozen=True)
class PureState:
    """Normalised amplitude vector over an ordered tuple of qubit labels."""

    amplitudes: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 2**n:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        labels = tuple(self.labels) if self.labels else tuple(range(n))
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels given for {n} qubits")
        if len(set(labels)) != n:
            raise ValueError(f"duplicate qubit labels {labels}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm is {norm!r}, expected 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_unnormalized(cls, amplitudes, labels=()):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        peak = np.max(np.abs(amps)) if amps.size else 0.0
        if peak > 0:
            amps = amps / peak
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NotNormalized("cannot normalise the zero vector")
        return cls(amps / norm, labels)

    @property
    def num_qubits(self):
        return len(self.labels)

    def tensor_view(self):
        """Amplitudes reshaped to one axis of length 2 per qubit."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def reordered(self, labels: Sequence) -> "PureState":
        """The same state with its register listed in ``labels`` order."""
        labels = tuple(labels)
        if sorted(labels, key=repr) != sorted(self.labels, key=repr):
            raise UnknownQubitLabel(f"{labels} is not a permutation of {self.labels}")
        axes = [self.labels.index(q) for q in labels]
        return PureState(np.transpose(self.tensor_view(), axes).reshape(-1), labels)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    __hash__ = None


@dataclass(frozen=True)
class InfoQubit:
    """The unknown input ``a|0> + b|1>``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        total = abs(a) ** 2 + abs(b) ** 2
        if not (np.isfinite(a) and np.isfinite(b)) or abs(total - 1.0) > INPUT_TOL:
            raise NotNormalized(f"|a|^2 + |b|^2 = {total!r}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def vector(self):
        return np.array([self.a, self.b], dtype=complex)

    def state(self, label=0):
        return make_info_state(self.a, self.b, label=label)


@dataclass(frozen=True)
class GhzResource:
    """Three-qubit channel ``cos(chi)|000> + sin(chi)|111>`` with chi in [0, pi/4]."""

    chi: float

    def __post_init__(self):
        chi = float(self.chi)
        if not (0.0 <= chi <= np.pi / 4 + 1e-15):
            raise OutOfRange(f"chi={chi!r} outside [0, pi/4]")
        object.__setattr__(self, "chi", min(chi, np.pi / 4))

    @property
    def concurrence(self):
        return float(np.sin(2 * self.chi))

    @classmethod
    def from_concurrence(cls, c):
        if not (0.0 <= c <= 1.0):
            raise OutOfRange(f"concurrence {c!r} outside [0, 1]")
        return cls(0.5 * np.arcsin(c))


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome_index: int
    probability: float
    collapsed: PureState | None


class PauliCorrection(enum.Enum):
    """Bob's correction; ``ZX`` applies X first, then Z."""

    I = "I"
    Z = "Z"
    X = "X"
    ZX = "ZX"

    @property
    def matrix(self):
        return _PAULI_MATRICES[self]

    def compose(self, other: "PauliCorrection") -> "PauliCorrection":
        """``self`` after ``other``, up to a global phase."""
        product = self.matrix @ other.matrix
        for p in PauliCorrection:
            if abs(abs(np.vdot(p.matrix, product)) - 2.0) < 1e-12:
                return p
        raise AssertionError("Pauli set not closed")  # pragma: no cover


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI_MATRICES = {
    PauliCorrection.I: np.eye(2, dtype=complex),
    PauliCorrection.Z: _Z,
    PauliCorrection.X: _X,
    PauliCorrection.ZX: _Z @ _X,
}


def make_info_state(a, b, label=0) -> PureState:
    a, b = complex(a), complex(b)
    total = abs(a) ** 2 + abs(b) ** 2
    if abs(total - 1.0) > INPUT_TOL:
        raise NotNormalized(f"|a|^2 + |b|^2 = {total!r}, expected 1")
    amps = np.array([a, b])
    # absorb sub-tolerance input error so the stored state meets NORM_TOL
    return PureState(amps / np.sqrt(total), (label,))


def make_ghz(resource, labels=(1, 2, 3)) -> PureState:
    if not isinstance(resource, GhzResource):
        resource = GhzResource(resource)
    amps = np.zeros(8, dtype=complex)
    amps[0] = np.cos(resource.chi)
    amps[7] = np.sin(resource.chi)
    return PureState(amps, labels)


def tensor(left: PureState, right: PureState, capacity=None) -> PureState:
    capacity = max_qubits() if capacity is None else capacity
    n = left.num_qubits + right.num_qubits
    if n > capacity:
        raise CapacityExceeded(f"{n} qubits exceeds register capacity {capacity}")
    if set(left.labels) & set(right.labels):
        raise ValueError(f"overlapping labels {left.labels} and {right.labels}")
    amps = np.kron(left.amplitudes, right.amplitudes)
    amps /= np.linalg.norm(amps)
    return PureState(amps, left.labels + right.labels)


def validate_basis(vectors, dim) -> np.ndarray:
    """Return ``vectors`` as a (dim, dim) row array, or raise if not orthonormal."""
    vecs = np.asarray(getattr(vectors, "vectors", vectors), dtype=complex)
    if vecs.ndim != 2 or vecs.shape != (dim, dim):
        raise BasisNotOrthonormal(f"expected {dim} vectors of length {dim}, got {vecs.shape}")
    gram = vecs.conj() @ vecs.T
    if np.max(np.abs(gram - np.eye(dim))) > NORM_TOL:
        raise BasisNotOrthonormal("Gram matrix deviates from identity")
    return vecs


def contract(amps: np.ndarray, labels: Sequence, qubits: Sequence, vector) -> tuple:
    """Apply the bra ``<vector|`` to ``qubits`` of a register tensor.

    ``amps`` has one length-2 axis per label followed by any number of batch
    axes, which pass through untouched.  Returns the unnormalised residual
    (same layout, measured axes removed) and the remaining labels.
    """
    labels = tuple(labels)
    try:
        axes = [labels.index(q) for q in qubits]
    except ValueError:
        raise UnknownQubitLabel(f"qubits {tuple(qubits)} not all in register {labels}")
    if len(set(axes)) != len(axes):
        raise ValueError(f"repeated qubit in {tuple(qubits)}")
    n = len(labels)
    batch = amps.shape[n:]
    rest = [i for i in range(n) if i not in axes]
    moved = np.transpose(amps, axes + rest + list(range(n, amps.ndim)))
    flat = moved.reshape(2 ** len(axes), -1)
    out = np.asarray(vector, dtype=complex).conj() @ flat
    out = out.reshape((2,) * len(rest) + batch)
    return out, tuple(labels[i] for i in rest)


def _measure(state: PureState, qubits, vecs) -> list:
    outcomes = []
    tens = state.tensor_view()
    for k, vec in enumerate(vecs):
        residual, rest = contract(tens, state.labels, qubits, vec)
        residual = residual.reshape(-1)
        p = float(np.vdot(residual, residual).real)
        collapsed = None
        if p > 0:
            collapsed = PureState(residual / np.sqrt(p), rest) if rest else None
        outcomes.append(MeasurementOutcome(k, p, collapsed))
    return outcomes


def measure_pair(state: PureState, qubits, basis) -> list:
    """Project two qubits onto a four-vector orthonormal basis.

    Parameters
    ----------
    state : PureState
        Register containing both ``qubits``.
    qubits : (label, label)
        Measured pair; the first label is the more significant bit of the
        basis vectors' amplitude index.
    basis : BellBasis or array_like, shape (4, 4)
        Rows are the basis kets.

    Returns
    -------
    list of MeasurementOutcome
        One per basis vector, in basis order.  Zero-probability outcomes are
        kept, with ``collapsed=None``.
    """
    qubits = tuple(qubits)
    if len(qubits) != 2:
        raise ValueError("measure_pair needs exactly two qubits")
    for q in qubits:
        if q not in state.labels:
            raise UnknownQubitLabel(f"qubit {q!r} not in register {state.labels}")
    vecs = validate_basis(basis, 4)
    return _measure(state, qubits, vecs)


def measure_single(state: PureState, qubit, basis) -> list:
    if qubit not in state.labels:
        raise UnknownQubitLabel(f"qubit {qubit!r} not in register {state.labels}")
    vecs = validate_basis(basis, 2)
    return _measure(state, (qubit,), vecs)


def apply_pauli(state: PureState, correction: PauliCorrection) -> PureState:
    if state.num_qubits != 1:
        raise ValueError("Pauli corrections act on a single-qubit state")
    out = correction.matrix @ state.amplitudes
    return PureState(out / np.linalg.norm(out), state.labels)


def fidelity(candidate: PureState, target) -> float:
    """``|<target|candidate>|^2``; insensitive to global phase."""
    if isinstance(target, InfoQubit):
        tvec = target.vector
    elif isinstance(target, PureState):
        tvec = target.amplitudes
    else:
        tvec = np.asarray(target, dtype=complex)
    f = abs(np.vdot(tvec, candidate.amplitudes)) ** 2
    return float(min(max(f, 0.0), 1.0))
