"""
Generalized Bell and von Neumann measurement bases.

A generalized Bell vector of exponent ``r`` weights its two kets by
``cos(chi)**r`` and ``sin(chi)**r``.  The k=0,1 vectors live on {|00>, |11>}
and the k=2,3 vectors on {|01>, |10>}, so a basis may use a different
exponent in each sector and stay orthonormal.

Weights are evaluated through ``tan(chi)`` so that exponents in the hundreds
of thousands neither overflow the normalisation constant nor lose the
smaller weight to underflow before normalisation.
"""

from __future__ import annotations

import enum
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .statevector import validate_basis

CHI_MAX = np.pi / 4


def _check_exponent(r):
    if isinstance(r, bool) or not isinstance(r, numbers.Integral) or r < 1:
        raise OutOfRange(f"exponent must be a positive integer, got {r!r}")
    return int(r)


def _check_chi(chi):
    chi = float(chi)
    if not (0.0 <= chi <= CHI_MAX + 1e-15):
        raise OutOfRange(f"chi={chi!r} outside [0, pi/4]")
    return min(chi, CHI_MAX)


def normalization(r, chi) -> float:
    """``(cos(chi)**(2r) + sin(chi)**(2r))**-0.5``; may be ``inf`` for huge r."""
    r = _check_exponent(r)
    chi = _check_chi(chi)
    with np.errstate(divide="ignore", over="ignore"):
        log_c = 2 * r * np.log(np.cos(chi))
        log_s = 2 * r * np.log(np.sin(chi)) if chi > 0 else -np.inf
        return float(np.exp(-0.5 * np.logaddexp(log_c, log_s)))


def weights(r, chi):
    """Normalised pair ``(N_r cos^r chi, N_r sin^r chi)``."""
    r = _check_exponent(r)
    chi = _check_chi(chi)
    t = np.tan(chi)
    with np.errstate(under="ignore"):
        tr = t**r if t < 1.0 else 1.0
    scale = 1.0 / np.sqrt(1.0 + tr * tr)
    return scale, tr * scale


@dataclass(frozen=True)
class BellVector:
    r: int
    k: int
    chi: float
    amplitudes: np.ndarray

    @property
    def sector(self):
        return "diag" if self.k < 2 else "off"


def bell_vector(r, k, chi) -> BellVector:
    if k not in (0, 1, 2, 3):
        raise OutOfRange(f"sector index k must be 0..3, got {k!r}")
    r = _check_exponent(r)
    chi = _check_chi(chi)
    wc, ws = weights(r, chi)
    amps = np.zeros(4, dtype=complex)
    lo, hi = (0, 3) if k < 2 else (1, 2)
    if k % 2 == 0:
        amps[lo], amps[hi] = wc, ws
    else:
        amps[lo], amps[hi] = ws, -wc
    amps.flags.writeable = False
    return BellVector(r, k, chi, amps)


@dataclass(frozen=True)
class BellBasis:
    r_diag: int
    r_off: int
    chi: float
    bell_vectors: tuple

    @property
    def exponents(self):
        return (self.r_diag, self.r_off)

    @property
    def vectors(self):
        return np.array([v.amplitudes for v in self.bell_vectors])

    def __iter__(self):
        return iter(self.bell_vectors)

    def __len__(self):
        return 4


def mixed_basis(r_diag, r_off, chi) -> BellBasis:
    """Four-vector basis using ``r_diag`` for k=0,1 and ``r_off`` for k=2,3."""
    chi = _check_chi(chi)
    vecs = tuple(bell_vector(r_diag if k < 2 else r_off, k, chi) for k in range(4))
    basis = BellBasis(int(r_diag), int(r_off), chi, vecs)
    validate_basis(basis.vectors, 4)
    return basis


class VnmKind(enum.Enum):
    PLAIN = "plain"
    GENERALIZED = "generalized"


@dataclass(frozen=True)
class VnmBasis:
    kind: VnmKind
    r: int | None
    chi: float | None
    vectors: np.ndarray


def vnm_basis(kind=VnmKind.PLAIN, r=None, chi=None) -> VnmBasis:
    """Single-qubit basis: ``{|+>, |->}`` or the generalized ``{C^(r,0), C^(r,1)}``."""
    kind = VnmKind(kind)
    if kind is VnmKind.PLAIN:
        vecs = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        r = chi = None
    else:
        if r is None or chi is None:
            raise OutOfRange("generalized VNM basis needs both r and chi")
        r = _check_exponent(r)
        chi = _check_chi(chi)
        wc, ws = weights(r, chi)
        vecs = np.array([[wc, ws], [ws, -wc]], dtype=complex)
    vecs.flags.writeable = False
    validate_basis(vecs, 2)
    return VnmBasis(kind, r, chi, vecs)
