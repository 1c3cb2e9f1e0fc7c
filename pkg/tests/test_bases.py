import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pqt.bases import VnmKind, bell_vector, mixed_basis, normalization, vnm_basis, weights
from pqt.errors import OutOfRange

EXPONENTS = (1, 3, 9, 27)


@pytest.mark.parametrize(
    "r, chi, expected",
    [
        (1, math.pi / 4, 1.0),
        (1, math.pi / 6, 1.0),  # cos^2 + sin^2
        (3, math.pi / 4, 2.0),  # (2 * 2**-3) ** -0.5
        (2, math.pi / 6, (9 / 16 + 1 / 16) ** -0.5),
    ],
)
def test_normalization_examples(r, chi, expected):
    assert normalization(r, chi) == pytest.approx(expected, rel=1e-14)


def test_normalization_huge_exponent_is_finite_through_weights():
    wc, ws = weights(3**12, 0.3)
    assert wc == pytest.approx(1.0)
    assert ws == 0.0
    assert np.isfinite(normalization(3**5, 0.3))


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_exponent_must_be_positive_integer(bad):
    with pytest.raises(OutOfRange):
        bell_vector(bad, 0, 0.3)


def test_chi_and_k_validation():
    with pytest.raises(OutOfRange):
        bell_vector(1, 4, 0.3)
    with pytest.raises(OutOfRange):
        mixed_basis(1, 1, 1.0)
    with pytest.raises(OutOfRange):
        vnm_basis(VnmKind.GENERALIZED, r=None, chi=0.3)


def test_bell_vector_layout():
    c, s = math.cos(0.4), math.sin(0.4)
    n = (c**6 + s**6) ** -0.5
    v = bell_vector(3, 1, 0.4).amplitudes
    np.testing.assert_allclose(v, [n * s**3, 0, 0, -n * c**3], rtol=1e-14)
    v = bell_vector(3, 2, 0.4).amplitudes
    np.testing.assert_allclose(v, [0, n * c**3, n * s**3, 0], rtol=1e-14)


def test_pi_over_four_gives_standard_bell_basis():
    h = 1 / math.sqrt(2)
    bell = np.array([[h, 0, 0, h], [h, 0, 0, -h], [0, h, h, 0], [0, h, -h, 0]])
    for r in (1, 3, 9):
        np.testing.assert_allclose(mixed_basis(r, r, math.pi / 4).vectors, bell, atol=1e-15)


@pytest.mark.parametrize("r_diag, r_off", list(itertools.product(EXPONENTS, EXPONENTS)))
def test_gram_and_completeness(r_diag, r_off):
    for chi in np.linspace(0, math.pi / 4, 50):
        m = mixed_basis(r_diag, r_off, chi).vectors
        np.testing.assert_allclose(m.conj() @ m.T, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(m.T @ m.conj(), np.eye(4), atol=1e-12)


@given(st.integers(1, 60), st.floats(1e-3, math.pi / 4))
def test_normalization_at_least_one(r, chi):
    n = normalization(r, chi)
    assert n >= 1 - 1e-12
    wc, ws = weights(r, chi)
    assert wc**2 + ws**2 == pytest.approx(1, abs=1e-14)


@given(st.integers(1, 40), st.floats(0, math.pi / 4))
def test_generalized_vnm_orthonormal(r, chi):
    v = vnm_basis(VnmKind.GENERALIZED, r, chi).vectors
    np.testing.assert_allclose(v @ v.conj().T, np.eye(2), atol=1e-12)
