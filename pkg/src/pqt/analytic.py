"""
Closed-form branch and success probabilities.

Everything here is written out directly in ``cos chi`` / ``sin chi`` or in the
concurrence ``C = sin 2chi`` and never touches the simulator, so it can be
used to cross-check the enumeration.

The concurrence forms rest on two identities::

    cos^2 chi sin^2 chi = C^2 / 4
    cos^6 chi + sin^6 chi = (4 - 3 C^2) / 4

Third-repetition increment: the reference eight-term expression has one term
(the ``C**54`` one) whose last denominator factor reads
``4 D^2 (D^2 - C^6)^2 - C^18`` with ``D = 4 - 3C^2``; it is negative at
``C = 1`` and does not reproduce the enumerated tree.  Expanding
``cos^54 + sin^54`` through the same identities gives
``4 D^2 (4 D^2 - 3 C^6)^2 - 3 C^18``, which does.  :func:`p_success` uses the
corrected factor; :func:`third_increment_terms` exposes both for auditing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange, UnsupportedDepth

CHI_MIN = 1e-3


def concurrence(chi):
    return np.sin(2 * np.asarray(chi, dtype=float))


def chi_from_concurrence(c):
    c = np.asarray(c, dtype=float)
    if np.any((c < 0) | (c > 1)):
        raise OutOfRange("concurrence must lie in [0, 1]")
    return 0.5 * np.arcsin(c)


def _check_c(c):
    c = np.asarray(c, dtype=float)
    if np.any((c < 0) | (c > 1)):
        raise OutOfRange("concurrence must lie in [0, 1]")
    return c


def _check_depth(n, lo=0):
    if not isinstance(n, (int, np.integer)) or n < lo:
        raise OutOfRange(f"depth must be an integer >= {lo}, got {n!r}")
    if n > 3:
        raise UnsupportedDepth(f"closed forms stop at the third repetition, got n={n}")


def third_increment_terms(c, as_printed=False):
    """The eight summands of the third-repetition increment, in reference order."""
    c = _check_c(c)
    d = 4 - 3 * c**2
    e = 4 * d**2 - 3 * c**6
    if as_printed:
        last = 4 * d**2 * (d**2 - c**6) ** 2 - c**18
    else:
        last = 4 * d**2 * e**2 - 3 * c**18
    with np.errstate(divide="ignore", invalid="ignore"):
        return [
            c**8 / 128,
            c**10 / (128 * d),
            c**14 / (128 * d**3),
            c**18 / (128 * d**5),
            c**54 / (128 * d**5 * e**3 * last),
            c**24 / (128 * d**5 * e),
            c**36 / (128 * d**5 * e**3),
            c**20 / (128 * d**3 * e),
        ]


def increment(n, c):
    """Success probability gained by repetition ``n`` (1..3), as a C polynomial."""
    _check_depth(n, lo=1)
    c = _check_c(c)
    d = 4 - 3 * c**2
    if n == 1:
        return c**4 / 8 + c**6 / (8 * d)
    if n == 2:
        e = 4 * d**2 - 3 * c**6
        return (
            c**6 / 32
            + c**8 / (32 * d)
            + c**12 / (32 * d**3)
            + c**18 / (32 * d**3 * e)
        )
    return sum(third_increment_terms(c))


def p_success(n, c):
    """Cumulative success probability after ``n`` repetitions (0..3)."""
    _check_depth(n)
    c = _check_c(c)
    total = c**2 / 2
    for k in range(1, n + 1):
        total = total + increment(k, c)
    return total


def p_success_trig(n, chi):
    """Same as :func:`p_success` for ``n <= 2``, summed branch by branch in chi."""
    if n > 2:
        raise UnsupportedDepth("branch-level trig form is only tabulated to n=2")
    _check_depth(n)
    c, s = np.cos(chi), np.sin(chi)
    x = c**2 * s**2
    total = 2 * x
    if n >= 1:
        total = total + 2 * (c**6 * s**6 / (c**6 + s**6) + x**2)
    if n >= 2:
        n3sq = 1 / (c**6 + s**6)
        n9sq = 1 / (c**18 + s**18)
        total = total + 2 * (n3sq**2 * n9sq * x**9 + n3sq**3 * x**6 + n3sq * x**4 + x**3)
    return total


def trig_identity_check(chi):
    """Success after one repetition in chi form and in C form."""
    chi = float(chi)
    if not (CHI_MIN <= chi <= np.pi / 4 + 1e-15):
        raise OutOfRange(f"chi={chi!r} outside [{CHI_MIN}, pi/4]")
    c, s = np.cos(chi), np.sin(chi)
    trig = 2 * c**6 * s**6 / (c**6 + s**6) + 2 * c**4 * s**4 + 2 * c**2 * s**2
    return float(trig), float(p_success(1, concurrence(chi)))


def baseline_fidelity(c):
    """Fidelity ``(2 + C) / 3`` of standard teleportation over a partially entangled pair."""
    c = _check_c(c)
    return (2 + c) / 3


# ---------------------------------------------------------------------------
# per-branch closed forms


def original_branch_probabilities(a, b, chi):
    """Probabilities of the four outcomes of the first pair measurement."""
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    c, s = np.cos(chi), np.sin(chi)
    return (
        a2 * c**4 + b2 * s**4,
        s**2 * c**2,
        s**2 * c**2,
        a2 * s**4 + b2 * c**4,
    )


def first_repeat_branch_probabilities(a, b, chi, as_printed=False):
    """Joint probabilities keyed by ``(first outcome, second outcome)``.

    The reference ``(3, 3)`` entry carries ``|a|^2 cos^12 + |b|^2 sin^12``;
    that breaks ``sum_k P_3k = P_3`` and the mirror symmetry with ``(0, 0)``,
    so by default the weights are swapped.  ``as_printed=True`` keeps them.
    """
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    c, s = np.cos(chi), np.sin(chi)
    n3sq = 1 / (c**6 + s**6)
    return {
        (0, 0): n3sq * (a2 * c**12 + b2 * s**12),
        (0, 1): n3sq * c**6 * s**6,
        (0, 2): c**4 * s**4,
        (0, 3): c**2 * s**2 * (a2 * c**4 + b2 * s**4),
        (3, 0): c**2 * s**2 * (a2 * s**4 + b2 * c**4),
        (3, 1): c**4 * s**4,
        (3, 2): n3sq * c**6 * s**6,
        (3, 3): n3sq * ((a2 * c**12 + b2 * s**12) if as_printed else (a2 * s**12 + b2 * c**12)),
    }


@dataclass(frozen=True)
class TableRow:
    path: tuple
    exponent: int  # exponent of the pair-measurement vector for this outcome
    residual: np.ndarray  # unnormalised state of qubits (2, 3) in |00>,|01>,|10>,|11> order
    probability: float
    unit_fidelity: bool


def second_repeat_table(a, b, chi):
    """The sixteen outcomes of the second repetition, keyed by outcome path."""
    a2, b2 = abs(a) ** 2, abs(b) ** 2
    c, s = np.cos(chi), np.sin(chi)
    n3 = (c**6 + s**6) ** -0.5
    n9 = (c**18 + s**18) ** -0.5

    def ket(**amps):
        v = np.zeros(4, dtype=complex)
        for key, val in amps.items():
            v[int(key[1:], 2)] = val
        return v

    rows = [
        ((0, 0, 0), 9, n3**2 * n9 * ket(k00=a * c**18, k11=b * s**18),
         n3**4 * n9**2 * (a2 * c**36 + b2 * s**36), False),
        ((0, 0, 1), 9, n3**2 * n9 * c**9 * s**9 * ket(k00=a, k11=-b),
         n3**4 * n9**2 * c**18 * s**18, True),
        ((0, 0, 2), 3, n3**3 * c**6 * s**6 * ket(k10=a, k01=b),
         n3**6 * c**12 * s**12, True),
        ((0, 0, 3), 3, n3**3 * c**3 * s**3 * ket(k10=-a * c**6, k01=b * s**6),
         n3**6 * c**6 * s**6 * (a2 * c**12 + b2 * s**12), False),
        ((0, 3, 0), 3, n3 * c**4 * s**4 * ket(k00=a, k11=b),
         n3**2 * c**8 * s**8, True),
        ((0, 3, 1), 3, n3 * c * s * ket(k00=-a * c**6, k11=b * s**6),
         n3**2 * c**2 * s**2 * (a2 * c**12 + b2 * s**12), False),
        ((0, 3, 2), 1, c**2 * s**2 * ket(k10=a * c**2, k01=b * s**2),
         c**4 * s**4 * (a2 * c**4 + b2 * s**4), False),
        ((0, 3, 3), 1, c**3 * s**3 * ket(k10=a, k01=-b),
         c**6 * s**6, True),
        ((3, 0, 0), 1, c**3 * s**3 * ket(k01=a, k10=b),
         c**6 * s**6, True),
        ((3, 0, 1), 1, c**2 * s**2 * ket(k01=a * s**2, k10=-b * c**2),
         c**4 * s**4 * (a2 * s**4 + b2 * c**4), False),
        ((3, 0, 2), 3, n3 * c * s * ket(k00=b * c**6, k11=a * s**6),
         n3**2 * c**2 * s**2 * (a2 * s**12 + b2 * c**12), False),
        ((3, 0, 3), 3, n3 * c**4 * s**4 * ket(k00=b, k11=-a),
         n3**2 * c**8 * s**8, True),
        ((3, 3, 0), 3, n3**3 * c**3 * s**3 * ket(k01=a * s**6, k10=b * c**6),
         n3**6 * c**6 * s**6 * (a2 * s**12 + b2 * c**12), False),
        ((3, 3, 1), 3, n3**3 * c**6 * s**6 * ket(k01=a, k10=-b),
         n3**6 * c**12 * s**12, True),
        ((3, 3, 2), 9, n3**2 * n9 * c**9 * s**9 * ket(k11=a, k00=b),
         n3**4 * n9**2 * c**18 * s**18, True),
        ((3, 3, 3), 9, n3**2 * n9 * ket(k11=a * s**18, k00=-b * c**18),
         n3**4 * n9**2 * (a2 * s**36 + b2 * c**36), False),
    ]
    return {r[0]: TableRow(*r) for r in rows}


# Bob's state for each two-qubit form, keyed by (form, VNM outcome) where the
# form names the kets carrying a and b; values are the corrections as printed.
PRINTED_CORRECTIONS = {
    ("a00+b11", 0): "I", ("a00+b11", 1): "Z",
    ("a00-b11", 0): "Z", ("a00-b11", 1): "I",
    ("a11+b00", 0): "X", ("a11+b00", 1): "ZX",
    ("a11-b00", 0): "ZX", ("a11-b00", 1): "X",
    ("a01+b10", 0): "X", ("a01+b10", 1): "ZX",
    ("a01-b10", 0): "ZX", ("a01-b10", 1): "X",
    ("a10+b01", 0): "I", ("a10+b01", 1): "Z",
    ("a10-b01", 0): "Z", ("a10-b01", 1): "Z",
}


def correction_form_state(form, a, b):
    """Two-qubit state ``a|uv> +/- b|u'v'>`` (spare first, Bob second), normalised."""
    ka, sign, kb = form[1:3], form[3], form[5:7]
    v = np.zeros(4, dtype=complex)
    v[int(ka, 2)] += a
    v[int(kb, 2)] += b if sign == "+" else -b
    return v / np.linalg.norm(v)
