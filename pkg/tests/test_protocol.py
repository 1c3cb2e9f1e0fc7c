import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqt.bases import VnmKind, mixed_basis, vnm_basis
from pqt.errors import CapacityExceeded, NoMatchedBasis, OutOfRange
from pqt.protocol import (
    LinearBranch,
    ProtocolConfig,
    Status,
    Termination,
    classify,
    derive_correction,
    enumerate_leaves,
    protocol_plan,
    run_enumeration,
    run_sampled,
    select_basis,
    terminate_with_vnm,
    walk_outcomes,
)
from pqt.statevector import InfoQubit, PauliCorrection, PureState
from pqt.sweeps import success_probability


def _after(chi, steps):
    branch = LinearBranch.initial(chi)
    for pair, exps, k in steps:
        vec = mixed_basis(*exps, chi).bell_vectors[k].amplitudes
        branch = branch.project(pair, vec).attach(pair, vec)
    return branch


def test_config_bounds():
    with pytest.raises(OutOfRange):
        ProtocolConfig(13)
    with pytest.raises(OutOfRange):
        ProtocolConfig(-1)
    with pytest.raises(ValueError):
        ProtocolConfig(1, "sometimes")


def test_select_basis_initial_and_first_repeat():
    chi = math.pi / 12
    assert select_basis(LinearBranch.initial(chi), (0, 1), chi).exponents == (1, 1)
    assert select_basis(_after(chi, [((0, 1), (1, 1), 0)]), (0, 2), chi).exponents == (3, 1)
    assert select_basis(_after(chi, [((0, 1), (1, 1), 3)]), (0, 2), chi).exponents == (1, 3)


def test_select_basis_no_match():
    # a product state between input and Bob: nothing is ever correctable
    amps = np.zeros((2, 2, 2, 2, 2), dtype=complex)
    amps[0, 0, 0, 0, 0] = 1
    amps[1, 0, 0, 0, 1] = 1
    branch = LinearBranch(amps, (0, 1, 2, 3))
    with pytest.raises(NoMatchedBasis):
        select_basis(branch, (0, 1), 0.3, r_max=20)


def test_classify_first_attempt():
    chi = 0.4
    root = LinearBranch.initial(chi)
    basis = mixed_basis(1, 1, chi)
    flags = [classify(root.project((0, 1), v.amplitudes), 2) is not None for v in basis]
    assert flags == [False, True, True, False]


def test_derive_correction_examples():
    h = 1 / math.sqrt(2)
    a, b = 0.6, 0.8j
    cases = {
        PauliCorrection.I: [a, b],
        PauliCorrection.Z: [a, -b],
        PauliCorrection.X: [b, a],
        PauliCorrection.ZX: [b, -a],
    }
    for want, amps in cases.items():
        assert derive_correction(PureState(np.array(amps), (3,)), a, b) is want
    assert derive_correction(PureState(np.array([h, h]), (3,)), a, b) is None


def test_terminate_plain_and_matched():
    chi = 0.5
    root = LinearBranch.initial(chi)
    residual = root.project((0, 1), mixed_basis(1, 1, chi).bell_vectors[0].amplitudes)
    residual = LinearBranch(residual.amps / np.linalg.norm(residual.amps), residual.labels)
    plain = terminate_with_vnm(residual, 2, Termination.PLAIN_VNM, chi)
    assert plain.kind is VnmKind.PLAIN
    assert plain.unit == (False, False)
    matched = terminate_with_vnm(residual, 2, Termination.MATCHED_VNM, chi)
    assert matched.kind is VnmKind.GENERALIZED
    assert any(matched.unit)


def test_plan_exponent_pattern():
    """Diagonal exponents along the all-0 path, off-diagonal along the all-3 path."""
    plan = protocol_plan(4)
    node, zeros = plan, []
    while node is not None:
        zeros.append(node.exponents[0])
        node = node.outcomes[0].child
    assert zeros[:4] == [1, 3, 9, 27]
    node, threes = plan, []
    while node is not None:
        threes.append(node.exponents[1])
        node = node.outcomes[3].child
    assert threes[:4] == [1, 3, 9, 27]


def test_measured_pairs_alternate():
    attempts = {o.attempt: o for o in walk_outcomes(0.4, 3)}
    assert sorted(attempts) == [0, 1, 2, 3]
    for o in walk_outcomes(0.4, 3):
        spare = 2 if o.attempt % 2 == 0 else 1
        assert spare in o.residual.labels
        assert o.residual.labels == (spare, 3)


def test_outcome_counts_per_attempt():
    counts = {}
    for o in walk_outcomes(0.4, 3):
        counts[o.attempt] = counts.get(o.attempt, 0) + 1
    assert counts == {0: 4, 1: 8, 2: 16, 3: 32}


def test_pi_over_four_failures_still_fail():
    tr = run_enumeration(InfoQubit(1, 0), math.pi / 4, ProtocolConfig(0))
    assert tr.total_success == pytest.approx(0.5, abs=1e-12)
    assert sum(b.status is Status.FAILURE for b in tr.branches) == 2


def test_chi_zero_never_succeeds():
    for n in range(3):
        assert success_probability(enumerate_leaves(0.0, n)) == 0.0


def test_matched_at_least_plain():
    chi = 0.5
    for n in range(4):
        plain = run_enumeration(InfoQubit(0.6, 0.8), chi, ProtocolConfig(n, "plain-vnm"))
        matched = run_enumeration(InfoQubit(0.6, 0.8), chi, ProtocolConfig(n, "matched-vnm"))
        assert matched.total_success >= plain.total_success - 1e-12
        assert matched.terminal_success > 0


def test_trace_dict_round_trip_fields():
    tr = run_enumeration(InfoQubit(0.6, 0.8j), 0.3, ProtocolConfig(1))
    d = tr.to_dict()
    assert d["b"] == [0.0, 0.8]
    assert len(d["per_attempt_success"]) == 2
    assert sum(br["probability"] for br in d["branches"]) == pytest.approx(1, abs=1e-12)


def test_capacity_guard(monkeypatch):
    monkeypatch.setenv("PQT_MAX_QUBITS", "3")
    with pytest.raises(CapacityExceeded):
        run_enumeration(InfoQubit(1, 0), 0.3, ProtocolConfig(0))


def test_sampling_is_reproducible():
    cfg = ProtocolConfig(2, rng_seed=7)
    r1 = run_sampled(InfoQubit(0.6, 0.8), 0.5, cfg, 5000, streams=4, jobs=1)
    r2 = run_sampled(InfoQubit(0.6, 0.8), 0.5, cfg, 5000, streams=4, jobs=4)
    assert r1 == r2
    r3 = run_sampled(InfoQubit(0.6, 0.8), 0.5, ProtocolConfig(2, rng_seed=8), 5000, streams=4)
    assert r3 != r1
    with pytest.raises(OutOfRange):
        run_sampled(InfoQubit(1, 0), 0.5, cfg, 0)


def test_sampling_tracks_enumeration():
    info, chi = InfoQubit(0.6, 0.8), 0.45
    cfg = ProtocolConfig(2, Termination.MATCHED_VNM, rng_seed=1)
    exact = run_enumeration(info, chi, cfg)
    res = run_sampled(info, chi, cfg, 40_000)
    assert abs(res.success_frequency - exact.total_success) < 4 * res.standard_error
    assert abs(res.mean_fidelity - exact.average_fidelity) < 0.01


@st.composite
def inputs(draw):
    theta = draw(st.floats(0.0, math.pi))
    phi = draw(st.floats(0.0, 2 * math.pi))
    return InfoQubit(math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2))


@given(inputs(), st.floats(0.0, math.pi / 4), st.integers(0, 3),
       st.sampled_from(list(Termination)))
@settings(max_examples=40, deadline=None)
def test_conservation_and_unit_fidelity(info, chi, n, term):
    tr = run_enumeration(info, chi, ProtocolConfig(n, term))
    assert sum(b.probability for b in tr.branches) == pytest.approx(1, abs=1e-10)
    for b in tr.branches:
        if b.status is Status.SUCCESS and b.probability > 0:
            assert b.bob_fidelity == pytest.approx(1, abs=1e-10)


@given(inputs(), inputs(), st.floats(1e-3, math.pi / 4), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_success_independent_of_input(u, v, chi, n):
    pu = run_enumeration(u, chi, ProtocolConfig(n)).total_success
    pv = run_enumeration(v, chi, ProtocolConfig(n)).total_success
    assert pu == pytest.approx(pv, abs=1e-12)


@given(st.floats(1e-3, math.pi / 4))
@settings(max_examples=25, deadline=None)
def test_success_monotone_in_depth(chi):
    ps = [success_probability(enumerate_leaves(chi, n)) for n in range(5)]
    assert all(q >= p - 1e-13 for p, q in zip(ps, ps[1:]))
    assert ps[-1] <= 1 + 1e-12
