"""
Verification suites comparing the simulator with the closed forms.

Each suite returns a :class:`SuiteResult`; ``run_all`` runs them in order.
Tolerances are fixed here and not configurable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .bases import VnmKind, mixed_basis, vnm_basis
from .protocol import (
    LinearBranch,
    ProtocolConfig,
    Status,
    Termination,
    derive_correction,
    run_enumeration,
    run_sampled,
    select_basis,
    walk_outcomes,
)
from .statevector import InfoQubit, PureState, apply_pauli, fidelity, measure_single
from .sweeps import SweepSpec, average_fidelity, success_probability
from .protocol import enumerate_leaves

INPUTS = ((1.0, 0.0), (2**-0.5, 2**-0.5), (0.6, 0.8))
ANGLES = (math.pi / 12, math.pi / 6, math.pi / 4)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    summary: str
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: {self.summary} ({self.seconds:.2f} s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _branch_probs(trace, depth):
    """Total probability of each outcome path truncated to ``depth`` pair outcomes."""
    out = {}
    for rec in trace.branches:
        key = rec.path[:depth]
        if len(key) == depth:
            out[key] = out.get(key, 0.0) + rec.probability
    return out


@_timed
def original_measurement():
    """Four outcome probabilities of the first attempt and its success probability."""
    worst_branch = worst_success = 0.0
    for a, b in INPUTS:
        for chi in ANGLES:
            tr = run_enumeration(InfoQubit(a, b), chi, ProtocolConfig(0))
            got = _branch_probs(tr, 1)
            want = analytic.original_branch_probabilities(a, b, chi)
            worst_branch = max(worst_branch, *(abs(got[(k,)] - want[k]) for k in range(4)))
            c = math.sin(2 * chi)
            worst_success = max(worst_success, abs(tr.per_attempt_success[0] - c**2 / 2))
    ok = worst_branch <= 1e-12 and worst_success <= 1e-12
    return SuiteResult("original measurement", ok,
                       f"max branch error {worst_branch:.1e}, success error {worst_success:.1e}")


@_timed
def first_repetition():
    """Second-attempt branch probabilities, cumulative success and the two equal increments."""
    worst_branch = worst_success = 0.0
    increments = []
    for a, b in INPUTS:
        for chi in ANGLES:
            tr = run_enumeration(InfoQubit(a, b), chi, ProtocolConfig(1))
            got = _branch_probs(tr, 2)
            want = analytic.first_repeat_branch_probabilities(a, b, chi)
            worst_branch = max(worst_branch, *(abs(got[k] - v) for k, v in want.items()))
            c = math.sin(2 * chi)
            worst_success = max(worst_success,
                                abs(tr.per_attempt_success[1] - analytic.p_success(1, c)))
            inc0 = got[(0, 1)] + got[(0, 2)]
            inc3 = got[(3, 1)] + got[(3, 2)]
            increments.append((chi, inc0, inc3))
    printed_gap = 0.0
    for a, b in INPUTS:
        for chi in ANGLES:
            p3 = analytic.original_branch_probabilities(a, b, chi)[3]
            pr = analytic.first_repeat_branch_probabilities(a, b, chi, as_printed=True)
            printed_gap = max(printed_gap, abs(sum(pr[3, k] for k in range(4)) - p3))
    notes = []
    if printed_gap > 1e-12:
        notes.append(f"printed (3,3) entry: outcomes after 3 sum to P_3 only up to "
                     f"{printed_gap:.2e}; checked against the |a|<->|b| swapped entry")
    eq_gap = max(abs(i0 - i3) for _, i0, i3 in increments)
    by_chi = {}
    for chi, i0, _ in increments:
        by_chi.setdefault(chi, []).append(i0)
    ab_gap = max(max(v) - min(v) for v in by_chi.values())
    ok = worst_branch <= 1e-12 and worst_success <= 1e-12 and eq_gap <= 1e-12 and ab_gap <= 1e-12
    return SuiteResult(
        "first repetition", ok,
        f"max branch error {worst_branch:.1e}, success error {worst_success:.1e}, "
        f"increment mismatch {eq_gap:.1e}, input dependence {ab_gap:.1e}", notes)


@_timed
def second_repetition_table():
    """All sixteen outcomes of the third attempt against the tabulated values."""
    matched = 0
    notes = []
    for a, b in INPUTS + ((0.6, 0.8j),):
        for chi in (math.pi / 12, math.pi / 6, 0.5, math.pi / 4):
            table = analytic.second_repeat_table(a, b, chi)
            views = {o.path: o for o in walk_outcomes(chi, 2) if o.attempt == 2}
            for path, row in table.items():
                o = views[path]
                v = o.residual.vector(a, b)
                p = float(np.vdot(v, v).real)
                ref = row.residual
                overlap = abs(np.vdot(ref, v)) ** 2 / (np.vdot(ref, ref).real * p)
                ok = (abs(p - row.probability) <= 1e-12 and overlap >= 1 - 1e-10
                      and o.success == row.unit_fidelity and o.exponent == row.exponent)
                if ok:
                    matched += 1
                else:
                    notes.append(f"row {path} chi={chi:.4f}: p={p!r} vs {row.probability!r}, "
                                 f"overlap={overlap!r}, success={o.success}")
    total = 16 * 4 * 4
    return SuiteResult("second repetition table", matched == total,
                       f"{matched}/{total} row checks matched (16 rows x 4 inputs x 4 angles)",
                       notes)


def _per_term_audit(c=0.9, chi_probe=None):
    """Match each third-repetition term to its pair of success outcomes."""
    chi = 0.5 * math.asin(c)
    probs = {o.path: o.residual.probability(1, 0)
             for o in walk_outcomes(chi, 3) if o.attempt == 3 and o.success}
    corrected = analytic.third_increment_terms(c)
    printed = analytic.third_increment_terms(c, as_printed=True)
    notes = []
    for path, p in sorted(probs.items()):
        if path[0] != 0:
            continue
        enum_val = 2 * p
        j = int(np.argmin([abs(t - enum_val) / enum_val for t in corrected]))
        rel_fixed = (corrected[j] - enum_val) / enum_val
        rel_printed = (printed[j] - enum_val) / enum_val
        if abs(rel_printed) > 1e-10:
            notes.append(
                f"term {j + 1} (outcomes {path} and mirror) at C={c}: enumeration "
                f"{enum_val:.17g}, as printed {printed[j]:.17g} (rel. err {rel_printed:.2e}), "
                f"corrected {corrected[j]:.17g} (rel. err {rel_fixed:.1e})")
    return notes


@_timed
def closed_form_cross_check():
    """Cumulative success after two and three repetitions over 200 angles."""
    chis = np.linspace(1e-3, math.pi / 4, 200)
    worst = {2: 0.0, 3: 0.0}
    worst_printed = 0.0
    for chi in chis:
        c = math.sin(2 * chi)
        tr = run_enumeration(InfoQubit(0.6, 0.8), chi, ProtocolConfig(3))
        for n in (2, 3):
            worst[n] = max(worst[n], abs(tr.per_attempt_success[n] - analytic.p_success(n, c)))
        printed3 = analytic.p_success(2, c) + sum(analytic.third_increment_terms(c, True))
        worst_printed = max(worst_printed, abs(tr.per_attempt_success[3] - printed3))
    top = run_enumeration(InfoQubit(0.6, 0.8), math.pi / 4, ProtocolConfig(3))
    at_one = (abs(top.per_attempt_success[2] - 7 / 8), abs(top.per_attempt_success[3] - 15 / 16))
    notes = _per_term_audit()
    notes.append(f"printed third-repetition sum: max deviation {worst_printed:.2e} from "
                 f"enumeration over the grid")
    ok = worst[2] <= 1e-10 and worst[3] <= 1e-10 and max(at_one) <= 1e-12
    return SuiteResult(
        "closed-form cross-check", ok,
        f"max |delta| n=2 {worst[2]:.1e}, n=3 {worst[3]:.1e}; at C=1 errors "
        f"{at_one[0]:.1e}, {at_one[1]:.1e}; printed C^54 term deviates by {worst_printed:.1e}",
        notes)


@_timed
def conservation_and_unit_fidelity(samples=50, max_depth=5, seed=20240611):
    """Leaf probabilities sum to one and every success leaf is recovered exactly."""
    rng = np.random.default_rng(seed)
    worst_sum = worst_fid = 0.0
    count = 0
    for _ in range(samples):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        info = InfoQubit(*v)
        chi = rng.uniform(0, math.pi / 4)
        for depth in range(max_depth + 1):
            tr = run_enumeration(info, chi, ProtocolConfig(depth))
            worst_sum = max(worst_sum, abs(sum(b.probability for b in tr.branches) - 1))
            for rec in tr.branches:
                if rec.status is Status.SUCCESS and rec.probability > 0:
                    f = fidelity(apply_pauli(rec.collapsed, rec.correction), info)
                    worst_fid = max(worst_fid, 1 - f)
                    count += 1
    ok = worst_sum <= 1e-10 and worst_fid <= 1e-10
    return SuiteResult("conservation and unit fidelity", ok,
                       f"max |sum p - 1| {worst_sum:.1e}, max 1-F {worst_fid:.1e} "
                       f"over {count} success leaves")


@_timed
def monte_carlo_agreement(trials=100_000, seed=12345):
    res = run_sampled(InfoQubit(0.6, 0.8), math.pi / 4, ProtocolConfig(1, rng_seed=seed), trials)
    sigma = math.sqrt(0.75 * 0.25 / trials)
    z = (res.success_frequency - 0.75) / sigma
    return SuiteResult("Monte Carlo agreement", abs(z) <= 4,
                       f"frequency {res.success_frequency:.5f} vs 0.75, {z:+.2f} sigma")


@_timed
def figure_trends(points=101):
    """Orderings and trends of the success and average-fidelity curves."""
    spec = SweepSpec(points=points, depths=(0, 1, 2, 3),
                     strategies=("continue", "plain-vnm", "matched-vnm"))
    tol = 1e-12
    fails = []
    for c in spec.grid():
        chi = float(analytic.chi_from_concurrence(c))
        p, maf = {}, {}
        for s in spec.strategies:
            for n in spec.depths:
                leaves = enumerate_leaves(chi, n, s)
                p[s, n] = success_probability(leaves)
                maf[s, n] = average_fidelity(leaves)
                if not (p[s, n] - tol <= maf[s, n] <= 1 + tol):
                    fails.append(f"MAF outside [P, 1] at C={c}, {s.value}, n={n}")
        cont, plain, matched = spec.strategies
        for n in range(3):
            if p[cont, n + 1] < p[cont, n] - tol:
                fails.append(f"(a) P({n + 1}) < P({n}) at C={c}")
        for n in spec.depths:
            if p[matched, n] < p[plain, n] - tol:
                fails.append(f"(b) matched < plain at C={c}, n={n}")
        for s in (plain, matched):
            for n in range(3):
                if c < 1 and maf[s, n + 1] > maf[s, n] + tol:
                    fails.append(f"(c) MAF rises with depth at C={c}, {s.value}, n={n}")
            if c == 1 and any(abs(maf[s, n] - 1) > 1e-10 for n in spec.depths):
                fails.append(f"(c) MAF(C=1) != 1 for {s.value}")
        inc = [p[cont, n + 1] - p[cont, n] for n in range(3)]
        for n in range(2):
            if inc[n + 1] > inc[n] + tol:
                fails.append(f"(d) increment {n + 2} exceeds increment {n + 1} at C={c}")
            if analytic.increment(n + 2, c) > analytic.increment(n + 1, c) + tol:
                fails.append(f"(d) closed-form increment {n + 2} > {n + 1} at C={c}")
    return SuiteResult("figure trends", not fails,
                       f"{points} concurrence points, {len(fails)} violations", fails[:20])


def _branch_after(chi, steps):
    """Follow stated bases: ``steps`` is a list of (pair, (r_diag, r_off), outcome)."""
    branch = LinearBranch.initial(chi)
    for pair, exps, k in steps:
        vec = mixed_basis(*exps, chi).bell_vectors[k].amplitudes
        branch = branch.project(pair, vec).attach(pair, vec)
    return branch


@_timed
def basis_selection_fixtures():
    p01, p02 = (0, 1), (0, 2)
    cases = [
        ("initial state", [], p01, (1, 1)),
        ("after outcome 0", [(p01, (1, 1), 0)], p02, (3, 1)),
        ("after outcome 3", [(p01, (1, 1), 3)], p02, (1, 3)),
        ("after outcomes 0,0", [(p01, (1, 1), 0), (p02, (3, 1), 0)], p01, (9, 3)),
        ("after outcomes 0,3", [(p01, (1, 1), 0), (p02, (3, 1), 3)], p01, (3, 1)),
        ("after outcomes 3,0", [(p01, (1, 1), 3), (p02, (1, 3), 0)], p01, (1, 3)),
        ("after outcomes 3,3", [(p01, (1, 1), 3), (p02, (1, 3), 3)], p01, (3, 9)),
    ]
    notes = []
    hits = 0
    for chi in (math.pi / 12, math.pi / 6, 0.5):
        for name, steps, pair, want in cases:
            got = select_basis(_branch_after(chi, steps), pair, chi).exponents
            if got == want:
                hits += 1
            else:
                notes.append(f"{name} at chi={chi:.4f}: got {got}, expected {want}")
    total = 3 * len(cases)
    return SuiteResult("basis selection", hits == total, f"{hits}/{total} fixtures", notes)


@_timed
def correction_audit(a=0.6, b=0.8j):
    """Derived corrections for the eight correctable two-qubit forms versus the printed table."""
    plain = vnm_basis(VnmKind.PLAIN)
    disagreements = []
    bad_recovery = []
    for (form, j), printed in analytic.PRINTED_CORRECTIONS.items():
        state = PureState(analytic.correction_form_state(form, a, b), ("spare", "bob"))
        bob = measure_single(state, "spare", plain)[j].collapsed
        got = derive_correction(bob, a, b)
        if got is None or fidelity(apply_pauli(bob, got), InfoQubit(a, b)) < 1 - 1e-10:
            bad_recovery.append((form, j))
        if got is None or got.value != printed:
            disagreements.append((form, "+-"[j], printed, got.value if got else None))
    expected = [("a10-b01", "-", "Z", "I")]
    ok = disagreements == expected and not bad_recovery
    notes = [f"{form}, outcome |{s}>: printed {p}, derived {g}" for form, s, p, g in disagreements]
    return SuiteResult("correction table", ok,
                       f"{16 - len(disagreements)}/16 entries agree; "
                       f"{len(disagreements)} flagged", notes)


SUITES = (
    original_measurement,
    first_repetition,
    second_repetition_table,
    closed_form_cross_check,
    conservation_and_unit_fidelity,
    monte_carlo_agreement,
    figure_trends,
    basis_selection_fixtures,
    correction_audit,
)


def run_all(echo=print):
    results = []
    for suite in SUITES:
        res = suite()
        results.append(res)
        if echo:
            echo(res.line())
            for note in res.notes:
                echo(f"    {note}")
    return results
