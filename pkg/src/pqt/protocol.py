"""
Repeated generalized-Bell-measurement teleportation through a GHZ channel.

Register labels: 0 is the input qubit, 1 and 2 are Alice's halves of the
channel, 3 is Bob's.  Attempt ``t`` measures ``(0, 1)`` for even ``t`` and
``(0, 2)`` for odd ``t``; the other channel qubit is the *spare*, which Alice
measures in a von Neumann basis once the pair outcome is correctable.

Every branch is carried as a linear map from the input amplitudes ``(a, b)``
to the unnormalised register state (a trailing axis of length 2 on the
amplitude tensor).  Projections are linear, so "Bob can fix this outcome for
every input" is a property of that map and can be decided exactly, without
sampling inputs.

The shape of the measurement tree -- which exponents Alice uses, which
outcomes succeed, which Pauli Bob applies -- does not depend on ``chi`` inside
``(0, pi/4)``: all weights are monomials in ``cos chi`` and ``sin chi``.  It is
therefore decided once, at a generic reference angle, and then evaluated at
the requested ``chi``.  This matters at ``chi = pi/4``, where every outcome is
trivially correctable and a per-angle classification would count the failure
outcomes as successes.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bases import BellBasis, VnmKind, mixed_basis, vnm_basis
from .errors import CapacityExceeded, NoMatchedBasis, OutOfRange
from .statevector import (
    GhzResource,
    InfoQubit,
    PauliCorrection,
    PureState,
    apply_pauli,
    contract,
    fidelity,
    make_ghz,
    measure_pair,
    measure_single,
    max_qubits,
    tensor,
)

INPUT, BOB = 0, 3
MAX_REPETITIONS = 12
R_MAX = 3 ** (MAX_REPETITIONS + 2)
MATCH_TOL = 1e-9
PAULI_ORDER = (PauliCorrection.I, PauliCorrection.Z, PauliCorrection.X, PauliCorrection.ZX)


class Termination(enum.Enum):
    CONTINUE = "continue"
    PLAIN_VNM = "plain-vnm"
    MATCHED_VNM = "matched-vnm"


class Status(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class ProtocolConfig:
    max_repetitions: int = 0
    termination: Termination = Termination.CONTINUE
    rng_seed: int = 0

    def __post_init__(self):
        n = self.max_repetitions
        if isinstance(n, bool) or not isinstance(n, int) or not 0 <= n <= MAX_REPETITIONS:
            raise OutOfRange(f"max_repetitions must be in 0..{MAX_REPETITIONS}, got {n!r}")
        object.__setattr__(self, "termination", Termination(self.termination))


def measured_pair(attempt):
    return (INPUT, 1) if attempt % 2 == 0 else (INPUT, 2)


def spare_qubit(attempt):
    return 2 if attempt % 2 == 0 else 1


# ---------------------------------------------------------------------------
# linear branches


@dataclass(frozen=True)
class LinearBranch:
    """Unnormalised register state as a linear function of the input ``(a, b)``.

    ``amps`` has one length-2 axis per entry of ``labels`` and a final axis
    indexing the input basis: ``amps[..., 0]`` is the branch for input |0>,
    ``amps[..., 1]`` for input |1>.
    """

    amps: np.ndarray
    labels: tuple

    @classmethod
    def initial(cls, chi):
        if 4 > max_qubits():
            raise CapacityExceeded(f"protocol register needs 4 qubits, capacity is {max_qubits()}")
        ghz = make_ghz(GhzResource(chi)).tensor_view()
        amps = np.zeros((2, 2, 2, 2, 2), dtype=complex)
        amps[0, ..., 0] = ghz
        amps[1, ..., 1] = ghz
        return cls(amps, (INPUT, 1, 2, 3))

    def vector(self, a, b):
        return (self.amps @ np.array([a, b], dtype=complex)).reshape(-1)

    def probability(self, a, b):
        v = self.vector(a, b)
        return float(np.vdot(v, v).real)

    def state(self, a, b):
        """Normalised state for a particular input, or None if it has zero weight."""
        v = self.vector(a, b)
        norm = np.linalg.norm(v)
        if norm == 0:
            return None
        return PureState(v / norm, self.labels)

    def project(self, qubits, vector) -> "LinearBranch":
        residual, rest = contract(self.amps, self.labels, qubits, vector)
        return LinearBranch(residual, rest)

    def attach(self, qubits, vector) -> "LinearBranch":
        """Post-measurement branch ``|vector>_qubits (x) self``."""
        vec = np.asarray(vector, dtype=complex).reshape((2,) * len(qubits))
        amps = np.multiply.outer(vec, self.amps)
        return LinearBranch(amps, tuple(qubits) + self.labels)

    def bob_map(self, spare, vector):
        """2x2 map from input amplitudes to Bob's qubit after the spare is measured."""
        residual, rest = contract(self.amps, self.labels, (spare,), vector)
        if rest != (BOB,):
            raise ValueError(f"expected only Bob's qubit to remain, got {rest}")
        return residual


# ---------------------------------------------------------------------------
# corrections


def correction_for_map(bob_map, tol=MATCH_TOL):
    """Pauli ``P`` with ``P @ bob_map`` proportional to the identity, else None.

    Proportionality to the identity means Bob recovers every input exactly;
    the test is relative to the map's own scale.
    """
    m = np.asarray(bob_map, dtype=complex)
    scale = np.max(np.abs(m))
    if scale == 0:
        return None
    for p in PAULI_ORDER:
        prod = (p.matrix @ m) / scale
        off = max(abs(prod[0, 1]), abs(prod[1, 0]))
        if off <= tol and abs(prod[0, 0] - prod[1, 1]) <= tol and abs(prod[0, 0]) > tol:
            return p
    return None


def best_correction(bob_map):
    """Pauli maximising the input-averaged fidelity of one leaf.

    For a leaf map ``M`` the Haar average of ``|<psi|P M|psi>|^2`` is
    ``(|tr PM|^2 + ||M||_F^2) / 6``, so only ``|tr PM|`` depends on ``P``.
    """
    m = np.asarray(bob_map, dtype=complex)
    scores = [abs(np.trace(p.matrix @ m)) for p in PAULI_ORDER]
    best = max(scores)
    for p, s in zip(PAULI_ORDER, scores):
        if s >= best * (1 - 1e-12):
            return p


def derive_correction(collapsed: PureState, a, b, tol=1e-10):
    """Pauli bringing Bob's single-qubit state onto ``a|0> + b|1>``, else None.

    Candidates are tried in the order I, Z, X, ZX; for inputs where two
    Paulis both work (e.g. ``b = 0``) the first is returned.
    """
    target = InfoQubit(a, b)
    for p in PAULI_ORDER:
        if fidelity(apply_pauli(collapsed, p), target) >= 1 - tol:
            return p
    return None


def classify(residual: LinearBranch, spare, tol=MATCH_TOL):
    """Corrections for both ``|+>``/``|->`` outcomes on ``spare``, or None on failure.

    Returns a dict ``{0: P_plus, 1: P_minus}`` when both outcomes are fixable
    for every input, otherwise None.
    """
    plain = vnm_basis(VnmKind.PLAIN)
    corrections = {}
    for j, vec in enumerate(plain.vectors):
        p = correction_for_map(residual.bob_map(spare, vec), tol)
        if p is None:
            return None
        corrections[j] = p
    return corrections


# ---------------------------------------------------------------------------
# basis selection


def _sector_kets(sector):
    e = np.eye(4)
    return (e[0], e[3]) if sector == "diag" else (e[1], e[2])


def _exponent_candidates(n_lo, n_hi, chi, r_max):
    """Exponents worth verifying for a sector whose kets carry weights ``n_lo, n_hi``.

    A vector weighted ``(cos^r, sin^r)`` balances the sector when
    ``tan(chi)**r == n_lo / n_hi``; the ``(sin^r, -cos^r)`` partner when it
    equals ``n_hi / n_lo``.  The log-ratio estimate and its neighbours are
    tried alongside the first few exponents.
    """
    cands = set(range(1, 5))
    t = math.tan(chi)
    if 0 < t < 1 and n_lo > 0 and n_hi > 0:
        log_t = math.log(t)
        for ratio in (n_lo / n_hi, n_hi / n_lo):
            est = math.log(ratio) / log_t
            if abs(est) < 4 * r_max:
                base = int(round(est))
                cands.update(range(base - 2, base + 3))
    return sorted(r for r in cands if 1 <= r <= r_max)


def _sector_choice(branch, pair, spare, chi, sector, r_max, tol):
    lo, hi = _sector_kets(sector)
    n_lo = np.linalg.norm(branch.project(pair, lo).amps)
    n_hi = np.linalg.norm(branch.project(pair, hi).amps)
    ks = (0, 1) if sector == "diag" else (2, 3)
    for r in _exponent_candidates(n_lo, n_hi, chi, r_max):
        basis = mixed_basis(r, r, chi)
        hits = sum(
            classify(branch.project(pair, basis.bell_vectors[k].amplitudes), spare, tol)
            is not None
            for k in ks
        )
        if hits:
            return r, hits
    return 1, 0


def select_basis(branch: LinearBranch, pair, chi, r_max=R_MAX, tol=MATCH_TOL) -> BellBasis:
    """Smallest entanglement-matched basis for measuring ``pair`` on ``branch``.

    Each sector independently takes the smallest exponent for which one of
    its two outcomes leaves Bob a correctable state for every input; the
    basis qualifies when at least two of the four outcomes are correctable.

    Raises
    ------
    NoMatchedBasis
        If no exponents up to ``r_max`` give two correctable outcomes.
    """
    pair = tuple(pair)
    rest = [q for q in branch.labels if q not in pair]
    spares = [q for q in rest if q != BOB]
    if len(spares) != 1 or BOB not in rest:
        raise ValueError(f"measuring {pair} on {branch.labels} must leave one spare and Bob")
    spare = spares[0]
    r_diag, hits_diag = _sector_choice(branch, pair, spare, chi, "diag", r_max, tol)
    r_off, hits_off = _sector_choice(branch, pair, spare, chi, "off", r_max, tol)
    if hits_diag + hits_off < 2:
        raise NoMatchedBasis(
            f"no exponents <= {r_max} give two correctable outcomes for pair {pair}"
        )
    return mixed_basis(r_diag, r_off, chi)


# ---------------------------------------------------------------------------
# terminal single-qubit measurement


@dataclass(frozen=True)
class TerminalChoice:
    """Alice's last single-qubit measurement on a failed branch."""

    kind: VnmKind
    r: int | None
    corrections: tuple  # one PauliCorrection per VNM outcome
    unit: tuple  # per outcome: does the correction recover every input exactly

    def basis(self, chi):
        return vnm_basis(self.kind, self.r, chi if self.kind is VnmKind.GENERALIZED else None)


def _score_terminal(residual, spare, basis, tol):
    unit_mass = 0.0
    avg_fid = 0.0
    corrections, unit = [], []
    for vec in basis.vectors:
        m = residual.bob_map(spare, vec)
        exact = correction_for_map(m, tol)
        p = exact if exact is not None else best_correction(m)
        corrections.append(p)
        unit.append(exact is not None)
        frob = float(np.sum(np.abs(m) ** 2))
        if exact is not None:
            unit_mass += frob / 2
        avg_fid += (abs(np.trace(p.matrix @ m)) ** 2 + frob) / 6
    return (unit_mass, avg_fid), tuple(corrections), tuple(unit)


def terminate_with_vnm(residual: LinearBranch, spare, strategy, chi, r_max=R_MAX, tol=MATCH_TOL):
    """Choose Alice's final spare-qubit measurement after the last failed attempt.

    ``PlainVnm`` measures in ``|+>, |->``.  ``MatchedVnm`` scans generalized
    bases and keeps the exponent with the largest input-averaged probability
    of a unit-fidelity outcome, breaking ties by average fidelity and then by
    the smaller exponent.  Corrections are the exact Pauli where one exists,
    otherwise the one maximising average fidelity.
    """
    strategy = Termination(strategy)
    if strategy is not Termination.MATCHED_VNM:
        basis = vnm_basis(VnmKind.PLAIN)
        _, corr, unit = _score_terminal(residual, spare, basis, tol)
        return TerminalChoice(VnmKind.PLAIN, None, corr, unit)
    n0 = np.linalg.norm(residual.project((spare,), [1, 0]).amps)
    n1 = np.linalg.norm(residual.project((spare,), [0, 1]).amps)
    cands = _exponent_candidates(n0, n1, chi, r_max)
    best = None
    for r in cands:
        basis = vnm_basis(VnmKind.GENERALIZED, r, chi)
        score, corr, unit = _score_terminal(residual, spare, basis, tol)
        key = (round(score[0], 14), round(score[1], 14), -r)
        if best is None or key > best[0]:
            best = (key, TerminalChoice(VnmKind.GENERALIZED, r, corr, unit))
    return best[1]


# ---------------------------------------------------------------------------
# tree plan (chi independent)


@dataclass(frozen=True)
class OutcomePlan:
    k: int
    corrections: tuple | None  # (P_plus, P_minus) when the outcome succeeds
    child: "NodePlan | None" = None
    terminal: TerminalChoice | None = None

    @property
    def success(self):
        return self.corrections is not None


@dataclass(frozen=True)
class NodePlan:
    path: tuple
    attempt: int
    exponents: tuple  # (r_diag, r_off)
    outcomes: tuple

    @property
    def pair(self):
        return measured_pair(self.attempt)

    @property
    def spare(self):
        return spare_qubit(self.attempt)

    def walk(self):
        yield self
        for o in self.outcomes:
            if o.child is not None:
                yield from o.child.walk()


def reference_chi(max_repetitions):
    """Generic angle at which exponents up to ~3**(n+2) stay distinguishable."""
    return math.atan(math.exp(-1.0 / 3 ** (max_repetitions + 1)))


def _normalised(branch):
    norm = np.linalg.norm(branch.amps)
    return LinearBranch(branch.amps / norm, branch.labels)


def _plan_node(branch, path, attempt, depth, termination, chi):
    pair, spare = measured_pair(attempt), spare_qubit(attempt)
    basis = select_basis(branch, pair, chi)
    outcomes = []
    for k, bv in enumerate(basis.bell_vectors):
        residual = _normalised(branch.project(pair, bv.amplitudes))
        corr = classify(residual, spare)
        if corr is not None:
            outcomes.append(OutcomePlan(k, (corr[0], corr[1])))
        elif attempt < depth:
            child_branch = residual.attach(pair, bv.amplitudes)
            child = _plan_node(child_branch, path + (k,), attempt + 1, depth, termination, chi)
            outcomes.append(OutcomePlan(k, None, child=child))
        else:
            term = terminate_with_vnm(residual, spare, termination, chi)
            outcomes.append(OutcomePlan(k, None, terminal=term))
    return NodePlan(path, attempt, basis.exponents, tuple(outcomes))


@lru_cache(maxsize=64)
def protocol_plan(max_repetitions, termination=Termination.CONTINUE) -> NodePlan:
    """Decision tree for ``max_repetitions`` repeated attempts; cached."""
    termination = Termination(termination)
    chi = reference_chi(max_repetitions)
    root = LinearBranch.initial(chi)
    return _plan_node(root, (), 0, max_repetitions, termination, chi)


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class Leaf:
    """One leaf of the measurement tree at a given ``chi``, for every input.

    ``parts`` holds ``(correction, bob_map)`` pairs.  Success and terminated
    leaves have one part; a failure leaf under ``Continue`` keeps both
    outcomes of an implicit ``|+>, |->`` measurement on the spare.
    """

    path: tuple
    attempt: int
    status: Status
    unit: bool
    parts: tuple
    residual: LinearBranch | None = None

    def probability(self, v):
        return float(sum(np.sum(np.abs(m @ v) ** 2) for _, m in self.parts))

    def weighted_fidelity(self, v):
        """Probability times fidelity for the normalised input ``v``."""
        return float(sum(abs(np.vdot(v, p.matrix @ m @ v)) ** 2 for p, m in self.parts))

    @property
    def correction(self):
        return self.parts[0][0] if len(self.parts) == 1 else None


def _evaluate(node, branch, chi, leaves, termination):
    pair, spare = node.pair, node.spare
    basis = mixed_basis(*node.exponents, chi)
    plain = vnm_basis(VnmKind.PLAIN)
    for o in node.outcomes:
        vec = basis.bell_vectors[o.k].amplitudes
        residual = branch.project(pair, vec)
        path = node.path + (o.k,)
        if o.success:
            for j, p in enumerate(o.corrections):
                m = residual.bob_map(spare, plain.vectors[j])
                leaves.append(Leaf(path + (j,), node.attempt, Status.SUCCESS, True, ((p, m),)))
        elif o.child is not None:
            _evaluate(o.child, residual.attach(pair, vec), chi, leaves, termination)
        else:
            term = o.terminal
            vb = term.basis(chi)
            parts = tuple(
                (term.corrections[j], residual.bob_map(spare, vb.vectors[j])) for j in range(2)
            )
            if termination is Termination.CONTINUE:
                leaves.append(Leaf(path, node.attempt, Status.FAILURE, False, parts, residual))
            else:
                for j, part in enumerate(parts):
                    leaves.append(
                        Leaf(path + (j,), node.attempt, Status.TERMINATED, term.unit[j], (part,))
                    )


def enumerate_leaves(chi, max_repetitions, termination=Termination.CONTINUE):
    """All leaves of the protocol tree at ``chi`` as input-linear maps."""
    termination = Termination(termination)
    chi = GhzResource(chi).chi
    plan = protocol_plan(max_repetitions, termination)
    leaves = []
    _evaluate(plan, LinearBranch.initial(chi), chi, leaves, termination)
    return leaves


# ---------------------------------------------------------------------------
# records for a particular input


@dataclass(frozen=True)
class BranchRecord:
    path: tuple
    attempt_count: int
    probability: float
    status: Status
    correction: PauliCorrection | None
    bob_fidelity: float
    collapsed: PureState | None
    unit: bool = False


@dataclass(frozen=True)
class ProtocolTrace:
    branches: tuple
    per_attempt_success: tuple
    terminal_success: float
    chi: float
    a: complex
    b: complex
    config: ProtocolConfig
    leaves: tuple = field(default=(), repr=False)

    @property
    def total_success(self):
        """Unit-fidelity probability, counting a matched final measurement."""
        return self.per_attempt_success[-1] + self.terminal_success

    @property
    def average_fidelity(self):
        return float(sum(b.probability * b.bob_fidelity for b in self.branches))

    def to_dict(self):
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "chi": self.chi,
            "concurrence": math.sin(2 * self.chi),
            "max_repetitions": self.config.max_repetitions,
            "termination": self.config.termination.value,
            "per_attempt_success": list(self.per_attempt_success),
            "terminal_success": self.terminal_success,
            "total_success": self.total_success,
            "branches": [
                {
                    "path": list(b.path),
                    "attempts": b.attempt_count,
                    "probability": b.probability,
                    "status": b.status.value,
                    "correction": b.correction.value if b.correction else None,
                    "fidelity": b.bob_fidelity,
                }
                for b in self.branches
            ],
        }


def _record(leaf: Leaf, info: InfoQubit):
    v = info.vector
    prob = leaf.probability(v)
    fid = leaf.weighted_fidelity(v) / prob if prob > 0 else 0.0
    fid = min(max(fid, 0.0), 1.0)
    collapsed = None
    if prob > 0:
        if leaf.residual is not None:
            collapsed = PureState.from_unnormalized(leaf.residual.vector(info.a, info.b),
                                                    leaf.residual.labels)
        else:
            collapsed = PureState.from_unnormalized(leaf.parts[0][1] @ v, (BOB,))
    return BranchRecord(leaf.path, leaf.attempt + 1, prob, leaf.status, leaf.correction, fid,
                        collapsed, leaf.unit)


def run_enumeration(info: InfoQubit, resource, config: ProtocolConfig) -> ProtocolTrace:
    """Exact branch tree for one input and channel."""
    if not isinstance(resource, GhzResource):
        resource = GhzResource(resource)
    leaves = enumerate_leaves(resource.chi, config.max_repetitions, config.termination)
    records = tuple(_record(leaf, info) for leaf in leaves)
    per_attempt = [0.0] * (config.max_repetitions + 1)
    terminal = 0.0
    for rec in records:
        if rec.status is Status.SUCCESS:
            per_attempt[rec.attempt_count - 1] += rec.probability
        elif rec.status is Status.TERMINATED and rec.unit:
            terminal += rec.probability
    cumulative = tuple(float(x) for x in np.cumsum(per_attempt))
    return ProtocolTrace(records, cumulative, terminal, resource.chi, info.a, info.b, config,
                         tuple(leaves))


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class SampleResult:
    trials: int
    successes: int
    mean_fidelity: float
    seed: int

    @property
    def success_frequency(self):
        return self.successes / self.trials

    @property
    def standard_error(self):
        p = self.success_frequency
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)


def _split(rng, count, outcomes):
    probs = np.array([o.probability for o in outcomes])
    probs = probs / probs.sum()
    return rng.multinomial(count, probs)


def _finish(rng, count, state, spare, basis, corrections, info, unit, tally):
    """Measure the spare qubit, correct Bob's qubit, and score the trials."""
    outs = measure_single(state, spare, basis)
    for o, n in zip(outs, _split(rng, count, outs)):
        if n == 0:
            continue
        bob = apply_pauli(o.collapsed, corrections[o.outcome_index])
        tally["fid"] += n * fidelity(bob, info)
        if unit is True or (unit is not False and unit[o.outcome_index]):
            tally["succ"] += n


def _sample_node(rng, count, node, state, chi, info, termination, tally):
    basis = mixed_basis(*node.exponents, chi)
    pair, spare = node.pair, node.spare
    plain = vnm_basis(VnmKind.PLAIN)
    outs = measure_pair(state, pair, basis)
    for o, n in zip(outs, _split(rng, count, outs)):
        if n == 0:
            continue
        plan = node.outcomes[o.outcome_index]
        if plan.success:
            _finish(rng, n, o.collapsed, spare, plain, plan.corrections, info, True, tally)
        elif plan.child is not None:
            vec = PureState(basis.bell_vectors[o.outcome_index].amplitudes, pair)
            _sample_node(rng, n, plan.child, tensor(vec, o.collapsed), chi, info,
                         termination, tally)
        else:
            term = plan.terminal
            unit = False if termination is Termination.CONTINUE else term.unit
            _finish(rng, n, o.collapsed, spare, term.basis(chi), term.corrections, info, unit,
                    tally)


def _sample_stream(seed_seq, trials, info, chi, config):
    rng = np.random.default_rng(seed_seq)
    plan = protocol_plan(config.max_repetitions, config.termination)
    state = tensor(info.state(INPUT), make_ghz(GhzResource(chi)))
    tally = {"succ": 0, "fid": 0.0}
    _sample_node(rng, trials, plan, state, chi, info, config.termination, tally)
    return tally


def run_sampled(info: InfoQubit, resource, config: ProtocolConfig, trials, streams=1, jobs=1):
    """Monte Carlo run of the protocol with measurement outcomes drawn at random.

    Trials travel down the tree together: at each measurement the batch
    reaching that node is split by a multinomial draw over the outcome
    probabilities of the actual collapsed state.  ``trials`` are shared over
    ``streams`` independent generators spawned from ``config.rng_seed``; the
    result depends on ``(seed, streams)`` but not on ``jobs``.
    """
    if trials < 1:
        raise OutOfRange(f"trials must be >= 1, got {trials!r}")
    if not isinstance(resource, GhzResource):
        resource = GhzResource(resource)
    children = np.random.SeedSequence(config.rng_seed).spawn(streams)
    shares = [trials // streams + (i < trials % streams) for i in range(streams)]
    work = [(s, n) for s, n in zip(children, shares) if n > 0]
    if jobs > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            tallies = list(pool.map(
                lambda w: _sample_stream(w[0], w[1], info, resource.chi, config), work))
    else:
        tallies = [_sample_stream(s, n, info, resource.chi, config) for s, n in work]
    succ = sum(t["succ"] for t in tallies)
    fid = sum(t["fid"] for t in tallies)
    return SampleResult(trials, int(succ), float(fid / trials), config.rng_seed)


@dataclass(frozen=True)
class OutcomeView:
    """One pair-measurement outcome anywhere in the tree, before the spare is measured."""

    path: tuple
    attempt: int
    exponent: int
    basis_exponents: tuple
    success: bool
    residual: LinearBranch


def walk_outcomes(chi, max_repetitions, termination=Termination.CONTINUE):
    """Yield every pair-measurement outcome of the tree at ``chi``, depth first."""
    chi = GhzResource(chi).chi
    plan = protocol_plan(max_repetitions, Termination(termination))

    def visit(node, branch):
        basis = mixed_basis(*node.exponents, chi)
        for o in node.outcomes:
            bv = basis.bell_vectors[o.k]
            residual = branch.project(node.pair, bv.amplitudes)
            yield OutcomeView(node.path + (o.k,), node.attempt, bv.r, node.exponents,
                              o.success, residual)
            if o.child is not None:
                yield from visit(o.child, residual.attach(node.pair, bv.amplitudes))

    yield from visit(plan, LinearBranch.initial(chi))
