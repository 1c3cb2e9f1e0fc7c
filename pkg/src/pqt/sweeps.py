"""
Concurrence sweeps of success probability and maximal average fidelity.

The average fidelity of a run is the mean, over pure inputs drawn uniformly
from the Bloch sphere, of the probability-weighted fidelity of every leaf,
with each leaf corrected by the Pauli that maximises its own average.  It is
computed with a product quadrature: Gauss-Legendre in ``cos(theta)`` and an
equispaced rule in ``phi``.  The integrand is a quartic polynomial on the
sphere, so modest grids are already exact to rounding; the Haar identity
``E|<psi|A|psi>|^2 = (|tr A|^2 + tr A^H A) / 6`` gives an independent check.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .errors import InvalidSpec, UnsupportedDepth
from .protocol import MAX_REPETITIONS, Termination, enumerate_leaves

DEFAULT_NODES = (100, 100)

SWEEP_COLUMNS = ("c", "chi", "depth", "strategy", "p_analytic", "p_enum", "maf", "delta")
MAF_COLUMNS = ("c", "chi", "depth", "strategy", "success_prob", "maf", "baseline_fidelity")


def bloch_quadrature(n_theta=DEFAULT_NODES[0], n_phi=DEFAULT_NODES[1]):
    """Nodes (as kets, shape (N, 2)) and weights summing to 1 over the Bloch sphere."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    kets = np.stack([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)], axis=-1)
    weights = np.repeat(w, n_phi)
    return kets.reshape(-1, 2), weights / weights.sum()


def _corrected_maps(leaves):
    return np.array([p.matrix @ m for leaf in leaves for p, m in leaf.parts])


def success_probability(leaves):
    """Probability of an exactly recovered state; the same for every input."""
    return float(sum(np.sum(np.abs(m) ** 2) / 2 for leaf in leaves if leaf.unit
                     for _, m in leaf.parts))


def average_fidelity(leaves, nodes=DEFAULT_NODES):
    kets, weights = bloch_quadrature(*nodes)
    maps = _corrected_maps(leaves)
    amp = np.einsum("ni,pij,nj->pn", kets.conj(), maps, kets, optimize=True)
    # rounding can push a perfect channel a few ulps past 1
    return float(min(np.sum(np.abs(amp) ** 2 @ weights), 1.0))


def average_fidelity_exact(leaves):
    maps = _corrected_maps(leaves)
    tr = np.abs(np.trace(maps, axis1=1, axis2=2)) ** 2
    frob = np.sum(np.abs(maps) ** 2, axis=(1, 2))
    return float(np.sum(tr + frob) / 6)


@dataclass(frozen=True)
class SweepSpec:
    c_min: float = 0.0
    c_max: float = 1.0
    points: int = 101
    depths: tuple = (0, 1, 2, 3)
    strategies: tuple = (Termination.CONTINUE,)
    output_path: str | None = None
    format: str = "csv"
    nodes: tuple = field(default=DEFAULT_NODES)

    def __post_init__(self):
        if not (0.0 <= self.c_min < self.c_max <= 1.0):
            raise InvalidSpec(f"need 0 <= c_min < c_max <= 1, got {self.c_min}, {self.c_max}")
        if int(self.points) != self.points or self.points < 2:
            raise InvalidSpec(f"points must be an integer >= 2, got {self.points!r}")
        depths = tuple(int(d) for d in self.depths)
        if not depths or any(d < 0 or d > MAX_REPETITIONS for d in depths):
            raise InvalidSpec(f"depths must lie in 0..{MAX_REPETITIONS}, got {self.depths!r}")
        try:
            strategies = tuple(Termination(s) for s in self.strategies)
        except ValueError as exc:
            raise InvalidSpec(str(exc))
        if self.format not in ("csv", "json"):
            raise InvalidSpec(f"format must be csv or json, got {self.format!r}")
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "depths", tuple(sorted(set(depths))))
        object.__setattr__(self, "strategies", strategies)

    def grid(self):
        return np.linspace(self.c_min, self.c_max, self.points)


def _analytic_or_none(depth, strategy, c):
    # the closed forms describe runs whose last failure stays unrecovered
    if strategy is Termination.MATCHED_VNM:
        return None
    try:
        return float(analytic.p_success(depth, c))
    except UnsupportedDepth:
        return None


def _point_rows(args):
    c, depths, strategies, nodes, kind = args
    chi = float(analytic.chi_from_concurrence(c))
    rows = []
    for depth in depths:
        for strategy in strategies:
            leaves = enumerate_leaves(chi, depth, strategy)
            p_enum = success_probability(leaves)
            maf = average_fidelity(leaves, nodes)
            if kind == "sweep":
                p_an = _analytic_or_none(depth, strategy, c)
                delta = None if p_an is None else abs(p_an - p_enum)
                rows.append(dict(c=c, chi=chi, depth=depth, strategy=strategy.value,
                                 p_analytic=p_an, p_enum=p_enum, maf=maf, delta=delta))
            else:
                rows.append(dict(c=c, chi=chi, depth=depth, strategy=strategy.value,
                                 success_prob=p_enum, maf=maf,
                                 baseline_fidelity=float(analytic.baseline_fidelity(c))))
    return rows


def _rows(spec: SweepSpec, kind, jobs):
    work = [(float(c), spec.depths, spec.strategies, spec.nodes, kind) for c in spec.grid()]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_point_rows, work))
    else:
        chunks = [_point_rows(w) for w in work]
    # grid order, then depth, then strategy order as given
    return [row for chunk in chunks for row in chunk]


def sweep_rows(spec: SweepSpec, jobs=1):
    """One row per (c, depth, strategy): closed form where one exists and enumeration."""
    return _rows(spec, "sweep", jobs)


def maf_rows(spec: SweepSpec, jobs=1):
    return _rows(spec, "maf", jobs)


def format_value(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def render(rows, columns, fmt):
    """Serialise rows deterministically as CSV (LF endings) or JSON."""
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(format_value(row[c]) for c in columns) for row in rows]
        return "\n".join(lines) + "\n"
    out = []
    for row in rows:
        items = []
        for c in columns:
            v = row[c]
            if v is None:
                text = "null"
            elif isinstance(v, float):
                text = format_value(v) if math.isfinite(v) else "null"
            else:
                text = json.dumps(v)
            items.append(f"{json.dumps(c)}: {text}")
        out.append("  {" + ", ".join(items) + "}")
    return "[\n" + ",\n".join(out) + "\n]\n"


def write_rows(rows, columns, fmt, path):
    text = render(rows, columns, fmt)
    if path is None or path == "-":
        return text
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text
