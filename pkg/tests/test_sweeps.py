import math

import numpy as np
import pytest

from pqt.errors import InvalidSpec
from pqt.protocol import Termination, enumerate_leaves
from pqt.sweeps import (
    MAF_COLUMNS,
    SWEEP_COLUMNS,
    SweepSpec,
    average_fidelity,
    average_fidelity_exact,
    bloch_quadrature,
    maf_rows,
    render,
    success_probability,
    sweep_rows,
)

# exact Haar average at C=0.8, one repetition, plain final measurement;
# equals 6646/8125 to double precision
MAF_C08_N1_PLAIN = 0.8179692307692307


def _chi(c):
    return 0.5 * math.asin(c)


def test_quadrature_weights_and_moments():
    kets, w = bloch_quadrature(30, 30)
    assert w.sum() == pytest.approx(1, abs=1e-14)
    # <|<0|psi>|^4> over the sphere is 1/3
    assert np.sum(np.abs(kets[:, 0]) ** 4 * w) == pytest.approx(1 / 3, abs=1e-14)


def test_maf_regression_fixture():
    leaves = enumerate_leaves(_chi(0.8), 1, Termination.PLAIN_VNM)
    assert average_fidelity(leaves) == pytest.approx(MAF_C08_N1_PLAIN, abs=1e-12)
    assert average_fidelity_exact(leaves) == pytest.approx(MAF_C08_N1_PLAIN, abs=1e-12)


@pytest.mark.parametrize("strategy", list(Termination))
@pytest.mark.parametrize("c", [0.1, 0.55, 0.93])
def test_quadrature_resolution_independent(strategy, c):
    """Coarse, default and fine grids agree: the integrand is polynomial."""
    leaves = enumerate_leaves(_chi(c), 2, strategy)
    coarse = average_fidelity(leaves, (8, 8))
    default = average_fidelity(leaves)
    fine = average_fidelity(leaves, (150, 150))
    exact = average_fidelity_exact(leaves)
    assert coarse == pytest.approx(exact, abs=1e-12)
    assert default == pytest.approx(fine, abs=1e-12)


def test_maf_bounds():
    for c in (0.0, 0.4, 1.0):
        for strategy in Termination:
            leaves = enumerate_leaves(_chi(c), 2, strategy)
            p, f = success_probability(leaves), average_fidelity(leaves)
            assert p - 1e-12 <= f <= 1.0


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        SweepSpec(c_min=0.5, c_max=0.5)
    with pytest.raises(InvalidSpec):
        SweepSpec(points=1)
    with pytest.raises(InvalidSpec):
        SweepSpec(depths=(13,))
    with pytest.raises(InvalidSpec):
        SweepSpec(strategies=("eventually",))
    with pytest.raises(InvalidSpec):
        SweepSpec(format="xlsx")


def test_sweep_rows_order_and_values():
    spec = SweepSpec(points=3, depths=(2, 0), strategies=("plain-vnm", "matched-vnm"))
    rows = sweep_rows(spec)
    keys = [(r["c"], r["depth"], r["strategy"]) for r in rows]
    assert keys == [(c, d, s) for c in (0.0, 0.5, 1.0) for d in (0, 2)
                    for s in ("plain-vnm", "matched-vnm")]
    for r in rows:
        if r["strategy"] == "matched-vnm":
            assert r["p_analytic"] is None and r["delta"] is None
        else:
            assert r["delta"] <= 1e-12
    top = [r for r in rows if r["c"] == 1.0 and r["strategy"] == "plain-vnm"]
    assert [r["p_enum"] for r in top] == pytest.approx([0.5, 0.875], abs=1e-12)


def test_parallel_matches_serial():
    spec = SweepSpec(points=5, depths=(0, 1), strategies=("continue", "matched-vnm"))
    assert render(sweep_rows(spec, jobs=1), SWEEP_COLUMNS, "csv") == render(
        sweep_rows(spec, jobs=3), SWEEP_COLUMNS, "csv")


def test_render_csv_format():
    spec = SweepSpec(c_min=0.2, c_max=0.3, points=2, depths=(1,))
    text = render(sweep_rows(spec), SWEEP_COLUMNS, "csv")
    lines = text.split("\n")
    assert "\r" not in text and text.endswith("\n")
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    first = lines[1].split(",")
    assert first[0] == "0.20000000000000001"  # 17 significant digits
    assert first[3] == "continue"


def test_render_json_is_valid():
    import json

    spec = SweepSpec(points=2, depths=(0,), strategies=("plain-vnm",))
    rows = maf_rows(spec)
    data = json.loads(render(rows, MAF_COLUMNS, "json"))
    assert [d["c"] for d in data] == [0.0, 1.0]
    assert data[1]["maf"] == pytest.approx(1.0, abs=1e-10)
    assert data[1]["baseline_fidelity"] == 1
