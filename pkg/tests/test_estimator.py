import csv
import io
import json
import math

import pytest

from ecshor.costs import CostVector, per_key_cost
from ecshor.estimator import (
    ArchSpec,
    EstimatorConfigError,
    Grid,
    HardwareModel,
    estimate,
    estimate_active_volume,
    estimate_baseline,
    failure_probability,
    human_time,
    reaction_limit,
    render,
    select_distance,
    sweep,
)

MIN, HOUR, DAY = 60, 3600, 86400
PK1 = per_key_cost(256, 1, "published")
PK4 = per_key_cost(256, 4, "published")
SC = HardwareModel.make("superconducting")
ION = HardwareModel.make("ion")


def fbqc(t):
    return HardwareModel.make("fbqc", t)


def close(x, target, tol):
    return abs(x / target - 1) <= tol


# -- distance -----------------------------------------------------------------------------


def test_distance_examples():
    assert select_distance(2.6e13) == 28
    assert select_distance(1.3e11) == 24
    assert select_distance(1) == 2


def test_distance_monotone():
    ds = [select_distance(10**e) for e in range(0, 20)]
    assert ds == sorted(ds)
    assert all(d % 2 == 0 for d in ds)


def test_distance_errors():
    with pytest.raises(EstimatorConfigError):
        select_distance(0)
    with pytest.raises(EstimatorConfigError):
        select_distance(10, target_failure=0)


def test_failure_probability_forms():
    union, exact = failure_probability(2.6e13, 28)
    assert union == pytest.approx(0.26)
    assert exact < union and exact == pytest.approx(1 - math.exp(-0.26), rel=1e-6)


# -- baseline -----------------------------------------------------------------------------


def test_baseline_superconducting():
    r = estimate_baseline(PK1, ArchSpec("baseline"), SC)
    assert r.code_distance == 28
    assert 0.15 <= r.failure_probability <= 0.30
    assert close(r.physical_qubits, 9.4e6, 0.01)
    assert close(r.logical_cycles_per_key, 484e6, 0.01)
    assert close(r.time_per_key, 3.8 * HOUR, 0.05)
    assert close(r.spacetime_blocks_per_key, 2.6e12, 0.02)


def test_baseline_ion_and_fbqc():
    assert close(estimate_baseline(PK1, ArchSpec("baseline"), ION).time_per_key, 160 * DAY, 0.05)
    r1 = estimate_baseline(PK1, ArchSpec("baseline"), fbqc(1e-6))
    assert close(r1.rsg_rate, 4.7e12, 0.02) and r1.physical_qubits is None
    r10 = estimate_baseline(PK1, ArchSpec("baseline"), fbqc(10e-6))
    assert close(r10.rsg_rate, 470e9, 0.02)
    assert close(r10.time_per_key, 1.6 * DAY, 0.05)


def test_wrong_architecture_rejected():
    with pytest.raises(EstimatorConfigError):
        estimate_baseline(PK1, ArchSpec("active-volume"), SC)
    with pytest.raises(EstimatorConfigError):
        estimate_active_volume(PK1, ArchSpec("baseline"), SC)
    with pytest.raises(EstimatorConfigError):
        ArchSpec("hexagonal")
    with pytest.raises(EstimatorConfigError):
        HardwareModel.make("fbqc")
    with pytest.raises(EstimatorConfigError):
        HardwareModel("ion", 0)


# -- active volume ------------------------------------------------------------------------


def test_active_volume_k1():
    arch = ArchSpec("active-volume")
    r = estimate_active_volume(PK1, arch, SC)
    assert r.code_distance == 24
    assert close(r.time_per_key, 58, 0.05)
    assert r.module_qubits == 1152 and r.logical_qubits == 6000
    assert close(estimate_active_volume(PK1, arch, ION).time_per_key, 16 * HOUR, 0.05)
    assert close(estimate_active_volume(PK1, arch, fbqc(10e-6)).time_per_key, 9.7 * MIN, 0.05)


def test_active_volume_k4_bursts():
    r = estimate_active_volume(PK4, ArchSpec("active-volume", instances=4), fbqc(10e-6))
    assert close(r.burst_time, 5.6 * MIN, 0.10)
    assert close(r.time_per_key, 1.4 * MIN, 0.10)
    assert r.burst_time == pytest.approx(4 * r.time_per_key)


@pytest.mark.parametrize("hw", [SC, ION, fbqc(1e-6), fbqc(10e-6), fbqc(1e-3)])
def test_speedup_near_240(hw):
    base = estimate(PK1, ArchSpec("baseline"), hw)
    av = estimate(PK1, ArchSpec("active-volume"), hw)
    assert close(base.time_per_key / av.time_per_key, 240, 0.10)


def test_fbqc_logical_qubit_relation_exact():
    for t in (1e-6, 10e-6, 100e-6, 1e-3):
        r = estimate(PK1, ArchSpec("active-volume"), fbqc(t))
        assert r.fbqc_logical_qubits == pytest.approx(r.logical_qubits, rel=1e-12)


def test_linear_in_code_cycle_and_workspace():
    arch = ArchSpec("active-volume")
    a = estimate(PK1, arch, HardwareModel("superconducting", 1e-6), distance=24)
    b = estimate(PK1, arch, HardwareModel("superconducting", 3e-6), distance=24)
    assert b.time_per_key == pytest.approx(3 * a.time_per_key)
    wide = estimate(PK1, ArchSpec("active-volume", logical_memory_qubits=6000), SC, distance=24)
    assert wide.time_per_key == pytest.approx(a.time_per_key / 2)


def test_fbqc_delay_tradeoff():
    arch = ArchSpec("active-volume")
    r1 = estimate(PK1, arch, fbqc(10e-6))
    r2 = estimate(PK1, arch, fbqc(20e-6))
    assert r2.time_per_key == pytest.approx(2 * r1.time_per_key)
    assert r2.rsg_rate == pytest.approx(r1.rsg_rate / 2)
    # at a fixed RSG rate, doubling the delay doubles the memory
    d = r1.code_distance
    assert r1.rsg_rate * 20e-6 / d**2 == pytest.approx(2 * r1.fbqc_logical_qubits)


def test_key_size_doubling():
    big = CostVector(PK1.toffoli * 8, PK1.active_volume_blocks * 8, PK1.memory_qubits * 2, PK1.reaction_depth * 8)
    for kind in ("baseline", "active-volume"):
        small = estimate(PK1, ArchSpec(kind), SC, distance=28)
        large = estimate(big, ArchSpec(kind, logical_memory_qubits=6000), SC, distance=28)
        assert large.physical_qubits == pytest.approx(2 * small.physical_qubits)
        ratio = large.time_per_key / small.time_per_key
        # active volume spreads over twice the workspace; baseline runs one Toffoli stream
        assert ratio == pytest.approx(8 if kind == "baseline" else 4)


def test_fifty_percent_threshold_sensitivity():
    a = estimate(PK1, ArchSpec("baseline"), SC)
    b = estimate(PK1, ArchSpec("baseline"), SC, threshold="50%")
    assert b.code_distance == 2 * a.code_distance
    assert b.physical_qubits == pytest.approx(4 * a.physical_qubits)
    assert b.time_per_key == pytest.approx(2 * a.time_per_key)
    with pytest.raises(EstimatorConfigError):
        estimate(PK1, ArchSpec("baseline"), SC, threshold="30%")


# -- reaction limit -----------------------------------------------------------------------


def test_reaction_floors():
    assert close(reaction_limit(PK1, 1, 10e-6), 36 * MIN, 0.10)
    assert close(reaction_limit(PK4, 4, 10e-6), 5 * MIN, 0.10)
    assert close(4 * reaction_limit(PK4, 4, 10e-6), 20 * MIN, 0.10)
    assert reaction_limit(PK1, 1, 0) == 0
    with pytest.raises(EstimatorConfigError):
        reaction_limit(PK1, 0)


def test_asterisks_follow_the_floor():
    for r in sweep():
        assert r.reaction_limited == (r.time_per_key < r.reaction_floor)
        assert (r.flag == "*") == r.reaction_limited
    assert not any(r.reaction_limited for r in sweep(Grid(reaction_time=0)))


def test_expected_flags():
    flagged = {(r.architecture, r.hardware, r.code_cycle, r.instances) for r in sweep(Grid(instances=(1,))) if r.flag}
    assert ("active-volume", "superconducting", 1e-6, 1) in flagged
    assert ("active-volume", "fbqc", 10e-6, 1) in flagged
    assert ("active-volume", "ion", 1e-3, 1) not in flagged
    assert not any(a == "baseline" for a, *_ in flagged)


# -- sweeps and output --------------------------------------------------------------------


def test_sweep_is_full_grid():
    g = Grid(delays=(1e-6, 1e-5), instances=(1, 2, 4))
    rows = sweep(g)
    assert len(rows) == 2 * (2 + 2) * 3
    assert len({(r.architecture, r.hardware, r.code_cycle, r.instances) for r in rows}) == len(rows)


def test_grid_validation():
    with pytest.raises(EstimatorConfigError):
        Grid(hardware=("abacus",))
    with pytest.raises(EstimatorConfigError):
        Grid(delays=(0,))
    with pytest.raises(EstimatorConfigError):
        Grid(instances=(0,))


def test_render_formats_deterministic():
    rows = sweep()
    for fmt in ("text", "csv", "json"):
        assert render(rows, fmt) == render(sweep(), fmt)
    parsed = list(csv.DictReader(io.StringIO(render(rows, "csv"))))
    assert len(parsed) == len(rows) and parsed[0]["architecture"] == "baseline"
    doc = json.loads(render(rows, "json", {"seed": 0}))
    assert doc["header"] == {"seed": 0} and len(doc["rows"]) == len(rows)
    text = render(rows, "text")
    assert "not modeled" in text and "*" in text
    with pytest.raises(EstimatorConfigError):
        render(rows, "xml")


def test_human_time():
    assert human_time(58.7) == "59 s"
    assert human_time(9.78 * MIN) == "9.8 min"
    assert human_time(160 * DAY) == "160 days"
    assert human_time(10e-6) == "10 us"


def test_computed_mode_close_to_published_mode():
    g = Grid(published_constants=False, instances=(1,))
    for comp, pub in zip(sweep(g), sweep(Grid(instances=(1,)))):
        assert comp.code_distance == pub.code_distance
        assert close(comp.time_per_key, pub.time_per_key, 0.15)
