import itertools
from pathlib import Path

import pytest

from ecshor.circuits import build_adder, build_lookup
from ecshor.revsim import (
    Circuit,
    Gate,
    GateStats,
    SimulationError,
    check_reversibility,
    count_stats,
    dump_circuit,
    load_circuit,
    read_table,
    simulate,
    simulate_batch,
    stats_by_label,
    write_table,
)

GOLDEN = Path(__file__).parent / "golden"


def toffoli_circuit():
    c = Circuit("tof")
    c.add_register("a", 1)
    c.add_register("b", 1)
    c.add_register("t", 1)
    c.tof(0, 1, 2)
    return c


def test_toffoli_truth_table():
    c = toffoli_circuit()
    for a, b, t in itertools.product((0, 1), repeat=3):
        assert simulate(c, {"a": a, "b": b, "t": t}) == {"a": a, "b": b, "t": t ^ (a & b)}


def test_batch_matches_single_runs():
    c = build_adder(4)
    rows = list(itertools.product(range(16), repeat=2))
    out = simulate_batch(c, {"a": [r[0] for r in rows], "b": [r[1] for r in rows]})
    for i, (a, b) in enumerate(rows):
        assert out["b"][i] == (a + b) % 16
        assert simulate(c, {"a": a, "b": b})["b"] == out["b"][i]
    assert not any(out["__ancilla_dirty__"])


def test_mcx_polarity():
    c = Circuit()
    c.add_register("x", 3)
    c.add_register("t", 1)
    c.mcx([0, 1, 2], 3, polarity=(1, 0, 1))
    for x in range(8):
        fire = x == 0b101
        assert simulate(c, {"x": x, "t": 0})["t"] == int(fire)


def test_and_requires_fresh_target():
    c = Circuit()
    c.add_register("x", 2)
    c.add_register("t", 1)
    c.and_([0, 1], 2)
    with pytest.raises(SimulationError):
        simulate(c, {"x": 0, "t": 1})


def test_unand_checks_value():
    c = Circuit()
    c.add_register("x", 2)
    c.add_register("t", 1)
    c.unand([0, 1], 2)
    assert simulate(c, {"x": 3, "t": 1})["t"] == 0
    with pytest.raises(SimulationError):
        simulate(c, {"x": 1, "t": 1})


def test_release_of_dirty_wire_is_caught():
    c = Circuit()
    c.add_register("x", 1)
    (w,) = c.ancilla(1)
    c.cx(0, w)
    c.release([w])
    assert simulate(c, {"x": 0})["x"] == 0
    with pytest.raises(SimulationError):
        simulate(c, {"x": 1})


def test_dirty_ancilla_is_reported_without_release():
    c = Circuit()
    c.add_register("x", 1)
    (w,) = c.ancilla(1)
    c.cx(0, w)
    out = simulate_batch(c, {"x": [0, 1]})
    assert out["__ancilla_dirty__"] == [0, 1]


def test_missing_input_is_an_error():
    c = toffoli_circuit()
    with pytest.raises(SimulationError):
        simulate(c, {"a": 1})


def test_lookup_and_erase():
    table = [3, 0, 6, 5]
    c = build_lookup(2, 3, table)
    for addr in range(4):
        assert simulate(c, {"address": addr, "target": 0})["target"] == table[addr]
        assert simulate(c, {"address": addr, "target": 7})["target"] == 7 ^ table[addr]
    e = Circuit()
    e.add_register("address", 2)
    e.add_register("target", 3)
    e.erase([0, 1], [2, 3, 4], table)
    assert simulate(e, {"address": 2, "target": 6})["target"] == 0
    with pytest.raises(SimulationError):
        simulate(e, {"address": 2, "target": 5})


def test_gate_inverse_pairs():
    g = Gate("AND", (0, 1, 2), (1, 1))
    assert g.inverse().kind == "UNAND" and g.inverse().inverse() == g
    fresh = Gate("LOOKUP", (0, 1, 2), table=(0, 1), split=1, method="fresh")
    assert fresh.inverse().kind == "ERASE" and fresh.inverse().inverse() == fresh
    plain = Gate("LOOKUP", (0, 1, 2), table=(0, 1), split=1)
    assert plain.inverse() == plain
    assert Gate("CSWAP", (0, 1, 2)).controls == (0,)
    # asserting zero is its own inverse
    assert Gate("ZERO", (0,)).inverse() == Gate("ZERO", (0,))


def test_circuit_inverse_undoes_adder():
    c = build_adder(3)
    rt = c.then(c.inverse())
    for a, b in itertools.product(range(8), repeat=2):
        assert simulate(rt, {"a": a, "b": b}) == {"a": a, "b": b}


def test_uncompute_slice():
    c = Circuit()
    c.add_register("x", 2)
    t = c.ancilla(1)
    start = c.mark()
    c.and_([0, 1], t[0])
    c.uncompute(start)
    c.release(t)
    for x in range(4):
        assert simulate(c, {"x": x}) == {"x": x}


def test_check_reversibility_exhaustive_and_failure():
    rep = check_reversibility(build_adder(3))
    assert rep.ok and rep.exhaustive and rep.samples == 64
    bad = Circuit()
    bad.add_register("x", 1)
    (w,) = bad.ancilla(1)
    bad.cx(0, w)
    rep = check_reversibility(bad)
    assert not rep.ok and rep.counterexample == {"x": 1}


def test_check_reversibility_samples_large_inputs():
    rep = check_reversibility(build_adder(16), samples=300, seed=3)
    assert rep.ok and not rep.exhaustive and rep.samples == 300


def test_count_stats_rules():
    c = Circuit()
    c.add_register("x", 4)
    c.add_register("t", 2)
    c.tof(0, 1, 4)  # 1
    c.mcx([0, 1, 2, 3], 5)  # 3
    c.and_([0, 1], c.ancilla(1)[0])  # 1
    c.cswap(0, 1, 2)  # 1
    c.lookup([0, 1], [4], [0, 1, 1, 0])  # 4 entries, 3 Toffolis
    st = count_stats(c)
    assert st.toffoli_count == 9
    assert st.and_count == 1
    assert st.cswap_count == 1
    assert st.lookup_unit_count == 4
    assert st.reaction_depth_estimate == 2 * st.toffoli_count
    assert st.gate_count == 5


def test_stats_add_and_labels():
    c = Circuit()
    c.add_register("x", 3)
    with c.section("first"):
        c.tof(0, 1, 2)
    with c.section("second"):
        c.tof(0, 1, 2)
        c.tof(0, 1, 2)
    by = stats_by_label(c)
    assert by["first"].toffoli_count == 1 and by["second"].toffoli_count == 2
    total = by["first"] + by["second"]
    assert isinstance(total, GateStats) and total.toffoli_count == 3
    assert total.as_dict()["toffoli_count"] == 3


def test_dump_load_roundtrip(tmp_path):
    for c in (build_adder(3), build_lookup(2, 3, [1, 5, 7, 2])):
        path = tmp_path / f"{c.name}.circ"
        dump_circuit(c, path)
        back = load_circuit(path)
        assert back.gates == c.gates
        assert {k: (r.kind, r.wires) for k, r in back.registers.items()} == {
            k: (r.kind, r.wires) for k, r in c.registers.items()
        }


@pytest.mark.parametrize("name,builder", [("adder2", lambda: build_adder(2)), ("adder3", lambda: build_adder(3))])
def test_golden_dump(tmp_path, name, builder):
    path = tmp_path / f"{name}.circ"
    dump_circuit(builder(), path)
    assert path.read_text() == (GOLDEN / f"{name}.circ").read_text()


def test_table_files_are_fixed_width(tmp_path):
    path = tmp_path / "t.bin"
    write_table(path, [1, 2, 300, 0], 9)
    assert path.stat().st_size == 4 * 2
    assert read_table(path, 9) == [1, 2, 300, 0]
