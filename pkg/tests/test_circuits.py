import json
import math
import random
from pathlib import Path

import pytest

from ecshor import modmath as mm
from ecshor.circuits import (
    ModContext,
    build_adder,
    build_batch_inverse,
    build_comparator,
    build_constant_adder,
    build_ec_point_add,
    build_equality_check,
    build_kaliski_inverse,
    build_lookup,
    build_lookup_roundtrip,
    build_mod_add,
    build_mod_dbl,
    build_mod_neg,
    build_mod_sub,
    build_montgomery_mul,
    build_unlookup,
    build_window_step,
    default_window,
    expected_garbage_registers,
    manifest_entry,
    point_add_inputs,
    run_batch_inverse,
    run_window_step,
    unlookup_split,
    window_table,
)
from ecshor.costs import crosscheck, ec_point_add_cost, lookup_cost, subroutine_cost, unlookup_cost
from ecshor.revsim import check_reversibility, count_stats, simulate_batch
from ecshor.verify import SUBROUTINES, VerifyConfigError, verify

GOLDEN = Path(__file__).parent / "golden"

# -- oracle sweeps ---------------------------------------------------------------------

EXHAUSTIVE = [(3, 7), (4, 11), (4, 13)]
CURVE_ONLY = {"ecpointadd", "window"}


@pytest.mark.parametrize("bits,prime", EXHAUSTIVE)
@pytest.mark.parametrize("subroutine", SUBROUTINES)
def test_exhaustive_against_oracle(subroutine, bits, prime):
    if subroutine in CURVE_ONLY and prime == 13:
        pytest.skip("no bundled curve over GF(13)")
    rep = verify(subroutine, bits, prime, "exhaustive")
    assert rep.ok, rep.as_dict()


@pytest.mark.parametrize("subroutine", SUBROUTINES)
def test_sampled_against_oracle_n8(subroutine):
    rep = verify(subroutine, 8, 251, "sampled", samples=1000, seed=11)
    assert rep.ok and rep.cases >= 1000, rep.as_dict()


def test_sampled_mode_at_16_bits():
    for s in ("modmul", "kaliski", "ecpointadd"):
        rep = verify(s, 16, 65521, "sampled", samples=200, seed=2)
        assert rep.ok, rep.as_dict()


def test_verify_rejects_bad_config():
    with pytest.raises(VerifyConfigError):
        verify("nope", 3)
    with pytest.raises(VerifyConfigError):
        verify("modadd", 0)
    with pytest.raises(VerifyConfigError):
        verify("ecpointadd", 4, 13)


@pytest.mark.parametrize("name", ["toy7", "toy11"])
def test_point_add_all_pairs_including_identity(name):
    params = mm.toy_curve(name)
    ctx = ModContext.for_prime(params.p)
    c = build_ec_point_add(ctx)
    pts = mm.enumerate_points(params)
    assert mm.INFINITY in pts
    pairs = [(a, b) for a in pts for b in pts]
    out = simulate_batch(c, point_add_inputs(params, pairs))
    assert not any(out["__ancilla_dirty__"])
    n = params.bits
    for i, (a, b) in enumerate(pairs):
        got = mm.CurvePoint(mm.montgomery_decode(out["x"][i], params.p, n), mm.montgomery_decode(out["y"][i], params.p, n))
        assert got == mm.ec_add(a, b, params), (a, b)


def test_window_step_every_address_toy251():
    params = mm.toy_curve("toy251")
    ctx = ModContext.for_prime(params.p)
    w = 4
    table = window_table(params, params.base_point, w)
    step = build_window_step(ctx, w, table)
    rng = random.Random(5)
    pts = mm.enumerate_points(params)
    cases = [(addr, rng.choice(pts)) for addr in range(1 << w) for _ in range(8)]
    got = run_window_step(step, params, [a for a, _ in cases], [q for _, q in cases])
    for (addr, q), r in zip(cases, got):
        expect = mm.ec_add(q, mm.ec_scalar_mul(addr, params.base_point, params), params)
        assert r == expect


# -- structural invariants ---------------------------------------------------------------


@pytest.mark.parametrize("p", [7, 11, 251])
def test_point_add_ancilla_budget(p):
    ctx = ModContext.for_prime(p)
    c = build_ec_point_add(ctx)
    assert c.meta["ancilla_budget"] == 5 * ctx.n + 5
    assert sum(c.meta["layout"].values()) == 5 * ctx.n + 5
    assert c.meta["calls"]["inversion"] == 2 and c.meta["calls"]["montgomery_mul"] == 5


@pytest.mark.parametrize("p", [7, 11, 13, 251])
def test_kaliski_garbage_is_2n(p):
    ctx = ModContext.for_prime(p)
    c = build_kaliski_inverse(ctx)
    assert len(c.garbage_wires()) == 2 * ctx.n


@pytest.mark.parametrize("p", [7, 251])
def test_montgomery_garbage(p):
    ctx = ModContext.for_prime(p)
    c = build_montgomery_mul(ctx, default_window(ctx.n))
    # n window bits plus the sign of the final reduction
    assert len(c.garbage_wires()) == ctx.n + 1


@pytest.mark.parametrize("variant", ["parallel", "sequential"])
@pytest.mark.parametrize("k", [1, 2, 4, 8])
def test_batch_inverse_counts(k, variant):
    ctx = ModContext.for_prime(11)
    c = build_batch_inverse(k, ctx, variant)
    st = c.meta["batch"]
    assert st.multiplications == 3 * k - 3
    assert st.inversions == 1
    expected = 6 * k - 4 if variant == "parallel" else 2 * k + 2 * math.ceil(math.log2(k))
    assert st.peak_garbage_registers == expected == expected_garbage_registers(k, variant)


@pytest.mark.parametrize("variant", ["parallel", "sequential"])
def test_batch_inverse_values(variant):
    p, n = 11, 4
    ctx = ModContext.for_prime(p)
    c = build_batch_inverse(4, ctx, variant)
    rng = random.Random(3)
    rows = [[rng.randrange(1, p) for _ in range(4)] for _ in range(40)]
    enc = [[mm.montgomery_encode(v, p, n) for v in row] for row in rows]
    for row, got in zip(rows, run_batch_inverse(c, enc)):
        for v, g in zip(row, got):
            assert mm.montgomery_decode(g, p, n) == mm.mod_inv(v, p)


def test_batch_inverse_rejects_zero():
    c = build_batch_inverse(2, ModContext.for_prime(11))
    with pytest.raises(mm.NotInvertibleError):
        run_batch_inverse(c, [0, 3])


def test_mod_context_validation():
    with pytest.raises(ValueError):
        ModContext(8, 4)
    with pytest.raises(ValueError):
        ModContext(7, 4)  # 7 < 2^3 so n is too wide
    assert ModContext.for_prime(251).n == 8


def test_reversibility_of_modular_builders():
    p = 11
    ctx = ModContext.for_prime(p)
    dom = list(range(p))
    for c in (build_mod_add(ctx), build_mod_add(ctx, True), build_mod_sub(ctx), build_mod_neg(ctx, True)):
        rep = check_reversibility(c, domains={"x": dom, "y": dom})
        assert rep.ok, (c.name, rep)
    assert check_reversibility(build_mod_dbl(ctx), domains={"x": dom}).ok


def test_lookup_roundtrip_is_clean():
    table = [random.Random(4).randrange(64) for _ in range(32)]
    rep = check_reversibility(build_lookup_roundtrip(5, 6, table))
    assert rep.ok


def test_unlookup_split_is_floor_half():
    assert [unlookup_split(w) for w in range(1, 9)] == [0, 1, 1, 2, 2, 3, 3, 4]


def test_small_builders_exhaustive():
    for n in (1, 2, 3, 5):
        assert check_reversibility(build_adder(n)).ok
        assert check_reversibility(build_comparator(n)).ok
        assert check_reversibility(build_equality_check(n)).ok


def test_constant_adder_values():
    for k in (0, 1, 5, 13):
        c = build_constant_adder(4, k)
        out = simulate_batch(c, {name: list(range(16)) for name, r in c.registers.items() if r.kind == "input"})
        dst = next(name for name in out if not name.startswith("__"))
        assert out[dst] == [(v + k) % 16 for v in range(16)]


# -- gate tallies against the closed forms ------------------------------------------------

TALLY_BUILDERS = {
    "mod_add": lambda ctx: build_mod_add(ctx),
    "ctrl_mod_add": lambda ctx: build_mod_add(ctx, True),
    "mod_sub": lambda ctx: build_mod_sub(ctx),
    "ctrl_mod_sub": lambda ctx: build_mod_sub(ctx, True),
    "mod_neg": lambda ctx: build_mod_neg(ctx),
    "ctrl_mod_neg": lambda ctx: build_mod_neg(ctx, True),
    "mod_dbl": lambda ctx: build_mod_dbl(ctx),
    "montgomery_mul": lambda ctx: build_montgomery_mul(ctx, default_window(ctx.n)),
    "kaliski": lambda ctx: build_kaliski_inverse(ctx),
    "adder": lambda ctx: build_adder(ctx.n),
    "comparator": lambda ctx: build_comparator(ctx.n),
}


@pytest.mark.parametrize("p", [7, 11, 13])
@pytest.mark.parametrize("name", sorted(TALLY_BUILDERS))
def test_tally_never_exceeds_formula_small_n(name, p):
    ctx = ModContext.for_prime(p)
    tally = count_stats(TALLY_BUILDERS[name](ctx)).toffoli_count
    assert tally <= subroutine_cost(name, ctx.n).toffoli


@pytest.mark.parametrize("p", [251, 65521])
@pytest.mark.parametrize("name", sorted(set(TALLY_BUILDERS) - {"ctrl_mod_neg"}))
def test_tally_in_default_band(name, p):
    ctx = ModContext.for_prime(p)
    rep = crosscheck(name, count_stats(TALLY_BUILDERS[name](ctx)), subroutine_cost(name, ctx.n))
    assert rep.ok, rep.reason


@pytest.mark.parametrize("p", [251, 65521])
def test_controlled_negation_is_cheaper_than_formula(p):
    # the control is folded into the zero-test flag, so the bit flips cost no Toffolis;
    # the default band flags it and names the subroutine
    ctx = ModContext.for_prime(p)
    rep = crosscheck("ctrl_mod_neg", count_stats(build_mod_neg(ctx, True)), subroutine_cost("ctrl_mod_neg", ctx.n))
    assert rep.tally <= rep.formula
    assert not rep.ok and "ctrl_mod_neg" in rep.reason


@pytest.mark.parametrize("w,m", [(4, 8), (6, 24), (8, 24)])
def test_lookup_tallies_in_band(w, m):
    table = [random.Random(w).randrange(1 << m) for _ in range(1 << w)]
    W = 1 << w
    assert crosscheck("lookup", count_stats(build_lookup(w, m, table)), lookup_cost(W, m)).ok
    assert crosscheck("unlookup", count_stats(build_unlookup(w, m, table)), unlookup_cost(W, m)).ok


@pytest.mark.parametrize("p", [251, 65521])
def test_point_add_tally_in_band(p):
    ctx = ModContext.for_prime(p)
    rep = crosscheck("ec_point_add", count_stats(build_ec_point_add(ctx)), ec_point_add_cost(ctx.n))
    assert rep.ok, rep.reason


def test_montgomery_tally_is_exact_at_window_4():
    for p in (11, 251, 65521):
        ctx = ModContext.for_prime(p)
        n = ctx.n
        assert 4 * count_stats(build_montgomery_mul(ctx, 4)).toffoli_count == 9 * n * n + 36 * n


# -- golden manifest ---------------------------------------------------------------------


def manifest():
    entries = []
    for p in (7, 11):
        ctx = ModContext.for_prime(p)
        n = ctx.n
        for name, b in sorted(TALLY_BUILDERS.items()):
            entries.append(manifest_entry(name, n, p, None, b(ctx)))
        entries.append(manifest_entry("ec_point_add", n, p, default_window(n), build_ec_point_add(ctx)))
        params = mm.toy_curve(f"toy{p}")
        entries.append(manifest_entry("window_step", n, p, 2, build_window_step(ctx, 2, window_table(params, params.base_point, 2))))
        for variant in ("parallel", "sequential"):
            entries.append(manifest_entry(f"batch_{variant}", n, p, None, build_batch_inverse(4, ctx, variant)))
    return json.loads(json.dumps(entries, sort_keys=True))


def test_builder_manifest_matches_golden():
    golden = json.loads((GOLDEN / "manifest.json").read_text())
    assert manifest() == golden
