"""One windowed step: table lookup, point addition, table unlookup."""

from __future__ import annotations

from typing import Sequence

from ..modmath import INFINITY, CurveParams, CurvePoint, ec_add, montgomery_decode, montgomery_encode
from ..revsim import Circuit, simulate_batch
from .ecadd import ec_point_add, table_entry
from .lookup import lookup, unlookup
from .modular import ModContext


def window_table(params: CurveParams, base: CurvePoint, w: int, n: int | None = None) -> list[tuple[int, int, int]]:
    """Entries (a, b, lam_r) for [c]base, c = 0 .. 2**w - 1, Montgomery encoded."""
    n = params.bits if n is None else n
    out = []
    acc = INFINITY
    for _ in range(1 << w):
        out.append(table_entry(acc, params, n))
        acc = ec_add(acc, base, params)
    return out


def pack_entries(table: Sequence[tuple[int, int, int]], n: int) -> list[int]:
    return [a | (b << n) | (lam << (2 * n)) for a, b, lam in table]


def build_window_step(
    ctx: ModContext,
    window_bits: int,
    table: Sequence[tuple[int, int, int]],
    mul_window_bits: int | None = None,
) -> Circuit:
    """(x, y) <- (x, y) + table[address], with the 3n-bit entry looked up into scratch."""
    if len(table) != 1 << window_bits:
        raise ValueError(f"table has {len(table)} entries, expected {1 << window_bits}")
    n = ctx.n
    c = Circuit(f"window_step_w{window_bits}_p{ctx.p}")
    addr = c.add_register("address", window_bits).wires
    x = c.add_register("x", n).wires
    y = c.add_register("y", n).wires
    if window_bits == 0:
        return c
    packed = pack_entries(table, n)
    entry = c.ancilla(3 * n)
    a, b, lam = entry[:n], entry[n : 2 * n], entry[2 * n :]
    with c.section("lookup"):
        lookup(c, addr, entry, packed)
    with c.section("ec_point_add"):
        ec_point_add(c, ctx, a, b, lam, x, y, mul_window_bits)
    with c.section("unlookup"):
        unlookup(c, addr, entry, packed)
    c.release(entry)
    return c


def run_window_step(
    circuit: Circuit, params: CurveParams, addresses: Sequence[int], points: Sequence[CurvePoint]
) -> list[CurvePoint]:
    """Simulate on plain (decoded) points; returns decoded outputs."""
    p, n = params.p, params.bits
    out = simulate_batch(
        circuit,
        {
            "address": list(addresses),
            "x": [montgomery_encode(pt.x, p, n) for pt in points],
            "y": [montgomery_encode(pt.y, p, n) for pt in points],
        },
    )
    if any(out["__ancilla_dirty__"]):
        raise RuntimeError("window step left a scratch wire dirty")
    return [
        CurvePoint(montgomery_decode(xv, p, n), montgomery_decode(yv, p, n))
        for xv, yv in zip(out["x"], out["y"])
    ]
