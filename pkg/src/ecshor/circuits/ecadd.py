"""Reversible elliptic-curve point addition with exact exceptional cases.

All coordinates are Montgomery encoded and the point at infinity is (0, 0).
The circuit adds a point P1 = (a, b), held in a register that a lookup would
fill, to P2 = (x, y) in place. The tangent slope ``lam_r`` at P1 rides along
with it and is used when the chord slope is undefined or cannot be recovered.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..modmath import CurveParams, CurvePoint, montgomery_encode, tangent_slope
from ..revsim import Circuit
from .arith import Wires, copy, is_zero, xored
from .kaliski import kaliski_inverse, uninvert
from .modular import ModContext, mod_add, mod_neg, mod_sub
from .montgomery import montgomery_mul_into, unmul


@dataclass(frozen=True)
class ECPointAddLayout:
    """Named ancillas of one point addition: f1..f4, ctrl, lam and z1..z4."""

    n: int
    flags: tuple[str, ...] = ("f1", "f2", "f3", "f4", "ctrl")
    scratch: tuple[str, ...] = ("lam", "z1", "z2", "z3", "z4")

    def widths(self) -> dict[str, int]:
        out = {f: 1 for f in self.flags}
        out.update({s: self.n for s in self.scratch})
        return out

    @property
    def ancilla_budget(self) -> int:
        return sum(self.widths().values())


def table_entry(pt: CurvePoint, params: CurveParams, n: int) -> tuple[int, int, int]:
    """(a, b, lam_r) of a classical point, Montgomery encoded; Ø and 2-torsion get lam_r = 0."""
    p = params.p
    if pt.is_infinity or pt.y == 0:
        lam = 0
    else:
        lam = tangent_slope(pt, params)
    return (montgomery_encode(pt.x, p, n), montgomery_encode(pt.y, p, n), montgomery_encode(lam, p, n))


def ec_point_add(
    c: Circuit,
    ctx: ModContext,
    a: Wires,
    b: Wires,
    lam_r: Wires,
    x: Wires,
    y: Wires,
    window_bits: int | None = None,
) -> dict[str, list[int]]:
    """(x, y) <- (a, b) + (x, y). Returns the layout wires (all zero again on exit)."""
    n = ctx.n
    a, b, lam_r, x, y = (list(w) for w in (a, b, lam_r, x, y))
    layout = ECPointAddLayout(n)
    regs = {name: c.ancilla(width) for name, width in layout.widths().items()}
    claimed = [c.claim(wires, name, "ancilla", "ec_point_add").name for name, wires in regs.items()]
    (f1,), (f2,), (f3,), (f4,), (ctrl,) = (regs[k] for k in layout.flags)
    lam, z1, z2, z3, z4 = (regs[k] for k in layout.scratch)
    pol0 = (0,) * n

    def mul(u, v, out):
        return montgomery_mul_into(c, ctx, u, v, out, window_bits)

    with c.section("step1_flags"):
        with xored(c, a, x) as d:
            c.and_(d, f1, pol0)
        c.and_(a + b, f3, pol0 * 2)
        c.and_(x + y, f4, pol0 * 2)
        mod_neg(c, ctx, y)
        with xored(c, b, y) as d:
            c.and_(d, f2, pol0)
        (t,) = c.ancilla(1)
        c.and_((f1, f2), t)
        c.and_((f3, f4, t), ctrl, (0, 0, 0))
        c.unand((f1, f2), t)
        c.release([t])
        with xored(c, b, y) as d:
            c.unand(d, f2, pol0)
        mod_neg(c, ctx, y)

    with c.section("step2_lambda"):
        mod_sub(c, ctx, a, x)
        mod_sub(c, ctx, b, y, ctrl)
        (c1,) = c.ancilla(1)
        c.and_((ctrl, f1), c1, (1, 0))
        inv = kaliski_inverse(c, ctx, x, discard_known=False)
        m = mul(x, y, z1)
        copy(c, z1, lam, ctrl=c1)
        unmul(c, m)
        uninvert(c, inv)
        c.unand((ctrl, f1), c1, (1, 0))
        (d1,) = c.ancilla(1)
        c.and_((ctrl, f1), d1)
        copy(c, lam_r, lam, ctrl=d1)
        c.unand((ctrl, f1), d1)
        c.release([c1, d1])
        # x now holds x - a, which is zero exactly when f1 is set
        c.unand(x, f1, pol0)

    with c.section("step3_x"):
        m = mul(x, lam, z1)
        mod_sub(c, ctx, z1, y, ctrl)
        unmul(c, m)
        for _ in range(3):
            mod_add(c, ctx, a, x, ctrl)
        copy(c, lam, z2)
        m = mul(z2, lam, z3)
        mod_sub(c, ctx, z3, x, ctrl)
        unmul(c, m)
        copy(c, lam, z2)

    with c.section("step4_y"):
        m = mul(x, lam, z1)
        copy(c, z1, y, ctrl=ctrl)
        unmul(c, m)

    with c.section("step5_reset_lambda"):
        # (x, y) = (a - x3, lam * (a - x3)); x == 0 only when the line is tangent at P1
        with is_zero(c, x) as zx:
            g, h = c.ancilla(2)
            c.and_((ctrl, zx), g)
            c.and_((ctrl, zx), h, (1, 0))
            copy(c, lam_r, lam, ctrl=g)
            inv = kaliski_inverse(c, ctx, x, discard_known=False)
            m = mul(x, y, z4)
            copy(c, z4, lam, ctrl=h)
            unmul(c, m)
            uninvert(c, inv)
            c.unand((ctrl, zx), h, (1, 0))
            c.unand((ctrl, zx), g)
            c.release([g, h])
        mod_neg(c, ctx, x, ctrl)
        mod_add(c, ctx, a, x)
        mod_sub(c, ctx, b, y, ctrl)

    with c.section("step6_exceptions"):
        copy(c, a, x, ctrl=f4)
        copy(c, b, y, ctrl=f4)
        (t,) = c.ancilla(1)
        c.and_((ctrl, f3, f4), t, (0, 0, 0))
        copy(c, a, x, ctrl=t)
        mod_add(c, ctx, b, y, t)
        c.unand((ctrl, f3, f4), t, (0, 0, 0))
        c.release([t])
        with is_zero(c, x + y) as zo:
            c.unand((f3, f4, zo), ctrl, (0, 0, 0))
        with xored(c, a, x) as dx, xored(c, b, y) as dy:
            c.unand(dx + dy, f4, pol0 * 2)
        c.unand(a + b, f3, pol0 * 2)

    for name in claimed:
        c.unclaim(name)
    c.release([w for wires in regs.values() for w in wires])
    return regs


def build_ec_point_add(ctx: ModContext, window_bits: int | None = None) -> Circuit:
    """Standalone point addition with input registers a, b, lam_r, x, y."""
    c = Circuit(f"ec_point_add_p{ctx.p}")
    n = ctx.n
    regs = {k: c.add_register(k, n).wires for k in ("a", "b", "lam_r", "x", "y")}
    first_ancilla = c.num_wires
    ec_point_add(c, ctx, regs["a"], regs["b"], regs["lam_r"], regs["x"], regs["y"], window_bits)
    layout = ECPointAddLayout(n)
    c.meta["layout"] = layout.widths()
    c.meta["ancilla_budget"] = layout.ancilla_budget
    c.meta["peak_wires"] = c.num_wires - first_ancilla
    return c


def point_add_inputs(params: CurveParams, pairs, n: int | None = None) -> dict[str, list[int]]:
    """Encode (P1, P2) pairs as a simulation batch for :func:`build_ec_point_add`."""
    n = params.bits if n is None else n
    p = params.p
    batch: dict[str, list[int]] = {k: [] for k in ("a", "b", "lam_r", "x", "y")}
    for p1, p2 in pairs:
        ea, eb, el = table_entry(p1, params, n)
        batch["a"].append(ea)
        batch["b"].append(eb)
        batch["lam_r"].append(el)
        batch["x"].append(montgomery_encode(p2.x, p, n))
        batch["y"].append(montgomery_encode(p2.y, p, n))
    return batch
