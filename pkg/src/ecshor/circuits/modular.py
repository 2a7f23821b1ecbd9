"""Modular addition, negation, subtraction and doubling for reduced inputs."""

from __future__ import annotations

from dataclasses import dataclass

from ..revsim import Circuit
from .arith import Wires, add, add_const, cadd, is_zero, lt


@dataclass(frozen=True)
class ModContext:
    p: int
    n: int
    montgomery: bool = True

    def __post_init__(self):
        if self.p % 2 == 0:
            raise ValueError("modulus must be odd")
        if not (1 << (self.n - 1)) < self.p < (1 << self.n):
            raise ValueError(f"modulus {self.p} does not fill {self.n} bits")

    @classmethod
    def for_prime(cls, p: int) -> "ModContext":
        return cls(p, p.bit_length())


def mod_add(c: Circuit, ctx: ModContext, x: Wires, y: Wires, ctrl: int | None = None) -> None:
    """y <- y + x mod p (optionally controlled). x may also equal p exactly."""
    p, n = ctx.p, ctx.n
    (hi,) = c.ancilla(1)
    wide = list(y) + [hi]
    if ctrl is None:
        add(c, x, wide)
    else:
        cadd(c, ctrl, x, wide)
    add_const(c, (1 << (n + 1)) - p, wide)
    add_const(c, p, list(y), ctrl=hi)
    # hi is now 1 exactly when no reduction happened, i.e. when y >= x
    with lt(c, y, x) as q:
        if ctrl is None:
            c.cx(q, hi)
        else:
            c.tof(ctrl, q, hi)
    c.x(hi)
    c.release([hi])


def mod_neg(c: Circuit, ctx: ModContext, x: Wires, ctrl: int | None = None) -> None:
    """x <- -x mod p; zero is left alone."""
    with is_zero(c, x) as z:
        if ctrl is None:
            c.x(z)
            t = z
        else:
            (t,) = c.ancilla(1)
            c.and_((ctrl, z), t, (1, 0))
        for w in x:
            c.cx(t, w)
        add_const(c, ctx.p + 1, x, ctrl=t)
        if ctrl is None:
            c.x(z)
        else:
            c.unand((ctrl, z), t, (1, 0))
            c.release([t])


def _neg_unchecked(c: Circuit, ctx: ModContext, x: Wires) -> None:
    # p - x, mapping 0 to p
    for w in x:
        c.x(w)
    add_const(c, ctx.p + 1, x)


def _unneg_unchecked(c: Circuit, ctx: ModContext, x: Wires) -> None:
    add_const(c, -(ctx.p + 1), x)
    for w in x:
        c.x(w)


def mod_sub(c: Circuit, ctx: ModContext, x: Wires, y: Wires, ctrl: int | None = None) -> None:
    """y <- y - x mod p."""
    _neg_unchecked(c, ctx, x)
    mod_add(c, ctx, x, y, ctrl)
    _unneg_unchecked(c, ctx, x)


def mod_dbl(c: Circuit, ctx: ModContext, x: Wires) -> None:
    """x <- 2x mod p in place.

    The doubled value is x with a fresh zero wire below it. After subtracting p
    and conditionally adding it back, the low wire equals the negated sign bit,
    which resets the sign with one CNOT. SWAPs then rotate the result back.
    """
    p, n = ctx.p, ctx.n
    x = list(x)
    lo, msb = c.ancilla(2)
    z = [lo] + x + [msb]
    # 2x - p: low bit of the difference is always 1 and produces no carry
    c.x(lo)
    add_const(c, (1 << (n + 1)) - (p + 1) // 2, z[1:])
    add_const(c, p, z[: n + 1], ctrl=msb)
    c.cx(lo, msb)
    c.x(msb)
    for i in range(n - 1, 0, -1):
        c.swap(x[i], x[i - 1])
    c.swap(x[0], lo)
    c.release([lo, msb])


# -- standalone builders ---------------------------------------------------------


def _two_operand(name: str, ctx: ModContext, controlled: bool) -> tuple[Circuit, list[int], list[int], int | None]:
    c = Circuit(f"{name}{'_ctrl' if controlled else ''}_p{ctx.p}")
    x = c.add_register("x", ctx.n)
    y = c.add_register("y", ctx.n)
    ctrl = c.add_register("ctrl", 1).wires[0] if controlled else None
    return c, x.wires, y.wires, ctrl


def build_mod_add(ctx: ModContext, controlled: bool = False) -> Circuit:
    c, x, y, ctrl = _two_operand("mod_add", ctx, controlled)
    mod_add(c, ctx, x, y, ctrl)
    return c


def build_mod_sub(ctx: ModContext, controlled: bool = False) -> Circuit:
    c, x, y, ctrl = _two_operand("mod_sub", ctx, controlled)
    mod_sub(c, ctx, x, y, ctrl)
    return c


def build_mod_neg(ctx: ModContext, controlled: bool = False) -> Circuit:
    c = Circuit(f"mod_neg{'_ctrl' if controlled else ''}_p{ctx.p}")
    x = c.add_register("x", ctx.n)
    ctrl = c.add_register("ctrl", 1).wires[0] if controlled else None
    mod_neg(c, ctx, x.wires, ctrl)
    return c


def build_mod_dbl(ctx: ModContext) -> Circuit:
    c = Circuit(f"mod_dbl_p{ctx.p}")
    x = c.add_register("x", ctx.n)
    mod_dbl(c, ctx, x.wires)
    return c
