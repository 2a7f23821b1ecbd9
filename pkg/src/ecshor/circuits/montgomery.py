"""Windowed out-of-place Montgomery multiplication."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..revsim import Circuit
from .arith import Wires, add, add_const, cadd
from .lookup import lookup, unlookup
from .modular import ModContext


def reduction_table(p: int, w: int) -> list[int]:
    """V(t) = (t + m(t)*p) / 2**w with m(t) = -t * p^-1 mod 2**w."""
    mod = 1 << w
    pinv = pow(p, -1, mod)
    out = []
    for t in range(mod):
        m = (-t * pinv) % mod
        out.append((t + m * p) >> w)
    return out


def default_window(n: int, preferred: int = 4) -> int:
    for w in range(min(preferred, n), 0, -1):
        if n % w == 0:
            return w
    return 1


@dataclass
class MulResult:
    out: list[int]
    garbage: list[int]
    start: int
    stop: int
    garbage_by_source: dict = field(default_factory=dict)
    owns_out: bool = True


def montgomery_mul(
    c: Circuit, ctx: ModContext, a: Wires, b: Wires, window_bits: int | None = None
) -> MulResult:
    """Return wires holding a*b*2**-n mod p (requires b < p; a is any n-bit value).

    Each step consumes ``window_bits`` bits of a with that many controlled
    additions of b, then clears the low bits of the accumulator with a lookup of
    V(t) and one addition; those low bits become garbage. A final subtract-p /
    conditional-add-p pair reduces the accumulator below p and leaves one flag.
    """
    p, n = ctx.p, ctx.n
    w = default_window(n) if window_bits is None else window_bits
    if w < 1 or n % w:
        raise ValueError(f"window size {w} must divide n={n}")
    a, b = list(a), list(b)
    start = c.mark()
    c.meta.setdefault("calls", Counter())["montgomery_mul"] += 1
    table = reduction_table(p, w)
    acc = c.ancilla(n + 1)
    garbage: list[int] = []
    for j in range(n // w):
        wide = acc + c.ancilla(w)
        for i in range(w):
            cadd(c, a[j * w + i], b, wide[i : i + n + 2])
        t = wide[:w]
        tmp = c.ancilla(n)
        lookup(c, t, tmp, table)
        add(c, tmp, wide[w:])
        unlookup(c, t, tmp, table)
        c.release(tmp)
        garbage.extend(t)
        acc = wide[w:]
    # acc < 2p; subtract p and add it back if that went negative
    (sign,) = c.ancilla(1)
    add_const(c, (1 << (n + 2)) - p, acc + [sign])
    add_const(c, p, acc[:n], ctrl=sign)
    c.cx(sign, acc[n])
    c.release([acc[n]])
    garbage.append(sign)
    return MulResult(acc[:n], garbage, start, c.mark(), {"window": garbage[:-1], "reduction": [sign]})


def montgomery_mul_into(
    c: Circuit, ctx: ModContext, a: Wires, b: Wires, out: Wires, window_bits: int | None = None
) -> MulResult:
    """Like :func:`montgomery_mul` but swaps the product into a zeroed ``out``."""
    res = montgomery_mul(c, ctx, a, b, window_bits)
    for s, t in zip(res.out, out):
        c.swap(s, t)
    c.release(res.out)
    return MulResult(list(out), res.garbage, res.start, c.mark(), res.garbage_by_source, owns_out=False)


def unmul(c: Circuit, res: MulResult, ctx: ModContext | None = None) -> None:
    """Uncompute a product (and its garbage) by replaying its gates backwards."""
    c.uncompute(res.start, res.stop)
    c.meta.setdefault("calls", Counter())["montgomery_mul_uncompute"] += 1
    c.release(res.garbage)
    if res.owns_out:
        c.release(res.out)


def build_montgomery_mul(ctx: ModContext, window_bits: int | None = None) -> Circuit:
    """Out-of-place product; the garbage stays in a labeled register."""
    c = Circuit(f"montgomery_mul_p{ctx.p}")
    a = c.add_register("a", ctx.n)
    b = c.add_register("b", ctx.n)
    with c.section("montgomery_mul"):
        res = montgomery_mul(c, ctx, a.wires, b.wires, window_bits)
    c.claim(res.out, "out", "output", "montgomery_mul")
    c.claim(res.garbage, "garbage", "garbage", "montgomery_mul")
    c.meta["window_bits"] = default_window(ctx.n) if window_bits is None else window_bits
    c.meta["garbage_by_source"] = {k: len(v) for k, v in res.garbage_by_source.items()}
    return c
