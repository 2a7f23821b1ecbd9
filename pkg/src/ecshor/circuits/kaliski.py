"""In-place Montgomery-domain inversion with a fixed 2n-iteration Kaliski loop."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..revsim import Circuit
from .arith import Wires, add_const, cadd, csub, lt
from .modular import ModContext, mod_dbl


@dataclass
class InverseResult:
    garbage: list[int]
    known: dict[str, list[int]]
    start: int
    stop: int


def kaliski_inverse(c: Circuit, ctx: ModContext, x: Wires, discard_known: bool = True) -> InverseResult:
    """x <- x^-1 * 2**(2n) mod p, so that a Montgomery product of the input and
    the output is the encoding of 1.

    Registers start at u=p, v=x, r=0, s=1. Each iteration swaps (u,r) with
    (v,s) when v must be the one reduced, does the controlled subtract/add,
    halves u, doubles s modulo p and swaps back. The subtraction-control bit of
    every iteration is kept as garbage. The terminal state is u=1, v=0, s=p,
    r=p-y, and a negation plus a constant addition turns r into y before it
    is swapped into the input wires.
    """
    p, n = ctx.p, ctx.n
    v = list(x)
    start = c.mark()
    c.meta.setdefault("calls", Counter())["inversion"] += 1
    u = c.ancilla(n)
    r = c.ancilla(n)
    s = c.ancilla(n)
    (f,) = c.ancilla(1)
    for i in range(n):
        if (p >> i) & 1:
            c.x(u[i])
    c.x(s[0])
    garbage: list[int] = []
    for _ in range(2 * n):
        (m,) = c.ancilla(1)
        with lt(c, v, u) as q:
            (t1,) = c.ancilla(1)
            c.and_((v[0], q), t1)
            # m: u odd and not (v odd and v < u), i.e. v is the one to reduce
            c.and_((u[0], t1), m, (1, 0))
            c.unand((v[0], q), t1)
            c.release([t1])
        for a, b in zip(u, v):
            c.cswap(m, a, b)
        for a, b in zip(r, s):
            c.cswap(m, a, b)
        (cb,) = c.ancilla(1)
        c.cx(u[0], cb)
        csub(c, cb, v, u)
        cadd(c, cb, s, r)
        for i in range(n - 1):
            c.swap(u[i], u[i + 1])
        mod_dbl(c, ctx, s)
        for a, b in zip(u, v):
            c.cswap(m, a, b)
        for a, b in zip(r, s):
            c.cswap(m, a, b)
        # the loop terminates exactly when a subtraction leaves v == 0
        c.mcx(list(v) + [cb], f, (0,) * n + (1,))
        # before termination the doubled register is even, so r is even iff swapped
        c.mcx((f, r[0]), m, (0, 1))
        c.x(m)
        c.release([m])
        garbage.append(cb)
    for w in r:
        c.x(w)
    add_const(c, p + 1, r)
    for a, b in zip(r, v):
        c.swap(a, b)
    c.release(r)
    known = {"u": u, "s": s, "f": [f]}
    if discard_known:
        c.x(u[0])
        for i in range(n):
            if (p >> i) & 1:
                c.x(s[i])
        c.x(f)
        c.release(u + s + [f])
        known = {}
    return InverseResult(garbage, known, start, c.mark())


def uninvert(c: Circuit, res: InverseResult) -> None:
    c.uncompute(res.start, res.stop)
    c.meta.setdefault("calls", Counter())["inversion_uncompute"] += 1
    c.release(res.garbage)
    for wires in res.known.values():
        c.release(wires)


def build_kaliski_inverse(ctx: ModContext, discard_known: bool = True) -> Circuit:
    c = Circuit(f"kaliski_p{ctx.p}")
    x = c.add_register("x", ctx.n)
    with c.section("kaliski"):
        res = kaliski_inverse(c, ctx, x.wires, discard_known)
    c.claim(res.garbage, "garbage", "garbage", "kaliski")
    for name, wires in res.known.items():
        c.claim(wires, name, "output", "kaliski terminal value")
    return c
