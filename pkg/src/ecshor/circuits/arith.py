"""Non-modular reversible arithmetic on wire lists.

Every gadget appends gates to a :class:`Circuit` and borrows scratch from its
ancilla pool. Addition follows the measurement-uncomputed ripple-carry layout:
an m-bit add costs m-1 AND gates and its carry erasure is free.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Iterator, Sequence

from ..revsim import Circuit

Wires = Sequence[int]


def _bits(value: int, width: int) -> list[int]:
    return [(value >> i) & 1 for i in range(width)]


def add(c: Circuit, src: Wires, dst: Wires, cin: int | None = None) -> None:
    """dst <- dst + src (+ cin) mod 2**len(dst). ``src`` is zero-extended."""
    src, dst = list(src), list(dst)
    m = len(dst)
    if len(src) > m:
        raise ValueError("source wider than destination")
    if m == 0:
        return
    pad = c.ancilla(m - len(src))
    a = src + pad
    carries = [cin] + c.ancilla(m - 1)
    # compute carries
    for i in range(m - 1):
        ci, nxt = carries[i], carries[i + 1]
        if ci is None:
            c.and_((a[i], dst[i]), nxt)
        else:
            c.cx(ci, a[i])
            c.cx(ci, dst[i])
            c.and_((a[i], dst[i]), nxt)
            c.cx(ci, nxt)
    # top sum bit
    c.cx(a[m - 1], dst[m - 1])
    if carries[m - 1] is not None:
        c.cx(carries[m - 1], dst[m - 1])
    # uncompute carries, leaving sum bits
    for i in reversed(range(m - 1)):
        ci, nxt = carries[i], carries[i + 1]
        if ci is None:
            c.unand((a[i], dst[i]), nxt)
            c.cx(a[i], dst[i])
        else:
            c.cx(ci, nxt)
            c.unand((a[i], dst[i]), nxt)
            c.cx(ci, a[i])
            c.cx(a[i], dst[i])
    c.release(carries[1:])
    c.release(pad)


def sub(c: Circuit, src: Wires, dst: Wires) -> None:
    """dst <- dst - src mod 2**len(dst), by complementing dst around an add."""
    for w in dst:
        c.x(w)
    add(c, src, dst)
    for w in dst:
        c.x(w)


def cadd(c: Circuit, ctrl: int, src: Wires, dst: Wires) -> None:
    """dst <- dst + ctrl*src."""
    tmp = c.ancilla(len(src))
    for s, t in zip(src, tmp):
        c.and_((ctrl, s), t)
    add(c, tmp, dst)
    for s, t in zip(src, tmp):
        c.unand((ctrl, s), t)
    c.release(tmp)


def csub(c: Circuit, ctrl: int, src: Wires, dst: Wires) -> None:
    for w in dst:
        c.x(w)
    cadd(c, ctrl, src, dst)
    for w in dst:
        c.x(w)


def add_const(c: Circuit, k: int, dst: Wires, ctrl: int | None = None) -> None:
    """dst <- dst + k (mod 2**len(dst)), optionally controlled."""
    dst = list(dst)
    m = len(dst)
    k %= 1 << m
    if k == 0:
        return
    tz = (k & -k).bit_length() - 1
    k >>= tz
    dst = dst[tz:]
    bits = _bits(k, len(dst))
    reg = c.ancilla(len(dst))
    for b, w in zip(bits, reg):
        if b:
            c.x(w) if ctrl is None else c.cx(ctrl, w)
    add(c, reg, dst)
    for b, w in zip(bits, reg):
        if b:
            c.x(w) if ctrl is None else c.cx(ctrl, w)
    c.release(reg)


def negate(c: Circuit, dst: Wires) -> None:
    """Two's-complement negation: flip every bit, then increment."""
    for w in dst:
        c.x(w)
    add_const(c, 1, dst)


def increment(c: Circuit, dst: Wires) -> None:
    add_const(c, 1, dst)


@contextmanager
def lt(c: Circuit, a: Wires, b: Wires) -> Iterator[int]:
    """Yield a wire holding [a < b].

    The flag is the carry out of ~a + b, computed without writing the sum.
    Inside the block only a[0] and b[0] hold their original values; no operand
    wire may be modified.
    """
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("comparator operands must have equal width")
    m = len(a)
    for w in a:
        c.x(w)
    carries: list[int | None] = [None] + c.ancilla(m)
    for i in range(m):
        ci, nxt = carries[i], carries[i + 1]
        if ci is not None:
            c.cx(ci, a[i])
            c.cx(ci, b[i])
        c.and_((a[i], b[i]), nxt)
        if ci is not None:
            c.cx(ci, nxt)
    c.x(a[0])
    try:
        yield carries[m]
    finally:
        c.x(a[0])
        for i in reversed(range(m)):
            ci, nxt = carries[i], carries[i + 1]
            if ci is not None:
                c.cx(ci, nxt)
            c.unand((a[i], b[i]), nxt)
            if ci is not None:
                c.cx(ci, b[i])
                c.cx(ci, a[i])
        c.release(carries[1:])
        for w in a:
            c.x(w)


@contextmanager
def xored(c: Circuit, a: Wires, b: Wires) -> Iterator[list[int]]:
    """Temporarily replace b by a XOR b (zero exactly when a == b)."""
    for s, t in zip(a, b):
        c.cx(s, t)
    try:
        yield list(b)
    finally:
        for s, t in zip(a, b):
            c.cx(s, t)


@contextmanager
def is_zero(c: Circuit, wires: Wires, extra: Sequence[int] = (), extra_pol: Sequence[int] = ()) -> Iterator[int]:
    """Yield a fresh wire holding [wires == 0 and extra == extra_pol]."""
    ctrls = tuple(wires) + tuple(extra)
    pol = (0,) * len(wires) + tuple(extra_pol)
    (t,) = c.ancilla(1)
    c.and_(ctrls, t, pol)
    try:
        yield t
    finally:
        c.unand(ctrls, t, pol)
        c.release([t])


@contextmanager
def eq(c: Circuit, a: Wires, b: Wires) -> Iterator[int]:
    """Yield a fresh wire holding [a == b]: CNOTs then one n-controlled AND."""
    with xored(c, a, b) as d, is_zero(c, d) as t:
        yield t


def copy(c: Circuit, src: Wires, dst: Wires, ctrl: int | None = None) -> None:
    for s, t in zip(src, dst):
        c.cx(s, t) if ctrl is None else c.tof(ctrl, s, t)


# -- standalone builders ---------------------------------------------------------


def build_adder(n: int) -> Circuit:
    """b <- a + b mod 2**n."""
    if n < 1:
        raise ValueError("n must be positive")
    c = Circuit(f"adder{n}")
    a = c.add_register("a", n)
    b = c.add_register("b", n)
    add(c, a.wires, b.wires)
    return c


def build_constant_adder(n: int, constant: int) -> Circuit:
    c = Circuit(f"const_adder{n}")
    b = c.add_register("b", n)
    add_const(c, constant, b.wires)
    return c


def build_comparator(n: int) -> Circuit:
    """flag ^= [a < b]."""
    c = Circuit(f"comparator{n}")
    a = c.add_register("a", n)
    b = c.add_register("b", n)
    f = c.add_register("flag", 1)
    with lt(c, a.wires, b.wires) as q:
        c.cx(q, f.wires[0])
    return c


def build_equality_check(n: int) -> Circuit:
    """flag ^= [a == b]."""
    c = Circuit(f"equality{n}")
    a = c.add_register("a", n)
    b = c.add_register("b", n)
    f = c.add_register("flag", 1)
    with xored(c, a.wires, b.wires) as d:
        c.mcx(d, f.wires[0], (0,) * n)
    return c


def build_negation(n: int) -> Circuit:
    c = Circuit(f"negation{n}")
    x = c.add_register("x", n)
    negate(c, x.wires)
    return c


def build_increment(n: int) -> Circuit:
    c = Circuit(f"increment{n}")
    x = c.add_register("x", n)
    increment(c, x.wires)
    return c
