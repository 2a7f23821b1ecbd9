"""Table lookup and measurement-based unlookup."""

from __future__ import annotations

from typing import Sequence

from ..revsim import Circuit
from .arith import Wires


def lookup(c: Circuit, address: Wires, target: Wires, table: Sequence[int]) -> None:
    """target ^= table[address]."""
    c.lookup(address, target, table)


def unlookup_split(w: int) -> int:
    """Address bits handled by the unary (controlled-SWAP) half of an unlookup."""
    return w // 2


def unlookup(c: Circuit, address: Wires, target: Wires, table: Sequence[int]) -> None:
    """Erase target == table[address].

    The target is measured out (X basis). The data-dependent phase it leaves is
    cleared by unary-encoding the low half of the address with controlled SWAPs
    and applying a phase lookup over the high half, so the table used for the
    fixup has about sqrt(len(table)) entries.
    """
    address = list(address)
    c.erase(address, target, table, method="measurement")
    w = len(address)
    if w == 0:
        return
    low = unlookup_split(w)
    unary = c.ancilla(1 << low)
    c.x(unary[0])
    for j in range(low):
        for k in range(1 << j):
            c.cswap(address[j], unary[k], unary[k + (1 << j)])
    c.phase_fixup(address[low:], unary, 1 << (w - low))
    for j in reversed(range(low)):
        for k in reversed(range(1 << j)):
            c.cswap(address[j], unary[k], unary[k + (1 << j)])
    c.x(unary[0])
    c.release(unary)


def build_lookup(w: int, m: int, table: Sequence[int]) -> Circuit:
    if len(table) != 1 << w:
        raise ValueError(f"table has {len(table)} entries, expected {1 << w}")
    c = Circuit(f"lookup{w}x{m}")
    addr = c.add_register("address", w)
    tgt = c.add_register("target", m)
    lookup(c, addr.wires, tgt.wires, table)
    return c


def build_unlookup(w: int, m: int, table: Sequence[int]) -> Circuit:
    """Erases ``target`` given it holds table[address]."""
    if len(table) != 1 << w:
        raise ValueError(f"table has {len(table)} entries, expected {1 << w}")
    c = Circuit(f"unlookup{w}x{m}")
    addr = c.add_register("address", w)
    tgt = c.add_register("target", m)
    unlookup(c, addr.wires, tgt.wires, table)
    return c


def build_lookup_roundtrip(w: int, m: int, table: Sequence[int]) -> Circuit:
    """Lookup into a fresh ancilla register followed by its unlookup."""
    if len(table) != 1 << w:
        raise ValueError(f"table has {len(table)} entries, expected {1 << w}")
    c = Circuit(f"lookup_roundtrip{w}x{m}")
    addr = c.add_register("address", w)
    tgt = c.ancilla(m)
    lookup(c, addr.wires, tgt, table)
    unlookup(c, addr.wires, tgt, table)
    c.release(tgt)
    return c
