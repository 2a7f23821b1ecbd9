"""Reversible-gate IR, ancilla management and a bit-sliced basis-state simulator.

Wires are integer ids. A simulation run keeps one Python int per wire whose bit
``s`` is the value of that wire in sample ``s``, so a single pass over the gate
list evaluates a whole batch of basis-state inputs.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "Gate",
    "Register",
    "Circuit",
    "GateStats",
    "SimulationError",
    "ReversibilityReport",
    "simulate",
    "simulate_batch",
    "check_reversibility",
    "count_stats",
    "dump_circuit",
    "load_circuit",
]

# Gate kinds.
X, CX, TOF, MCX, SWAP, CSWAP = "X", "CX", "TOF", "MCX", "SWAP", "CSWAP"
AND, UNAND = "AND", "UNAND"
LOOKUP, ERASE, PHASE = "LOOKUP", "ERASE", "PHASE"
ZERO = "ZERO"

_SELF_INVERSE = {X, CX, TOF, MCX, SWAP, CSWAP, PHASE, ZERO}
REGISTER_KINDS = ("input", "ancilla", "garbage", "output", "constant")


class SimulationError(RuntimeError):
    """A gate precondition failed during simulation (a construction bug)."""


@dataclass(frozen=True, slots=True)
class Gate:
    """One gate.

    ``wires`` holds controls first and the target(s) last. For AND/UNAND/MCX the
    ``polarity`` tuple gives the control values that activate the gate. For
    LOOKUP/ERASE/PHASE the first ``split`` wires are the address and the rest the
    target, with ``table`` holding 2**split integers. A LOOKUP with method
    "fresh" requires a zero target; it is what reversing a measured erasure gives.
    """

    kind: str
    wires: tuple[int, ...]
    polarity: tuple[int, ...] | None = None
    table: tuple[int, ...] | None = None
    split: int = 0
    method: str = ""

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in (LOOKUP, ERASE, PHASE):
            return self.wires[: self.split]
        if self.kind in (SWAP, ZERO):
            return ()
        if self.kind == CSWAP:
            return self.wires[:1]
        return self.wires[:-1]

    def inverse(self) -> "Gate":
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind == AND:
            return Gate(UNAND, self.wires, self.polarity)
        if self.kind == UNAND:
            return Gate(AND, self.wires, self.polarity)
        if self.kind == LOOKUP:
            if self.method == "fresh":
                return Gate(ERASE, self.wires, table=self.table, split=self.split, method="measurement")
            return self
        if self.kind == ERASE:
            # undoing a measured erasure recomputes the value into a zeroed target
            method = "fresh" if self.method == "measurement" else ""
            return Gate(LOOKUP, self.wires, table=self.table, split=self.split, method=method)
        raise ValueError(f"{self.kind} ({self.method}) has no inverse")


@dataclass
class Register:
    name: str
    wires: list[int]
    kind: str = "input"
    provenance: str = ""

    @property
    def width(self) -> int:
        return len(self.wires)


class Circuit:
    """Ordered gate list over named registers plus a pool of clean ancillas."""

    def __init__(self, name: str = ""):
        self.name = name
        self.gates: list[Gate] = []
        self.registers: dict[str, Register] = {}
        self.num_wires = 0
        self.labels: list[tuple[str, int, int]] = []
        self.meta: dict = {}
        self._free: list[int] = []
        self._pool: set[int] = set()
        self._owner: dict[int, str] = {}
        self._label_stack: list[tuple[str, int]] = []
        self._counter = itertools.count()

    # -- registers -----------------------------------------------------------

    def _new_wires(self, k: int) -> list[int]:
        wires = list(range(self.num_wires, self.num_wires + k))
        self.num_wires += k
        return wires

    def add_register(self, name: str, width: int, kind: str = "input", provenance: str = "") -> Register:
        if name in self.registers:
            raise ValueError(f"register {name!r} already exists")
        if kind not in REGISTER_KINDS:
            raise ValueError(f"unknown register kind {kind!r}")
        reg = Register(name, self._new_wires(width), kind, provenance)
        self.registers[name] = reg
        for w in reg.wires:
            self._owner[w] = name
        return reg

    def ancilla(self, k: int) -> list[int]:
        """Borrow ``k`` wires guaranteed to be 0."""
        out = []
        while self._free and len(out) < k:
            out.append(self._free.pop())
        out.extend(self._new_wires(k - len(out)))
        self._pool.update(out)
        return out

    def release(self, wires: Iterable[int], check: bool = True) -> None:
        """Return wires to the pool; the simulator asserts they are 0."""
        wires = list(wires)
        for w in wires:
            if w in self._owner:
                self.registers.pop(self._owner.pop(w), None)
            self._pool.add(w)
        if check and wires:
            self.gates.append(Gate(ZERO, tuple(wires)))
        self._free.extend(reversed(wires))

    def claim(self, wires: Sequence[int], name: str, kind: str, provenance: str = "") -> Register:
        """Move pool wires into a named register (output or garbage)."""
        if name in self.registers:
            name = f"{name}_{next(self._counter)}"
        for w in wires:
            if w not in self._pool or w in self._owner:
                raise ValueError(f"wire {w} is not an unclaimed ancilla")
        reg = Register(name, list(wires), kind, provenance)
        self.registers[name] = reg
        for w in wires:
            self._owner[w] = name
        return reg

    def unclaim(self, name: str) -> list[int]:
        """Drop a named register back into the (dirty-until-released) pool."""
        reg = self.registers.pop(name)
        for w in reg.wires:
            del self._owner[w]
        return reg.wires

    def ancilla_wires(self) -> list[int]:
        """Pool wires not owned by any named register."""
        return sorted(w for w in self._pool if w not in self._owner)

    def garbage_wires(self) -> list[int]:
        return [w for r in self.registers.values() if r.kind == "garbage" for w in r.wires]

    # -- gates ---------------------------------------------------------------

    def append(self, gate: Gate) -> None:
        self.gates.append(gate)

    def x(self, t: int) -> None:
        self.gates.append(Gate(X, (t,)))

    def cx(self, c: int, t: int) -> None:
        self.gates.append(Gate(CX, (c, t)))

    def tof(self, c1: int, c2: int, t: int) -> None:
        self.gates.append(Gate(TOF, (c1, c2, t)))

    def mcx(self, controls: Sequence[int], t: int, polarity: Sequence[int] | None = None) -> None:
        controls = tuple(controls)
        pol = tuple(polarity) if polarity is not None else (1,) * len(controls)
        if len(pol) != len(controls):
            raise ValueError("polarity length must match controls")
        self.gates.append(Gate(MCX, controls + (t,), pol))

    def swap(self, a: int, b: int) -> None:
        self.gates.append(Gate(SWAP, (a, b)))

    def cswap(self, c: int, a: int, b: int) -> None:
        self.gates.append(Gate(CSWAP, (c, a, b)))

    def and_(self, controls: Sequence[int], t: int, polarity: Sequence[int] | None = None) -> None:
        controls = tuple(controls)
        pol = tuple(polarity) if polarity is not None else (1,) * len(controls)
        self.gates.append(Gate(AND, controls + (t,), pol))

    def unand(self, controls: Sequence[int], t: int, polarity: Sequence[int] | None = None) -> None:
        controls = tuple(controls)
        pol = tuple(polarity) if polarity is not None else (1,) * len(controls)
        self.gates.append(Gate(UNAND, controls + (t,), pol))

    def lookup(self, address: Sequence[int], target: Sequence[int], table: Sequence[int]) -> None:
        _check_table(address, target, table)
        self.gates.append(Gate(LOOKUP, tuple(address) + tuple(target), table=tuple(table), split=len(address)))

    def erase(self, address: Sequence[int], target: Sequence[int], table: Sequence[int], method: str = "measurement") -> None:
        if method not in ("measurement", "unlookup"):
            raise ValueError(f"unknown erase method {method!r}")
        _check_table(address, target, table)
        self.gates.append(
            Gate(ERASE, tuple(address) + tuple(target), table=tuple(table), split=len(address), method=method)
        )

    def phase_fixup(self, address: Sequence[int], target: Sequence[int], table_size: int) -> None:
        """Phase-only lookup (no effect on basis states; kept for cost accounting)."""
        self.gates.append(
            Gate(PHASE, tuple(address) + tuple(target), table=(0,) * table_size, split=len(address))
        )

    # -- structure -----------------------------------------------------------

    def mark(self) -> int:
        return len(self.gates)

    def uncompute(self, start: int, stop: int | None = None) -> None:
        """Append the inverse of gates[start:stop]."""
        stop = len(self.gates) if stop is None else stop
        self.gates.extend(g.inverse() for g in reversed(self.gates[start:stop]))

    @contextmanager
    def section(self, label: str) -> Iterator[None]:
        start = len(self.gates)
        self._label_stack.append((label, start))
        try:
            yield
        finally:
            self._label_stack.pop()
            self.labels.append((label, start, len(self.gates)))

    def inverse(self) -> "Circuit":
        inv = Circuit(f"{self.name}^-1")
        inv.registers = {k: Register(r.name, list(r.wires), r.kind, r.provenance) for k, r in self.registers.items()}
        inv.num_wires = self.num_wires
        inv._pool = set(self._pool)
        inv._owner = dict(self._owner)
        inv.gates = [g.inverse() for g in reversed(self.gates)]
        n = len(self.gates)
        inv.labels = [(lab, n - stop, n - start) for lab, start, stop in self.labels]
        return inv

    def then(self, other: "Circuit") -> "Circuit":
        """Concatenate two circuits that share a wire numbering."""
        out = Circuit(f"{self.name};{other.name}")
        out.registers = dict(self.registers)
        out.registers.update(other.registers)
        out.num_wires = max(self.num_wires, other.num_wires)
        out._pool = self._pool | other._pool
        out._owner = {**self._owner, **other._owner}
        out.gates = self.gates + other.gates
        n = len(self.gates)
        out.labels = self.labels + [(lab, s + n, e + n) for lab, s, e in other.labels]
        return out

    def structure(self) -> list[Gate]:
        return list(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __repr__(self) -> str:
        regs = ", ".join(f"{r.name}[{r.width}]:{r.kind}" for r in self.registers.values())
        return f"Circuit({self.name!r}, {len(self.gates)} gates, {self.num_wires} wires; {regs})"


def _check_table(address: Sequence[int], target: Sequence[int], table: Sequence[int]) -> None:
    if len(table) != 1 << len(address):
        raise ValueError(f"table has {len(table)} entries, expected {1 << len(address)}")
    limit = 1 << len(target)
    if any(not 0 <= v < limit for v in table):
        raise ValueError(f"table entry does not fit in {len(target)} bits")


# -- simulation ---------------------------------------------------------------


def _pack(values: Sequence[int], width: int) -> list[int]:
    """Transpose integers into per-bit sample masks (bit s of mask j = bit j of values[s])."""
    if not len(values):
        return [0] * width
    if width <= 62 and all(0 <= v < (1 << 62) for v in values):
        arr = np.asarray(values, dtype=np.uint64)
        out = []
        for j in range(width):
            bits = ((arr >> np.uint64(j)) & np.uint64(1)).astype(np.uint8)
            out.append(int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little"))
        return out
    out = []
    for j in range(width):
        m = 0
        for s, v in enumerate(values):
            if (v >> j) & 1:
                m |= 1 << s
        out.append(m)
    return out


def _unpack(masks: Sequence[int], batch: int) -> list[int]:
    if not masks:
        return [0] * batch
    if len(masks) <= 62:
        nbytes = (batch + 7) // 8
        acc = np.zeros(batch, dtype=np.uint64)
        for j, m in enumerate(masks):
            if m:
                bits = np.unpackbits(np.frombuffer(m.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
                acc |= bits[:batch].astype(np.uint64) << np.uint64(j)
        return [int(v) for v in acc]
    return [sum(((m >> s) & 1) << j for j, m in enumerate(masks)) for s in range(batch)]


def _address_masks(state: list[int], address: Sequence[int], full: int) -> list[int]:
    """Mask of samples selecting each table index."""
    masks = [full]
    for w in address:
        hi = state[w]
        lo = ~hi & full
        masks = [m & lo for m in masks] + [m & hi for m in masks]
    return masks


def _first_bad(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _run(circuit: Circuit, state: list[int], full: int) -> None:
    for gi, g in enumerate(circuit.gates):
        k, w = g.kind, g.wires
        if k == CX:
            state[w[1]] ^= state[w[0]]
        elif k == TOF:
            state[w[2]] ^= state[w[0]] & state[w[1]]
        elif k == X:
            state[w[0]] ^= full
        elif k == AND or k == UNAND or k == MCX:
            acc = full
            for c, pol in zip(w[:-1], g.polarity):
                acc &= state[c] if pol else ~state[c]
            acc &= full
            t = w[-1]
            if k == MCX:
                state[t] ^= acc
            elif k == AND:
                if state[t]:
                    raise SimulationError(
                        f"gate {gi}: AND target wire {t} not fresh (sample {_first_bad(state[t])})"
                    )
                state[t] = acc
            else:
                bad = state[t] ^ acc
                if bad:
                    raise SimulationError(
                        f"gate {gi}: measured AND uncompute on wire {t} does not match controls "
                        f"(sample {_first_bad(bad)})"
                    )
                state[t] = 0
        elif k == SWAP:
            a, b = w
            state[a], state[b] = state[b], state[a]
        elif k == CSWAP:
            c, a, b = w
            d = (state[a] ^ state[b]) & state[c]
            state[a] ^= d
            state[b] ^= d
        elif k == ZERO:
            for t in w:
                if state[t]:
                    raise SimulationError(
                        f"gate {gi}: released ancilla wire {t} is not 0 (sample {_first_bad(state[t])})"
                    )
        elif k == LOOKUP or k == ERASE:
            addr, tgt = w[: g.split], w[g.split :]
            masks = _address_masks(state, addr, full)
            expect = [0] * len(tgt)
            for m, val in zip(masks, g.table):
                if not m or not val:
                    continue
                j = 0
                while val:
                    if val & 1:
                        expect[j] ^= m
                    val >>= 1
                    j += 1
            if k == LOOKUP and g.method == "fresh":
                for t in tgt:
                    if state[t]:
                        raise SimulationError(
                            f"gate {gi}: fresh lookup target wire {t} is not 0 (sample {_first_bad(state[t])})"
                        )
            if k == ERASE and g.method == "measurement":
                for j, t in enumerate(tgt):
                    bad = state[t] ^ expect[j]
                    if bad:
                        raise SimulationError(
                            f"gate {gi}: lookup erase found target wire {t} != table value "
                            f"(sample {_first_bad(bad)})"
                        )
                    state[t] = 0
            else:
                for j, t in enumerate(tgt):
                    state[t] ^= expect[j]
        elif k == PHASE:
            pass
        else:
            raise SimulationError(f"unknown gate kind {k}")


def _resolve_inputs(circuit: Circuit, inputs: Mapping[str, object]) -> None:
    for name in inputs:
        if name not in circuit.registers:
            raise KeyError(f"no register named {name!r}")
    for reg in circuit.registers.values():
        if reg.kind in ("input", "constant") and reg.name not in inputs:
            raise SimulationError(f"input register {reg.name!r} is unassigned")


def simulate_batch(
    circuit: Circuit, inputs: Mapping[str, Sequence[int]], outputs: Iterable[str] | None = None
) -> dict[str, list[int]]:
    """Run a batch of basis-state inputs at once.

    Every input/constant register must be assigned; all other wires start at 0.
    Returns final values for ``outputs`` (default: every register).
    """
    _resolve_inputs(circuit, inputs)
    lengths = {len(v) for v in inputs.values()}
    if len(lengths) > 1:
        raise ValueError("all input batches must have the same length")
    batch = lengths.pop() if lengths else 1
    full = (1 << batch) - 1
    state = [0] * circuit.num_wires
    for name, vals in inputs.items():
        reg = circuit.registers[name]
        limit = 1 << reg.width
        if any(not 0 <= v < limit for v in vals):
            raise ValueError(f"value out of range for register {name!r}")
        for wire, mask in zip(reg.wires, _pack(vals, reg.width)):
            state[wire] = mask
    _run(circuit, state, full)
    names = list(circuit.registers) if outputs is None else list(outputs)
    result = {}
    for name in names:
        reg = circuit.registers[name]
        result[name] = _unpack([state[w] for w in reg.wires], batch)
    result["__ancilla_dirty__"] = [0] * batch
    dirty = 0
    for w in circuit.ancilla_wires():
        dirty |= state[w]
    if dirty:
        result["__ancilla_dirty__"] = [(dirty >> s) & 1 for s in range(batch)]
    return result


def simulate(circuit: Circuit, initial: Mapping[str, int]) -> dict[str, int]:
    """Single basis-state run; returns the final value of every register."""
    out = simulate_batch(circuit, {k: [v] for k, v in initial.items()})
    return {k: v[0] for k, v in out.items() if not k.startswith("__")}


# -- reversibility ---------------------------------------------------------------


@dataclass
class ReversibilityReport:
    ok: bool
    exhaustive: bool
    samples: int
    counterexample: dict[str, int] | None = None
    reason: str = ""


def _input_regs(circuit: Circuit) -> list[Register]:
    return [r for r in circuit.registers.values() if r.kind in ("input", "constant")]


def check_reversibility(
    circuit: Circuit,
    width_limit: int = 22,
    samples: int = 4096,
    seed: int = 0,
    domains: Mapping[str, Sequence[int]] | None = None,
) -> ReversibilityReport:
    """Run the circuit then its inverse; require identity and clean ancillas.

    ``domains`` restricts input registers to listed values (modular circuits are
    only defined on reduced inputs). Inputs are exhaustive when the search space
    has at most 2**width_limit points, otherwise ``samples`` seeded draws.
    """
    regs = _input_regs(circuit)
    domains = dict(domains or {})
    spaces = [list(domains.get(r.name, range(1 << r.width))) for r in regs]
    size = 1
    for sp in spaces:
        size *= len(sp)
    exhaustive = size <= (1 << width_limit)
    if exhaustive:
        rows = list(itertools.product(*spaces))
    else:
        rng = random.Random(seed)
        rows = [tuple(rng.choice(sp) for sp in spaces) for _ in range(samples)]
    batch: dict[str, list[int]] = {r.name: [row[i] for row in rows] for i, r in enumerate(regs)}
    values = rows

    def fail(idx: int, reason: str) -> ReversibilityReport:
        return ReversibilityReport(False, exhaustive, len(values), {k: v[idx] for k, v in batch.items()}, reason)

    fwd = simulate_batch(circuit, batch)
    for i, d in enumerate(fwd["__ancilla_dirty__"]):
        if d:
            return fail(i, "ancilla not returned to 0")
    try:
        roundtrip = circuit.then(circuit.inverse())
    except ValueError as exc:
        return ReversibilityReport(False, exhaustive, len(values), None, str(exc))
    back = simulate_batch(roundtrip, batch)
    for name, vals in batch.items():
        for i, (a, b) in enumerate(zip(vals, back[name])):
            if a != b:
                return fail(i, f"register {name} not restored")
    for reg in circuit.registers.values():
        if reg.kind in ("input", "constant"):
            continue
        for i, v in enumerate(back[reg.name]):
            if v:
                return fail(i, f"register {reg.name} not restored to 0")
    return ReversibilityReport(True, exhaustive, len(values))


# -- statistics ----------------------------------------------------------------


@dataclass
class GateStats:
    """Gate tallies under measurement-based-uncomputation accounting.

    AND with k controls counts k-1 Toffolis and its measured uncompute counts 0.
    MCX with k controls counts k-1. A lookup over W entries counts W-1.
    ``controlled_units`` maps unit size to the number of n-controlled-Toffoli
    units (single MCX/AND gates with n controls or labeled groups of n Toffolis).
    """

    toffoli_count: int = 0
    and_count: int = 0
    lookup_unit_count: int = 0
    swap_count: int = 0
    cswap_count: int = 0
    reaction_depth_estimate: int = 0
    gate_count: int = 0
    controlled_units: Counter = field(default_factory=Counter)

    def __add__(self, other: "GateStats") -> "GateStats":
        return GateStats(
            self.toffoli_count + other.toffoli_count,
            self.and_count + other.and_count,
            self.lookup_unit_count + other.lookup_unit_count,
            self.swap_count + other.swap_count,
            self.cswap_count + other.cswap_count,
            self.reaction_depth_estimate + other.reaction_depth_estimate,
            self.gate_count + other.gate_count,
            self.controlled_units + other.controlled_units,
        )

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "toffoli_count", "and_count", "lookup_unit_count", "swap_count",
            "cswap_count", "reaction_depth_estimate", "gate_count")}
        d["controlled_units"] = dict(sorted(self.controlled_units.items()))
        return d


def _gate_toffolis(g: Gate) -> int:
    k = g.kind
    if k == TOF or k == CSWAP:
        return 1
    if k in (AND, MCX):
        return max(len(g.wires) - 2, 0)
    if k == LOOKUP or (k == ERASE and g.method == "unlookup") or k == PHASE:
        return len(g.table) - 1
    return 0


def count_stats(
    circuit: Circuit | Sequence[Gate], exact_depth: bool = False, group_label: str = "toffoli_group"
) -> GateStats:
    """Tally gates. Reaction depth is 2x the Toffoli count unless ``exact_depth``
    asks for the longest chain of Toffoli-class gates through shared wires."""
    gates = circuit.gates if isinstance(circuit, Circuit) else list(circuit)
    st = GateStats()
    for g in gates:
        k = g.kind
        if k == ZERO:
            continue
        st.gate_count += 1
        st.toffoli_count += _gate_toffolis(g)
        if k == AND:
            st.and_count += 1
        elif k == SWAP:
            st.swap_count += 1
        elif k == CSWAP:
            st.cswap_count += 1
        elif k == LOOKUP or (k == ERASE and g.method == "unlookup") or k == PHASE:
            st.lookup_unit_count += len(g.table)
        if k in (AND, MCX) and len(g.wires) - 1 > 2:
            st.controlled_units[len(g.wires) - 1] += 1
    if isinstance(circuit, Circuit):
        for label, start, stop in circuit.labels:
            if label == group_label:
                st.controlled_units[stop - start] += 1
    if exact_depth:
        depth = [0] * (max((max(g.wires) for g in gates if g.wires), default=-1) + 1)
        longest = 0
        for g in gates:
            if not g.wires or g.kind == ZERO:
                continue
            step = 1 if g.kind in (AND, UNAND, TOF, MCX, CSWAP, LOOKUP, ERASE) else 0
            d = max(depth[w] for w in g.wires) + step
            for w in g.wires:
                depth[w] = d
            longest = max(longest, d)
        st.reaction_depth_estimate = longest
    else:
        st.reaction_depth_estimate = 2 * st.toffoli_count
    return st


def stats_by_label(circuit: Circuit) -> dict[str, GateStats]:
    out: dict[str, GateStats] = {}
    for label, start, stop in circuit.labels:
        out.setdefault(label, GateStats())
        out[label] = out[label] + count_stats(circuit.gates[start:stop])
    return out


# -- text dump -------------------------------------------------------------------


def _wire_list(ws: Sequence[int]) -> str:
    return ",".join(map(str, ws)) if ws else "-"


def _parse_wires(tok: str) -> tuple[int, ...]:
    return () if tok == "-" else tuple(int(t) for t in tok.split(","))


def dump_circuit(circuit: Circuit, path: str | Path) -> None:
    """One gate per line. Lookup tables go to sibling files ``<stem>.tableN.bin``
    holding little-endian fixed-width rows."""
    path = Path(path)
    lines = [f"# circuit {circuit.name}", f"WIRES {circuit.num_wires}"]
    for r in circuit.registers.values():
        lines.append(f"REG {r.name} {r.kind} {_wire_list(r.wires)} {r.provenance or '-'}")
    n_tables = 0
    for g in circuit.gates:
        k, w = g.kind, g.wires
        if k in (X, CX, TOF, SWAP, CSWAP, ZERO):
            lines.append(f"{k} " + " ".join(map(str, w)))
        elif k in (MCX, AND, UNAND):
            pol = "".join(map(str, g.polarity))
            lines.append(f"{k} {_wire_list(w[:-1])} {pol or '-'} {w[-1]}")
        else:
            addr, tgt = w[: g.split], w[g.split :]
            if k == PHASE:
                lines.append(f"PHASE {_wire_list(addr)} {_wire_list(tgt)} {len(g.table)}")
                continue
            tname = f"{path.stem}.table{n_tables}.bin"
            n_tables += 1
            write_table(path.parent / tname, g.table, len(tgt))
            op = f"{k}:{g.method}" if g.method else k
            lines.append(f"{op} {_wire_list(addr)} {_wire_list(tgt)} {tname}")
    path.write_text("\n".join(lines) + "\n")


def load_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    circ = Circuit()
    for raw in path.read_text().splitlines():
        if not raw or raw.startswith("#"):
            continue
        tok = raw.split()
        op = tok[0]
        if op == "WIRES":
            circ.num_wires = int(tok[1])
        elif op == "REG":
            wires = list(_parse_wires(tok[3]))
            circ.registers[tok[1]] = Register(tok[1], wires, tok[2], "" if tok[4] == "-" else tok[4])
            for w in wires:
                circ._owner[w] = tok[1]
        elif op in (X, CX, TOF, SWAP, CSWAP, ZERO):
            circ.gates.append(Gate(op, tuple(int(t) for t in tok[1:])))
        elif op in (MCX, AND, UNAND):
            ctrls = _parse_wires(tok[1])
            pol = () if tok[2] == "-" else tuple(int(c) for c in tok[2])
            circ.gates.append(Gate(op, ctrls + (int(tok[3]),), pol))
        elif op == "PHASE":
            addr, tgt = _parse_wires(tok[1]), _parse_wires(tok[2])
            circ.gates.append(Gate(PHASE, addr + tgt, table=(0,) * int(tok[3]), split=len(addr)))
        else:
            kind, _, method = op.partition(":")
            addr, tgt = _parse_wires(tok[1]), _parse_wires(tok[2])
            table = read_table(path.parent / tok[3], len(tgt))
            circ.gates.append(Gate(kind, addr + tgt, table=tuple(table), split=len(addr), method=method))
    owned = set(circ._owner)
    circ._pool = {w for w in range(circ.num_wires) if w not in owned}
    return circ


def write_table(path: str | Path, table: Sequence[int], bits: int) -> None:
    """Binary table file: fixed-width little-endian rows of ceil(bits/8) bytes."""
    width = max((bits + 7) // 8, 1)
    with open(path, "wb") as fh:
        for v in table:
            fh.write(int(v).to_bytes(width, "little"))


def read_table(path: str | Path, bits: int) -> list[int]:
    width = max((bits + 7) // 8, 1)
    data = Path(path).read_bytes()
    if len(data) % width:
        raise ValueError(f"table file {path} is not a whole number of {width}-byte rows")
    return [int.from_bytes(data[i : i + width], "little") for i in range(0, len(data), width)]
