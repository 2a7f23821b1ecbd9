"""Closed-form Toffoli and active-volume costs, composed up to a per-key total.

Everything is carried as exact Fractions; ``CostVector.rounded()`` converts to
integers only when a report is produced.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .revsim import GateStats

DEFAULT_TABLE = Path(__file__).parent / "data" / "cost_table.json"


@dataclass(frozen=True)
class CostVector:
    toffoli: Fraction = Fraction(0)
    active_volume_blocks: Fraction = Fraction(0)
    memory_qubits: Fraction = Fraction(0)
    reaction_depth: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("toffoli", "active_volume_blocks", "memory_qubits", "reaction_depth"):
            v = Fraction(getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)

    def __add__(self, other: "CostVector") -> "CostVector":
        return CostVector(
            self.toffoli + other.toffoli,
            self.active_volume_blocks + other.active_volume_blocks,
            self.memory_qubits + other.memory_qubits,
            self.reaction_depth + other.reaction_depth,
        )

    def scale(self, k) -> "CostVector":
        k = Fraction(k)
        return CostVector(self.toffoli * k, self.active_volume_blocks * k, self.memory_qubits * k, self.reaction_depth * k)

    __mul__ = scale
    __rmul__ = scale

    def then(self, other: "CostVector") -> "CostVector":
        """Sequential composition: gates and depth add, memory is the peak."""
        return CostVector(
            self.toffoli + other.toffoli,
            self.active_volume_blocks + other.active_volume_blocks,
            max(self.memory_qubits, other.memory_qubits),
            self.reaction_depth + other.reaction_depth,
        )

    def repeat(self, k) -> "CostVector":
        """k sequential runs reuse the same qubits."""
        return self.scale(k).with_memory(self.memory_qubits)

    def with_memory(self, memory) -> "CostVector":
        return CostVector(self.toffoli, self.active_volume_blocks, memory, self.reaction_depth)

    def rounded(self) -> dict[str, int]:
        return {
            "toffoli": round(self.toffoli),
            "active_volume_blocks": round(self.active_volume_blocks),
            "memory_qubits": round(self.memory_qubits),
            "reaction_depth": round(self.reaction_depth),
        }


ZERO = CostVector()


def _frac(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, (str, float)) else Fraction(v)


@dataclass
class CostTable:
    entries: dict[str, dict[str, list[Fraction]]]
    lookup: dict[str, Fraction]
    unlookup: dict[str, Fraction]
    montgomery_window_bits: int = 4
    lookup_window_bits: int = 16
    repetitions_per_key: int = 13
    logical_memory_qubits: int = 3000
    source: str = ""

    @classmethod
    def from_dict(cls, data: Mapping, source: str = "") -> "CostTable":
        entries = {
            name: {k: [_frac(c) for c in coeffs] for k, coeffs in entry.items()}
            for name, entry in data["entries"].items()
        }
        return cls(
            entries,
            {k: _frac(v) for k, v in data["lookup"].items()},
            {k: _frac(v) for k, v in data["unlookup"].items()},
            int(data.get("montgomery_window_bits", 4)),
            int(data.get("lookup_window_bits", 16)),
            int(data.get("repetitions_per_key", 13)),
            int(data.get("logical_memory_qubits", 3000)),
            source,
        )

    @classmethod
    def load(cls, path: str | Path | None = None) -> "CostTable":
        path = Path(path) if path else DEFAULT_TABLE
        return cls.from_dict(json.loads(path.read_text()), str(path))

    def base(self, name: str, n: int) -> CostVector:
        if name not in self.entries:
            raise KeyError(f"unknown base subroutine {name!r}")
        entry = self.entries[name]

        def poly(key):
            return sum((c * n**i for i, c in enumerate(entry.get(key, []))), Fraction(0))

        tof = poly("toffoli")
        return CostVector(tof, poly("active_volume"), poly("memory"), 2 * tof)


_TABLE: CostTable | None = None


def default_table() -> CostTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = CostTable.load()
    return _TABLE


def _sqrt_ceil(W: int) -> int:
    r = math.isqrt(W)
    return r if r * r == W else r + 1


def lookup_cost(W: int, m: int, table: CostTable | None = None) -> CostVector:
    """W-entry table lookup of m-bit values."""
    t = table or default_table()
    tof = t.lookup["toffoli_W"] * W
    av = t.lookup["active_volume_W"] * W + t.lookup["active_volume_Wm"] * W * m
    return CostVector(tof, av, m + math.ceil(math.log2(max(W, 2))), 2 * tof)


def unlookup_cost(W: int, m: int, table: CostTable | None = None) -> CostVector:
    t = table or default_table()
    s = _sqrt_ceil(W)
    tof = t.unlookup["toffoli_sqrtW"] * s
    av = t.unlookup["active_volume_sqrtW"] * s + t.unlookup["active_volume_m"] * m
    return CostVector(tof, av, m + s, 2 * tof)


# composite recipes: name -> list of (base or composite name, multiplicity)
RECIPES: dict[str, list[tuple[str, int]]] = {
    "mod_add": [("adder", 1), ("const_adder", 1), ("ctrl_const_adder", 1), ("comparator", 1)],
    "ctrl_mod_add": [("ctrl_adder", 1), ("const_adder", 1), ("ctrl_const_adder", 1), ("ctrl_comparator", 1)],
    "mod_neg": [("nctrl_toffoli", 1), ("ctrl_const_adder", 1)],
    "ctrl_mod_neg": [("nctrl_toffoli", 2), ("ctrl_const_adder", 1)],
    "mod_sub": [("const_adder", 2), ("mod_add", 1)],
    "ctrl_mod_sub": [("const_adder", 2), ("ctrl_mod_add", 1)],
    "mod_dbl": [("const_adder", 1), ("ctrl_const_adder", 1)],
    "kaliski_iteration": [
        ("nctrl_toffoli", 1), ("comparator", 1), ("ctrl_adder", 2), ("mod_dbl", 1), ("cswap", 5),
    ],
}

ALIASES = {
    "modadd": "mod_add", "cmodadd": "ctrl_mod_add", "modneg": "mod_neg", "cmodneg": "ctrl_mod_neg",
    "modsub": "mod_sub", "cmodsub": "ctrl_mod_sub", "moddbl": "mod_dbl", "modmul": "montgomery_mul",
    "mul": "montgomery_mul", "inversion": "kaliski", "ecpointadd": "ec_point_add",
}

CATALOG = tuple(sorted(
    set(RECIPES) | {"adder", "const_adder", "ctrl_const_adder", "comparator", "ctrl_comparator", "ctrl_adder",
                    "nctrl_toffoli", "cswap", "montgomery_mul_step", "montgomery_mul", "kaliski", "lookup",
                    "unlookup", "ec_point_add"}
))


def _resolve(name: str, variant: str | None) -> str:
    name = ALIASES.get(name, name)
    if variant in ("controlled", "ctrl"):
        if not name.startswith("ctrl_"):
            name = "ctrl_" + name
    elif variant not in (None, "", "plain", "dedicated"):
        raise ValueError(f"unknown variant {variant!r}")
    return name


def subroutine_cost(name: str, n: int, variant: str | None = None, table: CostTable | None = None) -> CostVector:
    """Formula-level cost of a named subroutine at register width n."""
    t = table or default_table()
    key = _resolve(name, variant)
    if key in t.entries:
        return t.base(key, n)
    if key in RECIPES:
        total = ZERO
        for part, mult in RECIPES[key]:
            total = total.then(subroutine_cost(part, n, table=t).repeat(mult))
        return total
    if key == "montgomery_mul_step":
        W = 1 << t.montgomery_window_bits
        return (
            t.base("ctrl_adder", n).repeat(t.montgomery_window_bits)
            .then(t.base("adder", n))
            .then(lookup_cost(W, n, t))
            .then(unlookup_cost(W, n, t))
        )
    if key == "montgomery_mul":
        steps = Fraction(n, t.montgomery_window_bits)
        return subroutine_cost("montgomery_mul_step", n, table=t).repeat(steps).then(t.base("const_adder", n).repeat(2))
    if key == "kaliski":
        return subroutine_cost("kaliski_iteration", n, table=t).repeat(2 * n).then(t.base("const_adder", n).repeat(2))
    if key == "lookup":
        return lookup_cost(1 << t.lookup_window_bits, 3 * n, t)
    if key == "unlookup":
        return unlookup_cost(1 << t.lookup_window_bits, 3 * n, t)
    if key == "ec_point_add":
        return ec_point_add_cost(n, "dedicated", table=t)
    raise KeyError(f"unknown subroutine {name!r}; catalog: {', '.join(CATALOG)}")


# -- point addition ----------------------------------------------------------------

# (step, subroutine, count); "inversion" is resolved by the inversion mode.
EC_POINT_ADD_BREAKDOWN: tuple[tuple[str, str, int], ...] = (
    ("step1", "nctrl_toffoli", 6),
    ("step1", "mod_neg", 2),
    ("step2", "mod_sub", 1),
    ("step2", "ctrl_mod_sub", 1),
    ("step2", "inversion", 2),
    ("step2", "montgomery_mul", 2),
    ("step2", "nctrl_toffoli", 3),
    ("step3", "montgomery_mul", 4),
    ("step3", "ctrl_mod_sub", 2),
    ("step3", "ctrl_mod_add", 3),
    ("step4", "montgomery_mul", 2),
    ("step4", "nctrl_toffoli", 1),
    ("step5", "nctrl_toffoli", 3),
    ("step5", "inversion", 2),
    ("step5", "montgomery_mul", 2),
    ("step5", "ctrl_mod_neg", 1),
    ("step5", "mod_add", 1),
    ("step5", "ctrl_mod_sub", 1),
    ("step6", "nctrl_toffoli", 9),
    ("step6", "ctrl_mod_add", 1),
)


def parse_inversion_mode(mode: str | tuple) -> tuple[str, int]:
    """'dedicated' | 'shared(k)' | ('shared', k) -> (kind, k)."""
    if isinstance(mode, tuple):
        kind, k = mode
    elif mode == "dedicated":
        kind, k = "dedicated", 1
    elif mode.startswith("shared(") and mode.endswith(")"):
        kind, k = "shared", int(mode[7:-1])
    else:
        raise ValueError(f"unknown inversion mode {mode!r}")
    if kind not in ("dedicated", "shared") or k < 1:
        raise ValueError(f"bad inversion mode {mode!r}")
    return kind, int(k)


def inversion_cost(n: int, mode: str | tuple = "dedicated", table: CostTable | None = None) -> CostVector:
    """Per-instance cost of one inversion; shared(k) spreads one inversion over k
    instances at the price of (3k-3)/k extra multiplications each."""
    kind, k = parse_inversion_mode(mode)
    inv = subroutine_cost("kaliski", n, table=table)
    if kind == "dedicated":
        return inv
    mul = subroutine_cost("montgomery_mul", n, table=table)
    return mul.repeat(Fraction(3 * k - 3, k)).then(inv.repeat(Fraction(1, k)))


def ec_point_add_breakdown(n: int, inversion_mode: str | tuple = "dedicated", table: CostTable | None = None):
    rows = []
    for step, name, count in EC_POINT_ADD_BREAKDOWN:
        unit = inversion_cost(n, inversion_mode, table) if name == "inversion" else subroutine_cost(name, n, table=table)
        rows.append((step, name, count, unit.repeat(count)))
    return rows


def ec_point_add_cost(n: int, inversion_mode: str | tuple = "dedicated", table: CostTable | None = None) -> CostVector:
    if n < 8:
        raise ValueError("point-addition costs are defined for n >= 8")
    total = ZERO
    for _, _, _, cost in ec_point_add_breakdown(n, inversion_mode, table):
        total = total.then(cost)
    # a, b, lam_r, x, y plus the named ancillas (5n+5)
    return total.with_memory(5 * n + 5 * n + 5)


# -- per key ------------------------------------------------------------------------

PUBLISHED_TOFFOLI = (44_000_000, 65_000_000)
PUBLISHED_BLOCKS = (2_800_000_000, 3_800_000_000)


def per_key_cost(n: int = 256, k: int = 1, mode: str = "computed", table: CostTable | None = None) -> CostVector:
    """Cost per key for k parallel instances (before any logical-error allowance).

    ``published`` mode returns (44k+65)e6/k Toffoli and (2.8k+3.8)e9/k blocks;
    ``computed`` mode composes repetitions x (lookup + point addition + unlookup).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    t = table or default_table()
    if mode == "published":
        tof = Fraction(PUBLISHED_TOFFOLI[0] * k + PUBLISHED_TOFFOLI[1], k)
        av = Fraction(PUBLISHED_BLOCKS[0] * k + PUBLISHED_BLOCKS[1], k)
        return CostVector(tof, av, t.logical_memory_qubits, 2 * tof)
    if mode != "computed":
        raise ValueError(f"unknown mode {mode!r}")
    W = 1 << t.lookup_window_bits
    inv_mode = ("shared", k) if k > 1 else "dedicated"
    step = lookup_cost(W, 3 * n, t).then(ec_point_add_cost(n, inv_mode, t)).then(unlookup_cost(W, 3 * n, t))
    return step.repeat(t.repetitions_per_key).with_memory(t.logical_memory_qubits)


def per_key_asymptote(mode: str = "published", n: int = 256, table: CostTable | None = None) -> CostVector:
    """k -> infinity limit of :func:`per_key_cost`."""
    t = table or default_table()
    if mode == "published":
        return CostVector(PUBLISHED_TOFFOLI[0], PUBLISHED_BLOCKS[0], t.logical_memory_qubits, 2 * PUBLISHED_TOFFOLI[0])
    W = 1 << t.lookup_window_bits
    inv = subroutine_cost("montgomery_mul", n, table=t).repeat(3)
    total = ZERO
    for _, name, count in EC_POINT_ADD_BREAKDOWN:
        unit = inv if name == "inversion" else subroutine_cost(name, n, table=t)
        total = total.then(unit.repeat(count))
    step = lookup_cost(W, 3 * n, t).then(total).then(unlookup_cost(W, 3 * n, t))
    return step.repeat(t.repetitions_per_key).with_memory(t.logical_memory_qubits)


# -- cross-checks ----------------------------------------------------------------------


@dataclass
class CrosscheckReport:
    subroutine: str
    tally: int
    formula: Fraction
    band: tuple[float, float] = (0.75, 1.0)
    ok: bool = field(init=False)
    reason: str = field(init=False, default="")

    def __post_init__(self):
        lo, hi = self.band
        if self.tally > self.formula:
            self.ok, self.reason = False, f"{self.subroutine}: tally {self.tally} exceeds formula {self.formula}"
        elif self.formula == 0:
            self.ok = self.tally == 0
        else:
            r = Fraction(self.tally) / self.formula
            self.ok = Fraction(lo).limit_denominator() <= r <= Fraction(hi).limit_denominator()
            if not self.ok:
                self.reason = f"{self.subroutine}: tally/formula = {float(r):.3f} outside [{lo}, {hi}]"

    @property
    def ratio(self) -> float:
        return float(Fraction(self.tally) / self.formula) if self.formula else 1.0


def crosscheck(subroutine: str, stats: GateStats | int, formula: CostVector | Fraction | int,
               band: tuple[float, float] = (0.75, 1.0)) -> CrosscheckReport:
    """Gate-level Toffoli tally against the closed form: tally <= formula, within band."""
    tally = stats.toffoli_count if isinstance(stats, GateStats) else int(stats)
    f = formula.toffoli if isinstance(formula, CostVector) else Fraction(formula)
    return CrosscheckReport(subroutine, tally, f, band)
