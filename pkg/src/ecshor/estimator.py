"""Physical resource estimates: code distance, footprint, time per key and reaction limits.

Two architectures are modeled. The baseline one executes one Toffoli per four
logical cycles on 2D-local hardware. The active-volume one executes one block
per workspace qubit per logical cycle. Hardware enters through the code cycle
t_C; photonic FBQC ties t_C to the delay length t_d and measures size as a
total resource-state-generator rate.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

from .costs import CostVector, per_key_cost

ARCHITECTURES = ("baseline", "active-volume")
HARDWARE_KINDS = ("superconducting", "ion", "fbqc")

CODE_CYCLE = {"superconducting": 1e-6, "ion": 1e-3}
DEFAULT_DELAYS = (1e-6, 1e-5, 1e-4, 1e-3)
DEFAULT_REACTION_TIME = 1e-5
PE_BLOCKS = 10  # phase-estimation repetitions charged against the failure budget
TOFFOLI_CYCLES = 4  # baseline logical cycles per Toffoli
OVERHEAD = Fraction(10, 9)  # average repetitions per key
NOT_MODELED = "depth-optimized adders, decoder throughput and delay-line loss are not modeled"


class EstimatorConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ArchSpec:
    kind: str = "active-volume"
    logical_memory_qubits: int = 3000
    instances: int = 1

    def __post_init__(self):
        if self.kind not in ARCHITECTURES:
            raise EstimatorConfigError(f"unknown architecture {self.kind!r}")
        if self.logical_memory_qubits <= 0 or self.instances < 1:
            raise EstimatorConfigError("memory qubits and instances must be positive")

    @property
    def memory_qubits(self) -> int:
        return self.logical_memory_qubits * self.instances

    @property
    def workspace_qubits(self) -> int:
        # equal allocation of memory and workspace
        return self.memory_qubits

    @property
    def total_logical_qubits(self) -> int:
        return 2 * self.memory_qubits


@dataclass(frozen=True)
class HardwareModel:
    kind: str
    code_cycle: float
    reaction_time: float = DEFAULT_REACTION_TIME

    def __post_init__(self):
        if self.kind not in HARDWARE_KINDS:
            raise EstimatorConfigError(f"unknown hardware {self.kind!r}")
        if not self.code_cycle > 0:
            raise EstimatorConfigError("code cycle must be positive")
        if self.reaction_time < 0:
            raise EstimatorConfigError("reaction time must be nonnegative")

    @property
    def delay(self) -> float | None:
        return self.code_cycle if self.kind == "fbqc" else None

    @classmethod
    def make(cls, kind: str, t_d: float | None = None, reaction_time: float = DEFAULT_REACTION_TIME):
        if kind == "fbqc":
            if t_d is None:
                raise EstimatorConfigError("fbqc needs a delay length t_d")
            return cls(kind, t_d, reaction_time)
        if kind not in CODE_CYCLE:
            raise EstimatorConfigError(f"unknown hardware {kind!r}")
        return cls(kind, t_d if t_d is not None else CODE_CYCLE[kind], reaction_time)


@dataclass
class EstimateReport:
    architecture: str
    hardware: str
    code_cycle: float
    instances: int
    code_distance: int
    logical_qubits: int
    spacetime_blocks_per_key: float
    failure_probability: float  # union bound at the phase-estimation budget
    failure_probability_exact: float
    logical_cycles_per_key: float
    time_per_key: float
    burst_time: float
    physical_qubits: float | None
    rsg_rate: float | None
    module_qubits: int | None
    reaction_floor: float
    reaction_limited: bool = False
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.reaction_limited = self.time_per_key < self.reaction_floor

    @property
    def flag(self) -> str:
        return "*" if self.reaction_limited else ""

    @property
    def fbqc_logical_qubits(self) -> float | None:
        """n_L = f_RSG t_d / d^2."""
        if self.rsg_rate is None:
            return None
        return self.rsg_rate * self.code_cycle / self.code_distance**2

    def as_dict(self) -> dict:
        d = asdict(self)
        d["flag"] = self.flag
        return d


# -- distance ---------------------------------------------------------------------------


def logical_error_rate(d: int) -> float:
    return 10.0 ** (-d / 2)


def failure_probability(blocks, d: int) -> tuple[float, float]:
    """(union bound, 1-(1-p_L)^blocks) for a given number of blocks."""
    p = logical_error_rate(d)
    union = float(blocks) * p
    exact = -math.expm1(float(blocks) * math.log1p(-p))
    return union, exact


def select_distance(total_blocks, target_failure: float = 0.5) -> int:
    """Smallest even d with blocks * 10^(-d/2) below the target."""
    if not total_blocks > 0:
        raise EstimatorConfigError("block count must be positive")
    if not 0 < target_failure <= 1:
        raise EstimatorConfigError("target failure must lie in (0, 1]")
    d = 2
    while float(total_blocks) * logical_error_rate(d) >= target_failure:
        d += 2
    return d


def _distance(blocks_per_key, distance: int | None, threshold: str) -> int:
    if distance is not None:
        if distance < 2 or distance % 2:
            raise EstimatorConfigError("distance must be even and at least 2")
        return distance
    d = select_distance(Fraction(blocks_per_key) * PE_BLOCKS)
    if threshold == "50%":
        d *= 2
    elif threshold != "10%":
        raise EstimatorConfigError(f"threshold must be '10%' or '50%', got {threshold!r}")
    return d


# -- reaction limit ---------------------------------------------------------------------


def reaction_limit(per_key: CostVector, k: int = 1, reaction_time: float = DEFAULT_REACTION_TIME) -> float:
    """Minimum seconds per key: reaction depth (twice the Toffoli count) times latency, over k."""
    if k < 1:
        raise EstimatorConfigError("k must be at least 1")
    return float(2 * per_key.toffoli * Fraction(reaction_time) / k)


# -- estimates --------------------------------------------------------------------------


def _footprint(arch: ArchSpec, hw: HardwareModel, d: int):
    n = arch.total_logical_qubits
    if hw.kind == "fbqc":
        return None, n * d * d / hw.code_cycle
    return n * 2 * d * d, None


def estimate_baseline(per_key: CostVector, arch: ArchSpec, hw: HardwareModel, *,
                      distance: int | None = None, threshold: str = "10%") -> EstimateReport:
    if arch.kind != "baseline":
        raise EstimatorConfigError("estimate_baseline needs a baseline architecture")
    k = arch.instances
    blocks = per_key.toffoli * TOFFOLI_CYCLES * arch.total_logical_qubits / k
    d = _distance(blocks, distance, threshold)
    union, exact = failure_probability(blocks * PE_BLOCKS, d)
    # every instance runs its own Toffoli stream; a burst yields k keys
    burst_cycles = per_key.toffoli * TOFFOLI_CYCLES * OVERHEAD
    burst = float(burst_cycles) * d * hw.code_cycle
    phys, rsg = _footprint(arch, hw, d)
    return EstimateReport(
        "baseline", hw.kind, hw.code_cycle, k, d, arch.total_logical_qubits, float(blocks), union, exact,
        float(burst_cycles / k), burst / k, burst, phys, rsg, None,
        reaction_limit(per_key, k, hw.reaction_time), [NOT_MODELED],
    )


def estimate_active_volume(per_key: CostVector, arch: ArchSpec, hw: HardwareModel, *,
                           distance: int | None = None, threshold: str = "10%") -> EstimateReport:
    if arch.kind != "active-volume":
        raise EstimatorConfigError("estimate_active_volume needs an active-volume architecture")
    k = arch.instances
    # total spacetime volume is twice the active volume
    blocks = 2 * per_key.active_volume_blocks
    d = _distance(blocks, distance, threshold)
    union, exact = failure_probability(blocks * PE_BLOCKS, d)
    burst_cycles = per_key.active_volume_blocks * k * OVERHEAD / arch.workspace_qubits
    burst = float(burst_cycles) * d * hw.code_cycle
    phys, rsg = _footprint(arch, hw, d)
    return EstimateReport(
        "active-volume", hw.kind, hw.code_cycle, k, d, arch.total_logical_qubits, float(blocks), union, exact,
        float(burst_cycles / k), burst / k, burst, phys, rsg, 2 * d * d,
        reaction_limit(per_key, k, hw.reaction_time), [NOT_MODELED],
    )


def estimate(per_key: CostVector, arch: ArchSpec, hw: HardwareModel, **kw) -> EstimateReport:
    if arch.kind == "baseline":
        return estimate_baseline(per_key, arch, hw, **kw)
    return estimate_active_volume(per_key, arch, hw, **kw)


# -- sweeps -----------------------------------------------------------------------------


@dataclass
class Grid:
    architectures: tuple[str, ...] = ARCHITECTURES
    hardware: tuple[str, ...] = HARDWARE_KINDS
    delays: tuple[float, ...] = DEFAULT_DELAYS
    instances: tuple[int, ...] = (1, 4)
    reaction_time: float = DEFAULT_REACTION_TIME
    key_bits: int = 256
    logical_memory_qubits: int = 3000
    published_constants: bool = True
    threshold: str = "10%"

    def __post_init__(self):
        for a in self.architectures:
            if a not in ARCHITECTURES:
                raise EstimatorConfigError(f"unknown architecture {a!r}")
        for h in self.hardware:
            if h not in HARDWARE_KINDS:
                raise EstimatorConfigError(f"unknown hardware {h!r}")
        if any(not t > 0 for t in self.delays):
            raise EstimatorConfigError("delays must be positive")
        if any(k < 1 for k in self.instances):
            raise EstimatorConfigError("instances must be at least 1")


def per_key_for(k: int, published_constants: bool = True, key_bits: int = 256) -> CostVector:
    return per_key_cost(key_bits, k, "published" if published_constants else "computed")


def _hardware_points(grid: Grid):
    for kind in grid.hardware:
        if kind == "fbqc":
            for t in grid.delays:
                yield HardwareModel.make("fbqc", t, grid.reaction_time)
        else:
            yield HardwareModel.make(kind, None, grid.reaction_time)


def sweep(grid: Grid | None = None) -> list[EstimateReport]:
    """Full Cartesian product architecture x hardware x t_d x k, in a fixed order."""
    grid = grid or Grid()
    cache: dict[int, CostVector] = {}
    out = []
    for arch_kind, hw, k in product(grid.architectures, list(_hardware_points(grid)), grid.instances):
        if k not in cache:
            cache[k] = per_key_for(k, grid.published_constants, grid.key_bits)
        arch = ArchSpec(arch_kind, grid.logical_memory_qubits, k)
        out.append(estimate(cache[k], arch, hw, threshold=grid.threshold))
    return out


# -- formatting -------------------------------------------------------------------------


def sig(x: float, digits: int = 2) -> str:
    if x == 0:
        return "0"
    return f"{x:.{digits}g}" if abs(x) < 10**digits else f"{round(x, digits - 1 - int(math.floor(math.log10(abs(x))))):.0f}"


def human_time(seconds: float) -> str:
    for unit, size in (("days", 86400), ("h", 3600), ("min", 60), ("s", 1)):
        if seconds >= size:
            return f"{sig(seconds / size)} {unit}"
    if seconds >= 1e-3:
        return f"{sig(seconds * 1e3)} ms"
    return f"{sig(seconds * 1e6)} us"


def human_rate(hz: float) -> str:
    for unit, size in (("THz", 1e12), ("GHz", 1e9), ("MHz", 1e6)):
        if hz >= size:
            return f"{sig(hz / size)} {unit}"
    return f"{sig(hz)} Hz"


def _footprint_text(r: EstimateReport) -> str:
    if r.rsg_rate is not None:
        return f"RSG {human_rate(r.rsg_rate)}"
    text = f"{sig(r.physical_qubits / 1e6)}M qubits"
    if r.module_qubits:
        text += f" ({r.logical_qubits} modules x {r.module_qubits})"
    return text


def _hw_label(r: EstimateReport) -> str:
    if r.hardware == "fbqc":
        return f"fbqc t_d={human_time(r.code_cycle)}"
    return r.hardware


COLUMNS = ("architecture", "hardware", "code_cycle", "instances", "code_distance", "logical_qubits",
           "physical_qubits", "rsg_rate", "module_qubits", "spacetime_blocks_per_key", "failure_probability",
           "failure_probability_exact", "logical_cycles_per_key", "time_per_key", "burst_time",
           "reaction_floor", "flag")


def to_csv(reports: list[EstimateReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in reports:
        d = r.as_dict()
        w.writerow(["" if d[c] is None else (repr(d[c]) if isinstance(d[c], float) else d[c]) for c in COLUMNS])
    return buf.getvalue()


def to_json(reports: list[EstimateReport], header: dict | None = None) -> str:
    return json.dumps({"header": header or {}, "rows": [r.as_dict() for r in reports]}, indent=1, sort_keys=True) + "\n"


def to_text(reports: list[EstimateReport]) -> str:
    head = ("arch", "hardware", "k", "d", "footprint", "time/key", "burst", "p_fail", "floor", "")
    rows = [head]
    for r in reports:
        rows.append((
            r.architecture, _hw_label(r), str(r.instances), str(r.code_distance), _footprint_text(r),
            human_time(r.time_per_key), human_time(r.burst_time) if r.instances > 1 else "-",
            f"{r.failure_probability:.2f}", human_time(r.reaction_floor) if r.reaction_floor else "0", r.flag,
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.append("* reaction limited: time per key below the reaction-time floor")
    lines.append(f"note: {NOT_MODELED}")
    return "\n".join(lines) + "\n"


def render(reports: list[EstimateReport], fmt: str = "text", header: dict | None = None) -> str:
    if fmt == "csv":
        return to_csv(reports)
    if fmt == "json":
        return to_json(reports, header)
    if fmt == "text":
        return to_text(reports)
    raise EstimatorConfigError(f"unknown format {fmt!r}")
