"""Batch modular inversion: k inverses from one inversion and 3k-3 products."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from ..modmath import NotInvertibleError
from ..revsim import Circuit, SimulationError, simulate_batch
from .arith import copy
from .kaliski import kaliski_inverse
from .modular import ModContext
from .montgomery import montgomery_mul, unmul

VARIANTS = ("parallel", "sequential")


@dataclass
class BatchStats:
    multiplications: int = 0
    inversions: int = 0
    uncompute_multiplications: int = 0
    garbage_registers: int = 0
    peak_garbage_registers: int = 0
    by_source: Counter = field(default_factory=Counter)

    def _grow(self, k: int, source: str) -> None:
        self.garbage_registers += k
        self.by_source[source] += k
        self.peak_garbage_registers = max(self.peak_garbage_registers, self.garbage_registers)

    def _shrink(self, k: int, source: str) -> None:
        self.garbage_registers -= k
        self.by_source[source] -= k


def _product(c: Circuit, ctx: ModContext, u, v, stats: BatchStats, window_bits):
    res = montgomery_mul(c, ctx, u, v, window_bits)
    c.claim(res.garbage, "mul_garbage", "garbage", "montgomery_mul")
    stats.multiplications += 1
    # one register for the product, one for the garbage
    stats._grow(2, "multiplication")
    return res


def _invert(c: Circuit, ctx: ModContext, wires) -> None:
    res = kaliski_inverse(c, ctx, wires)
    c.claim(res.garbage, "inv_garbage", "garbage", "kaliski")


def _parallel(c: Circuit, ctx: ModContext, xs, stats: BatchStats, window_bits) -> list[list[int]]:
    k = len(xs)
    prefix = [xs[0]]
    for i in range(1, k):
        prefix.append(_product(c, ctx, prefix[-1], xs[i], stats, window_bits).out)
        if i < k - 1:
            c.claim(prefix[-1], "prefix_product", "garbage", "batch_inverse")
    inv = list(prefix[-1]) if k > 1 else list(xs[0])
    _invert(c, ctx, inv)
    if k > 1:
        c.claim(inv, "product_inverse", "garbage", "batch_inverse")
    stats.inversions += 1
    stats._grow(2, "inversion")
    outs: list[list[int]] = [[] for _ in range(k)]
    q = inv
    for i in range(k - 1, 0, -1):
        outs[i] = _product(c, ctx, q, prefix[i - 1], stats, window_bits).out
        if q is not inv:
            c.claim(q, "partial_inverse", "garbage", "batch_inverse")
        q = _product(c, ctx, q, xs[i], stats, window_bits).out
    outs[0] = q
    return outs


def _sequential(c: Circuit, ctx: ModContext, xs, stats: BatchStats, window_bits, sinks) -> None:
    """Product tree; inverses are produced one leaf at a time and copied to sinks."""

    def build(lo: int, hi: int):
        if hi - lo == 1:
            return {"val": xs[lo], "lo": lo, "hi": hi}
        mid = (lo + hi + 1) // 2
        left, right = build(lo, mid), build(mid, hi)
        prod = _product(c, ctx, left["val"], right["val"], stats, window_bits)
        c.claim(prod.out, "tree_product", "garbage", "product tree")
        return {"val": prod.out, "lo": lo, "hi": hi, "left": left, "right": right}

    def descend(node, inv_wires) -> None:
        if "left" not in node:
            copy(c, inv_wires, sinks[node["lo"]])
            return
        for child, sibling in ((node["left"], node["right"]), (node["right"], node["left"])):
            res = _product(c, ctx, inv_wires, sibling["val"], stats, window_bits)
            descend(child, res.out)
            unmul(c, res)
            stats.uncompute_multiplications += 1
            stats._shrink(2, "multiplication")

    root = build(0, len(xs))
    if len(xs) == 1:
        inv = list(xs[0])
    else:
        inv = list(root["val"])
    _invert(c, ctx, inv)
    stats.inversions += 1
    stats._grow(2, "inversion")
    descend(root, inv)


def build_batch_inverse(
    k: int, ctx: ModContext, variant: str = "parallel", window_bits: int | None = None
) -> Circuit:
    """Invert inputs x0..x{k-1} (Montgomery encoded).

    ``parallel`` leaves every inverse in an output register ``inv{i}`` at the
    end. ``sequential`` walks a product tree depth first and copies each
    inverse into ``inv{i}`` as soon as it exists, then uncomputes that branch.
    Counting is in n-qubit registers and ends up in ``circuit.meta["batch"]``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    c = Circuit(f"batch_inverse_{variant}_k{k}")
    xs = [c.add_register(f"x{i}", ctx.n).wires for i in range(k)]
    stats = BatchStats()
    if variant == "parallel":
        outs = _parallel(c, ctx, xs, stats, window_bits)
        for i, wires in enumerate(outs):
            if wires != xs[i]:
                c.claim(wires, f"inv{i}", "output", "batch_inverse")
    else:
        sinks = [c.add_register(f"inv{i}", ctx.n, kind="output").wires for i in range(k)]
        _sequential(c, ctx, xs, stats, window_bits, sinks)
    c.meta["batch"] = stats
    c.meta["variant"] = variant
    c.meta["k"] = k
    return c


def expected_garbage_registers(k: int, variant: str) -> int:
    if variant == "parallel":
        return 6 * k - 4
    return 2 * k + 2 * math.ceil(math.log2(k)) if k > 1 else 2


def output_wires(c: Circuit, i: int) -> str:
    """Register holding the i-th inverse (for k=1 parallel that is the input itself)."""
    name = f"inv{i}"
    return name if name in c.registers else f"x{i}"


def run_batch_inverse(c: Circuit, values: list[list[int]] | list[int]) -> list[list[int]]:
    """Simulate; ``values`` holds one sample (k ints) or a list of samples.

    Raises NotInvertibleError for a zero input, which has no inverse.
    """
    k = c.meta["k"]
    samples = [values] if values and isinstance(values[0], int) else values
    for row in samples:
        if len(row) != k:
            raise ValueError(f"expected {k} inputs")
        if any(v == 0 for v in row):
            raise NotInvertibleError("batch inversion input is zero")
    batch = {f"x{i}": [row[i] for row in samples] for i in range(k)}
    if c.meta["variant"] == "sequential":
        batch.update({f"inv{i}": [0] * len(samples) for i in range(k)})
    out = simulate_batch(c, batch)
    if any(out["__ancilla_dirty__"]):
        raise SimulationError("batch inversion left a scratch wire dirty")
    return [[out[output_wires(c, i)][s] for i in range(k)] for s in range(len(samples))]
