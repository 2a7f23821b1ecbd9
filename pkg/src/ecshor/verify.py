"""Oracle sweeps: build a circuit, simulate it on many inputs, compare with modmath."""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from . import modmath as mm
from .circuits import arith, batch, ecadd, kaliski, lookup, modular, montgomery, window
from .circuits.modular import ModContext
from .revsim import Circuit, simulate_batch

EXHAUSTIVE_LIMIT_BITS = 22
CHUNK = 1 << 15


class VerifyConfigError(ValueError):
    """Unknown subroutine or parameters the harness cannot simulate."""


@dataclass
class VerifyReport:
    subroutine: str
    bits: int
    prime: int | None
    mode: str
    seed: int
    cases: int = 0
    failures: int = 0
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


@dataclass
class _Job:
    circuit: Circuit
    domains: dict[str, Sequence[int]]
    check: Callable[[dict, dict], bool]
    fixed: dict[str, int] = field(default_factory=dict)
    edges: list[dict] = field(default_factory=list)


def _ctx(bits: int, prime: int | None) -> ModContext:
    if prime is None:
        raise VerifyConfigError("this subroutine needs --prime")
    if not mm.is_prime(prime):
        raise VerifyConfigError(f"{prime} is not prime")
    try:
        return ModContext(prime, bits)
    except ValueError as exc:
        raise VerifyConfigError(str(exc)) from None


def _edges(p: int, names: Sequence[str]) -> list[dict]:
    vals = sorted({0, 1, p - 1})
    return [dict(zip(names, combo)) for combo in itertools.product(vals, repeat=len(names))]


def _two_operand_mod(kind: str, controlled: bool, bits: int, prime: int | None) -> _Job:
    ctx = _ctx(bits, prime)
    p = ctx.p
    build = {"add": modular.build_mod_add, "sub": modular.build_mod_sub}[kind]
    op = {"add": lambda x, y: (x + y) % p, "sub": lambda x, y: (y - x) % p}[kind]
    doms = {"x": range(p), "y": range(p)}
    if controlled:
        doms["ctrl"] = range(2)

    def check(i, o):
        want = op(i["x"], i["y"]) if i.get("ctrl", 1) else i["y"]
        return o["y"] == want and o["x"] == i["x"]

    edges = [dict(e, ctrl=1) if controlled else e for e in _edges(p, ("x", "y"))]
    return _Job(build(ctx, controlled), doms, check, edges=edges)


def _job(name: str, bits: int, prime: int | None, seed: int) -> _Job:
    n = bits
    full = range(1 << n)
    if name == "adder":
        return _Job(arith.build_adder(n), {"a": full, "b": full},
                    lambda i, o: o["b"] == (i["a"] + i["b"]) % (1 << n) and o["a"] == i["a"])
    if name == "comparator":
        return _Job(arith.build_comparator(n), {"a": full, "b": full},
                    lambda i, o: o["flag"] == int(i["a"] < i["b"]), fixed={"flag": 0})
    if name == "equality":
        return _Job(arith.build_equality_check(n), {"a": full, "b": full},
                    lambda i, o: o["flag"] == int(i["a"] == i["b"]), fixed={"flag": 0})
    if name == "negation":
        return _Job(arith.build_negation(n), {"x": full}, lambda i, o: o["x"] == (-i["x"]) % (1 << n))
    if name == "increment":
        return _Job(arith.build_increment(n), {"x": full}, lambda i, o: o["x"] == (i["x"] + 1) % (1 << n))
    if name in ("modadd", "cmodadd", "modsub", "cmodsub"):
        return _two_operand_mod(name.lstrip("c").removeprefix("mod"), name.startswith("c"), bits, prime)
    if name in ("modneg", "cmodneg"):
        ctx = _ctx(bits, prime)
        p = ctx.p
        ctl = name.startswith("c")
        doms = {"x": range(p)} | ({"ctrl": range(2)} if ctl else {})
        return _Job(modular.build_mod_neg(ctx, ctl), doms,
                    lambda i, o: o["x"] == ((-i["x"]) % p if i.get("ctrl", 1) else i["x"]))
    if name == "moddbl":
        ctx = _ctx(bits, prime)
        p = ctx.p
        return _Job(modular.build_mod_dbl(ctx), {"x": range(p)}, lambda i, o: o["x"] == 2 * i["x"] % p)
    if name == "modmul":
        ctx = _ctx(bits, prime)
        p = ctx.p
        c = montgomery.build_montgomery_mul(ctx)
        return _Job(c, {"a": range(p), "b": range(p)},
                    lambda i, o: o["out"] == mm.montgomery_mul(i["a"], i["b"], p, n)
                    and (o["a"], o["b"]) == (i["a"], i["b"]),
                    edges=_edges(p, ("a", "b")))
    if name == "kaliski":
        ctx = _ctx(bits, prime)
        p = ctx.p
        one = mm.montgomery_encode(1, p, n)
        return _Job(kaliski.build_kaliski_inverse(ctx), {"x": range(1, p)},
                    lambda i, o: mm.montgomery_mul(i["x"], o["x"], p, n) == one,
                    edges=[{"x": 1}, {"x": p - 1}])
    if name == "lookup":
        rng = random.Random(seed)
        m = max(n, 1)
        table = [rng.randrange(1 << m) for _ in range(1 << n)]
        c = lookup.build_lookup_roundtrip(n, m, table)
        # a lookup alone also has to write the right entry
        c2 = lookup.build_lookup(n, m, table)
        return _Job(c, {"address": full},
                    lambda i, o: o["address"] == i["address"]
                    and simulate_batch(c2, {"address": [i["address"]], "target": [0]})["target"][0]
                    == table[i["address"]])
    raise VerifyConfigError(f"unknown subroutine {name!r}")


def _curve_for(prime: int | None, bits: int) -> mm.CurveParams:
    for name in mm.TOY_CURVES:
        cp = mm.toy_curve(name)
        if cp.p == prime and cp.bits == bits:
            return cp
    raise VerifyConfigError(f"no bundled curve with p={prime} and {bits} bits")


def _run_rows(job: _Job, rows: list[dict], report: VerifyReport) -> None:
    for start in range(0, len(rows), CHUNK):
        chunk = rows[start : start + CHUNK]
        names = list(job.domains) + list(job.fixed)
        inputs = {k: [r[k] if k in r else job.fixed[k] for r in chunk] for k in names}
        out = simulate_batch(job.circuit, inputs)
        for s, row in enumerate(chunk):
            o = {k: v[s] for k, v in out.items()}
            report.cases += 1
            if o["__ancilla_dirty__"] or not job.check(row, o):
                report.failures += 1
                if report.counterexample is None:
                    report.counterexample = {
                        "input": dict(row),
                        "output": {k: v for k, v in o.items() if not k.startswith("__")},
                        "dirty_ancilla": bool(o["__ancilla_dirty__"]),
                    }


def _space(domains: dict[str, Sequence[int]]) -> int:
    size = 1
    for d in domains.values():
        size *= len(d)
    return size


def _rows(job: _Job, mode: str, samples: int, seed: int) -> list[dict]:
    names = list(job.domains)
    if mode == "exhaustive":
        if _space(job.domains) > 1 << EXHAUSTIVE_LIMIT_BITS:
            raise VerifyConfigError("input space too large for exhaustive mode; use sampled")
        return [dict(zip(names, combo)) for combo in itertools.product(*job.domains.values())]
    if mode != "sampled":
        raise VerifyConfigError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    rows = [{k: rng.choice(job.domains[k]) for k in names} for _ in range(samples)]
    return rows + [e for e in job.edges if all(e[k] in job.domains[k] for k in names)]


def _verify_curve(name: str, bits: int, prime: int | None, mode: str, samples: int, seed: int,
                  report: VerifyReport) -> VerifyReport:
    params = _curve_for(prime, bits)
    ctx = ModContext(params.p, bits)
    pts = mm.enumerate_points(params) if params.p < 1 << 16 else None
    rng = random.Random(seed)
    if name == "ecpointadd":
        if pts is None:
            raise VerifyConfigError("curve too large to enumerate")
        if mode == "exhaustive":
            if len(pts) ** 2 > 1 << EXHAUSTIVE_LIMIT_BITS:
                raise VerifyConfigError("too many point pairs for exhaustive mode")
            pairs = [(a, b) for a in pts for b in pts]
        else:
            pairs = [(rng.choice(pts), rng.choice(pts)) for _ in range(samples)]
            pairs += [(mm.INFINITY, pts[1]), (pts[1], mm.INFINITY), (pts[1], pts[1]),
                      (pts[1], mm.ec_neg(pts[1], params))]
        c = ecadd.build_ec_point_add(ctx)
        for start in range(0, len(pairs), CHUNK):
            chunk = pairs[start : start + CHUNK]
            out = simulate_batch(c, ecadd.point_add_inputs(params, chunk))
            for s, (p1, p2) in enumerate(chunk):
                got = mm.CurvePoint(mm.montgomery_decode(out["x"][s], params.p, bits),
                                    mm.montgomery_decode(out["y"][s], params.p, bits))
                want = mm.ec_add(p1, p2, params)
                report.cases += 1
                if got != want or out["__ancilla_dirty__"][s]:
                    report.failures += 1
                    if report.counterexample is None:
                        report.counterexample = {"P1": list(p1), "P2": list(p2), "got": list(got),
                                                 "expected": list(want)}
        return report
    # window step over every address value
    w = min(4, bits)
    base = mm.ec_scalar_mul(rng.randrange(1, params.order_r), params.base_point, params)
    c = window.build_window_step(ctx, w, window.window_table(params, base, w))
    if mode == "exhaustive":
        cases = [(a, q) for a in range(1 << w) for q in pts]
    else:
        cases = [(rng.randrange(1 << w), rng.choice(pts)) for _ in range(samples)]
    got = window.run_window_step(c, params, [a for a, _ in cases], [q for _, q in cases])
    for (a, q), g in zip(cases, got):
        report.cases += 1
        want = mm.ec_add(q, mm.ec_scalar_mul(a, base, params), params)
        if g != want:
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = {"address": a, "P": list(q), "got": list(g), "expected": list(want)}
    return report


def _verify_batch(bits: int, prime: int | None, mode: str, samples: int, seed: int, report: VerifyReport,
                  k: int = 4) -> VerifyReport:
    ctx = _ctx(bits, prime)
    p = ctx.p
    one = mm.montgomery_encode(1, p, bits)
    rng = random.Random(seed)
    for variant in batch.VARIANTS:
        c = batch.build_batch_inverse(k, ctx, variant)
        rows = [[rng.randrange(1, p) for _ in range(k)] for _ in range(samples if mode == "sampled" else 256)]
        outs = batch.run_batch_inverse(c, rows)
        for row, out in zip(rows, outs):
            report.cases += 1
            if any(mm.montgomery_mul(x, y, p, bits) != one for x, y in zip(row, out)):
                report.failures += 1
                if report.counterexample is None:
                    report.counterexample = {"variant": variant, "input": row, "output": out}
    if mode == "exhaustive":
        report.notes.append("batch inversion is always sampled (256 draws per variant)")
    return report


SUBROUTINES = (
    "adder", "comparator", "equality", "negation", "increment",
    "modadd", "cmodadd", "modsub", "cmodsub", "modneg", "cmodneg", "moddbl",
    "modmul", "kaliski", "lookup", "ecpointadd", "window", "batchinv",
)


def verify(
    subroutine: str,
    bits: int,
    prime: int | None = None,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
) -> VerifyReport:
    """Sweep one builder against its oracle. Raises VerifyConfigError on bad parameters."""
    if subroutine not in SUBROUTINES:
        raise VerifyConfigError(f"unknown subroutine {subroutine!r}; choose from {', '.join(SUBROUTINES)}")
    if bits < 1:
        raise VerifyConfigError("bits must be positive")
    if mode not in ("exhaustive", "sampled"):
        raise VerifyConfigError(f"unknown mode {mode!r}")
    report = VerifyReport(subroutine, bits, prime, mode, seed)
    if subroutine in ("ecpointadd", "window"):
        return _verify_curve(subroutine, bits, prime, mode, samples, seed, report)
    if subroutine == "batchinv":
        return _verify_batch(bits, prime, mode, samples, seed, report)
    job = _job(subroutine, bits, prime, seed)
    _run_rows(job, _rows(job, mode, samples, seed), report)
    return report


def verify_many(specs: Iterable[tuple]) -> list[VerifyReport]:
    return [verify(*s) for s in specs]
