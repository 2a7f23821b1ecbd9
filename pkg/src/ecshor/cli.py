"""Command-line entry point: ``ecshor verify|count|estimate|sweep``.

Exit codes: 0 on success, 1 when a verification finds a mismatch, 2 on a
configuration error. Output never contains timestamps, so the same
arguments and seed give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import costs
from . import estimator as est
from .verify import SUBROUTINES, VerifyConfigError, verify

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2

_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9}


class ConfigError(ValueError):
    pass


def parse_duration(text: str | float | int) -> float:
    """'10us', '1 ms', '0', '1e-5' -> seconds."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        m = re.fullmatch(r"\s*([0-9.eE+-]+)\s*([a-zµ]*)\s*", str(text))
        if not m or (m.group(2) and m.group(2) not in _UNITS):
            raise ConfigError(f"cannot parse duration {text!r}")
        try:
            value = float(m.group(1)) * _UNITS.get(m.group(2) or "s")
        except ValueError as exc:
            raise ConfigError(f"cannot parse duration {text!r}") from exc
    if value < 0:
        raise ConfigError("durations must be nonnegative")
    return value


def _csv_list(text, conv=str):
    if isinstance(text, (list, tuple)):
        return [conv(x) for x in text]
    return [conv(x) for x in str(text).split(",") if x.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- verify -----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = verify(args.subroutine, args.bits, args.prime, args.mode, args.samples, args.seed)
    if args.format == "json":
        _emit(json.dumps(report.as_dict(), indent=1, sort_keys=True) + "\n", args.output)
    else:
        lines = [
            f"# subroutine={report.subroutine} bits={report.bits} prime={report.prime} "
            f"mode={report.mode} seed={report.seed}",
            f"cases={report.cases} failures={report.failures}",
        ]
        if report.counterexample is not None:
            lines.append("counterexample=" + json.dumps(report.counterexample, sort_keys=True))
        lines += [f"note: {n}" for n in report.notes]
        lines.append("PASS" if report.ok else "FAIL")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if report.ok else EXIT_MISMATCH


# -- count ------------------------------------------------------------------------------


def _count_rows(args) -> list[dict]:
    table = costs.CostTable.load(args.cost_table) if args.cost_table else None
    rows = []
    if args.per_key:
        mode = "published" if args.published_constants else "computed"
        for k in args.k:
            c = costs.per_key_cost(args.bits, k, mode, table)
            rows.append({"item": f"per_key[{mode}]", "n": args.bits, "k": k, **c.rounded()})
        return rows
    if not args.subroutine:
        raise ConfigError("count needs --subroutine or --per-key")
    if args.subroutine in ("ec_point_add", "ecpointadd"):
        c = costs.ec_point_add_cost(args.bits, args.inversion, table)
    else:
        c = costs.subroutine_cost(args.subroutine, args.bits, args.variant, table)
    rows.append({"item": args.subroutine, "n": args.bits, "k": 1, **c.rounded()})
    return rows


def cmd_count(args) -> int:
    try:
        rows = _count_rows(args)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from exc
    cols = ("item", "n", "k", "toffoli", "active_volume_blocks", "memory_qubits", "reaction_depth")
    if args.format == "json":
        text = json.dumps(rows, indent=1, sort_keys=True) + "\n"
    elif args.format == "csv":
        text = ",".join(cols) + "\n" + "".join(",".join(str(r[c]) for c in cols) + "\n" for r in rows)
    else:
        cells = [cols] + [tuple(f"{r[c]:,}" if isinstance(r[c], int) else str(r[c]) for c in cols) for r in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        text = "".join("  ".join(v.rjust(w) if i else v.ljust(w) for i, (v, w) in enumerate(zip(row, widths))) + "\n"
                       for row in cells)
    _emit(text, args.output)
    return EXIT_OK


# -- estimate / sweep -------------------------------------------------------------------


def _header(args) -> dict:
    keys = ("command", "bits", "published_constants", "reaction_time", "threshold", "memory_qubits", "seed")
    return {k: getattr(args, k, None) for k in keys}


def cmd_estimate(args) -> int:
    hw_time = parse_duration(args.t_d) if args.t_d is not None else None
    reaction = parse_duration(args.reaction_time)
    grid = est.Grid(
        architectures=(args.architecture,),
        hardware=(args.hardware,),
        delays=(hw_time if hw_time is not None else 10e-6,),
        instances=tuple(args.k),
        reaction_time=reaction,
        key_bits=args.bits,
        logical_memory_qubits=args.memory_qubits,
        published_constants=args.published_constants,
        threshold=args.threshold,
    )
    if args.hardware != "fbqc" and hw_time is not None:
        reports = []
        for k in grid.instances:
            per_key = est.per_key_for(k, grid.published_constants, grid.key_bits)
            hw = est.HardwareModel(args.hardware, hw_time, reaction)
            reports.append(est.estimate(per_key, est.ArchSpec(args.architecture, args.memory_qubits, k), hw,
                                        threshold=args.threshold))
    else:
        reports = est.sweep(grid)
    _emit(est.render(reports, args.format, _header(args)), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = est.Grid(
        architectures=tuple(_csv_list(args.architectures)),
        hardware=tuple(_csv_list(args.hardware)),
        delays=tuple(_csv_list(args.delays, parse_duration)),
        instances=tuple(args.k),
        reaction_time=parse_duration(args.reaction_time),
        key_bits=args.bits,
        logical_memory_qubits=args.memory_qubits,
        published_constants=args.published_constants,
        threshold=args.threshold,
    )
    _emit(est.render(est.sweep(grid), args.format, _header(args)), args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, formats=("text", "csv", "json")) -> None:
    p.add_argument("--format", choices=formats, default="text")
    p.add_argument("--output", "-o", help="write to a file instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file whose keys override the flags")


def _estimation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bits", type=int, default=256)
    p.add_argument("--k", type=lambda s: _csv_list(s, int), default=[1], help="instances, comma separated")
    p.add_argument("--paper-constants", dest="published_constants", action="store_true",
                   help="use the printed per-key totals instead of the composed cost model")
    p.add_argument("--reaction-time", default="10us")
    p.add_argument("--memory-qubits", type=int, default=3000)
    p.add_argument("--threshold", choices=("10%", "50%"), default="10%")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ecshor", description="Reversible EC arithmetic: verify, count, estimate.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a circuit builder against its classical oracle")
    v.add_argument("--subroutine", required=True, choices=SUBROUTINES)
    v.add_argument("--bits", type=int, required=True)
    v.add_argument("--prime", type=int)
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("--samples", type=int, default=1000)
    _common(v, ("text", "json"))
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="closed-form costs")
    c.add_argument("--subroutine")
    c.add_argument("--per-key", action="store_true")
    c.add_argument("--variant", choices=("plain", "controlled"))
    c.add_argument("--inversion", default="dedicated", help="dedicated or shared(k), for ec_point_add")
    c.add_argument("--cost-table", help="alternative cost table JSON")
    _estimation_flags(c)
    _common(c)
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("estimate", help="one architecture/hardware point")
    e.add_argument("--architecture", choices=est.ARCHITECTURES, default="active-volume")
    e.add_argument("--hardware", choices=est.HARDWARE_KINDS, default="fbqc")
    e.add_argument("--t-d", help="delay length (fbqc) or code cycle override, e.g. 10us")
    _estimation_flags(e)
    _common(e)
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("sweep", help="architecture x hardware x delay x k grid")
    s.add_argument("--architectures", default=",".join(est.ARCHITECTURES))
    s.add_argument("--hardware", default=",".join(est.HARDWARE_KINDS))
    s.add_argument("--delays", default="1us,10us,100us,1ms")
    _estimation_flags(s)
    s.set_defaults(k=[1, 4])
    _common(s)
    s.set_defaults(func=cmd_sweep)
    return ap


def _apply_config(args, parser) -> None:
    if not args.config:
        return
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if attr in ("command", "func", "config") or not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        if attr == "k":
            value = _csv_list(value if isinstance(value, list) else [value], int)
        setattr(args, attr, value)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        _apply_config(args, parser)
        return args.func(args)
    except (ConfigError, VerifyConfigError, est.EstimatorConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
