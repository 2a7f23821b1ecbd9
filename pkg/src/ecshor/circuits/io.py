"""Circuit dumps and the builder manifest used by golden tests."""

from __future__ import annotations

import json
from pathlib import Path

from ..revsim import Circuit, count_stats, dump_circuit, load_circuit, read_table, write_table

__all__ = [
    "dump_circuit",
    "load_circuit",
    "read_table",
    "write_table",
    "structural_counts",
    "manifest_entry",
    "load_manifest",
    "save_manifest",
]


def structural_counts(c: Circuit) -> dict:
    st = count_stats(c)
    by_kind: dict[str, int] = {}
    for reg in c.registers.values():
        by_kind[reg.kind] = by_kind.get(reg.kind, 0) + reg.width
    return {
        "gates": len(c.gates),
        "wires": c.num_wires,
        "toffoli": st.toffoli_count,
        "and": st.and_count,
        "cswap": st.cswap_count,
        "lookup_units": st.lookup_unit_count,
        "register_widths": dict(sorted(by_kind.items())),
    }


def manifest_entry(subroutine: str, n: int, p: int | None, window: int | None, c: Circuit) -> dict:
    return {"subroutine": subroutine, "n": n, "p": p, "window": window, "counts": structural_counts(c)}


def save_manifest(entries: list[dict], path: str | Path) -> None:
    Path(path).write_text(json.dumps(entries, indent=1, sort_keys=True) + "\n")


def load_manifest(path: str | Path) -> list[dict]:
    return json.loads(Path(path).read_text())
