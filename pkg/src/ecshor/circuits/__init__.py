"""Reversible circuit builders for modular and elliptic-curve arithmetic."""

from .arith import (
    build_adder,
    build_comparator,
    build_constant_adder,
    build_equality_check,
    build_increment,
    build_negation,
)
from .batch import build_batch_inverse, expected_garbage_registers, run_batch_inverse
from .ecadd import ECPointAddLayout, build_ec_point_add, point_add_inputs, table_entry
from .io import dump_circuit, load_circuit, load_manifest, manifest_entry, save_manifest, structural_counts
from .kaliski import build_kaliski_inverse
from .lookup import build_lookup, build_lookup_roundtrip, build_unlookup, unlookup_split
from .modular import ModContext, build_mod_add, build_mod_dbl, build_mod_neg, build_mod_sub
from .montgomery import build_montgomery_mul, default_window, reduction_table
from .window import build_window_step, run_window_step, window_table

__all__ = [
    "ECPointAddLayout",
    "ModContext",
    "build_adder",
    "build_batch_inverse",
    "build_comparator",
    "build_constant_adder",
    "build_ec_point_add",
    "build_equality_check",
    "build_increment",
    "build_kaliski_inverse",
    "build_lookup",
    "build_lookup_roundtrip",
    "build_mod_add",
    "build_mod_dbl",
    "build_mod_neg",
    "build_mod_sub",
    "build_montgomery_mul",
    "build_negation",
    "build_unlookup",
    "build_window_step",
    "default_window",
    "dump_circuit",
    "expected_garbage_registers",
    "load_circuit",
    "load_manifest",
    "manifest_entry",
    "point_add_inputs",
    "reduction_table",
    "run_batch_inverse",
    "run_window_step",
    "save_manifest",
    "structural_counts",
    "table_entry",
    "unlookup_split",
    "window_table",
]
