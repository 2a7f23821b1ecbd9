"""Reversible elliptic-curve arithmetic with a basis-state simulator, cost model and resource estimator."""

from .costs import CostVector, ec_point_add_cost, per_key_cost, subroutine_cost
from .estimator import ArchSpec, EstimateReport, HardwareModel, estimate, select_distance, sweep
from .modmath import INFINITY, CurveParams, CurvePoint, ec_add, ec_scalar_mul, key_search, load_curve, toy_curve
from .revsim import Circuit, Gate, GateStats, Register, count_stats, simulate, simulate_batch
from .verify import verify

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "ArchSpec",
    "Circuit",
    "CostVector",
    "CurveParams",
    "CurvePoint",
    "EstimateReport",
    "Gate",
    "GateStats",
    "HardwareModel",
    "Register",
    "count_stats",
    "ec_add",
    "ec_point_add_cost",
    "ec_scalar_mul",
    "estimate",
    "key_search",
    "load_curve",
    "per_key_cost",
    "select_distance",
    "simulate",
    "simulate_batch",
    "subroutine_cost",
    "sweep",
    "toy_curve",
    "verify",
]
