"""qramwb: circuit workbench for quantum random-access memory.

Builders emit a layered permutation-gate IR for each memory-access
construction; exact sparse and batched-classical simulators verify them
against direct table lookup; a trajectory engine measures error scaling
under stochastic noise; and calculator modules evaluate the analytic
counting, Hamiltonian, distillation, and parallel-cost bounds.
"""
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    QubitRef,
    ResourceProfile,
    ResourceReport,
    UNIT_GATE,
    SURFACE_CODE,
    PROFILES,
    count_resources,
    new_circuit,
)
from .tables import BitTable, random_table
from .builders import (
    BuilderSpec,
    build,
    build_bad_readout_bb,
    build_bucket_brigade,
    build_fanout_swap_qraqm,
    build_parallel_sorted,
    build_recursive,
    build_select_swap,
    build_unary,
)
from .sim import QubitLayout, SparseState, apply_gate, run
from .verify import verify_builder
from .noise import (
    NoiseModel,
    estimate_infidelity,
    fit_scaling,
    run_noisy_query,
    simulate_derangement,
    simulate_persistent_accumulation,
    write_sweep_csv,
)
from . import bounds, qla

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "Gate",
    "GateKind",
    "QubitRef",
    "ResourceProfile",
    "ResourceReport",
    "UNIT_GATE",
    "SURFACE_CODE",
    "PROFILES",
    "count_resources",
    "new_circuit",
    "BitTable",
    "random_table",
    "BuilderSpec",
    "build",
    "build_unary",
    "build_recursive",
    "build_bucket_brigade",
    "build_bad_readout_bb",
    "build_select_swap",
    "build_fanout_swap_qraqm",
    "build_parallel_sorted",
    "QubitLayout",
    "SparseState",
    "apply_gate",
    "run",
    "verify_builder",
    "NoiseModel",
    "estimate_infidelity",
    "fit_scaling",
    "run_noisy_query",
    "simulate_derangement",
    "simulate_persistent_accumulation",
    "write_sweep_csv",
    "bounds",
    "qla",
]
