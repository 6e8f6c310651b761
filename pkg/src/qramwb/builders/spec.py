"""Builder selection record and dispatch."""
from __future__ import annotations

from dataclasses import dataclass

from ..circuit import Circuit
from ..tables import BitTable

KINDS = (
    "unary",
    "recursive",
    "bucket_brigade",
    "bad_readout_bb",
    "select_swap",
    "fanout_swap_qraqm",
    "parallel_sorted",
)

_MEASUREMENT_BASED_OK = ("select_swap", "recursive")


@dataclass(frozen=True)
class BuilderSpec:
    kind: str
    page_log: int | None = None
    query_count: int | None = None
    uncompute: str | None = None
    swap_variant: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown builder kind {self.kind!r}")
        if self.page_log is not None and self.kind != "select_swap":
            raise ValueError("page_log only applies to select_swap")
        if self.query_count is not None and self.kind != "parallel_sorted":
            raise ValueError("query_count only applies to parallel_sorted")
        if self.query_count is not None and self.query_count < 1:
            raise ValueError("query_count must be >= 1")
        if self.page_log is not None and self.page_log < 0:
            raise ValueError("page_log must be >= 0")
        if (
            self.uncompute == "measurement_based"
            and self.kind not in _MEASUREMENT_BASED_OK
        ):
            raise ValueError(
                "measurement_based uncompute only applies to select_swap/recursive"
            )
        if self.uncompute not in (None, "coherent", "measurement_based"):
            raise ValueError(f"unknown uncompute mode {self.uncompute!r}")


def build(spec: BuilderSpec, table: BitTable) -> Circuit:
    """Build the circuit for ``spec`` over ``table``.

    For the quantum-memory kinds the table supplies the memory size (and,
    to the verifiers, the initial memory contents); the circuit itself is
    data-independent.
    """
    from .bad_readout import build_bad_readout_bb
    from .bucket_brigade import build_bucket_brigade
    from .fanout_swap import build_fanout_swap_qraqm
    from .parallel_sorted import build_parallel_sorted
    from .recursive import build_recursive
    from .select_swap import build_select_swap
    from .unary import build_unary

    kind = spec.kind
    if kind == "unary":
        return build_unary(table)
    if kind == "recursive":
        return build_recursive(
            table, uncompute=spec.uncompute or "measurement_based"
        )
    if kind == "bucket_brigade":
        return build_bucket_brigade(table)
    if kind == "bad_readout_bb":
        return build_bad_readout_bb(table)
    if kind == "select_swap":
        padded = table.padded_to_power_of_two()
        page_log = (
            spec.page_log
            if spec.page_log is not None
            else padded.address_bits // 2
        )
        if page_log > padded.address_bits:
            raise ValueError("page_log exceeds the address width")
        return build_select_swap(
            table, page_log, uncompute=spec.uncompute or "coherent"
        )
    if kind == "fanout_swap_qraqm":
        padded = table.padded_to_power_of_two()
        return build_fanout_swap_qraqm(
            padded.address_bits, padded.word_width, swap_variant=spec.swap_variant
        )
    if kind == "parallel_sorted":
        return build_parallel_sorted(table, spec.query_count or 1)
    raise AssertionError(kind)
