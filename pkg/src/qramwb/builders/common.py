"""Shared emission helpers for the builders."""
from __future__ import annotations

from ..circuit import QubitRef


def out_ref(b: int) -> QubitRef:
    return QubitRef("out", b)


def comparator_negations(index: int, bits: int) -> tuple[bool, ...]:
    """Control polarities so an address-register conjunction fires on |index>."""
    return tuple(not ((index >> b) & 1) for b in range(bits))
