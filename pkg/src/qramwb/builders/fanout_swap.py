"""Quantum-memory access by a mirrored tree of address-controlled swaps.

Stage A cascades controlled swaps so the addressed memory cell lands in
cell 0, stage B copies (or swaps) it into the output, and stage C is the
mirror of A, restoring the memory register.  Each level fans its address
bit out onto a shared block of N/2 ancillas just before its swaps and
folds the copies back immediately after, so the block is reused by every
level.
"""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef


def emit_swap_tree(
    circ: Circuit,
    levels: int,
    cell,
    controls,
    fan_name: str,
    planes: int = 1,
    reverse: bool = False,
) -> list[int]:
    """Gather cell[address] into cell 0 (or undo it, with ``reverse``).

    ``cell(index, plane)`` and ``controls[level]`` supply the qubit refs;
    levels run low address bit first.  Returns the per-level swap counts.
    """
    counts = []
    order = range(levels - 1, -1, -1) if reverse else range(levels)
    for level in order:
        pairs = 1 << (levels - 1 - level)
        bit = controls[level]
        if pairs == 1:
            ctrls = [bit]
            fanout = None
        else:
            ctrls = [QubitRef(fan_name, k) for k in range(pairs)]
            fanout = Gate(GateKind.FANOUT_CNOT, (bit, *ctrls))
        if fanout is not None:
            circ._append_inplace(fanout)
        group = 0
        swaps = []
        for k in range(pairs):
            a = k << (level + 1)
            b = a + (1 << level)
            for plane in range(planes):
                swaps.append(
                    Gate(GateKind.CSWAP, (ctrls[k], cell(a, plane), cell(b, plane)))
                )
                group += 1
        for g in reversed(swaps) if reverse else swaps:
            circ._append_inplace(g)
        if fanout is not None:
            circ._append_inplace(fanout)
        counts.append(group)
    return counts


def build_fanout_swap_qraqm(
    n: int, word_width: int = 1, swap_variant: bool = False
) -> Circuit:
    if n < 1:
        raise ValueError("need at least one address bit")
    N = 1 << n
    w = word_width
    fan_size = N // 2 if n >= 2 else 0
    registers = [("addr", n), ("out", w), ("mem", N * w)]
    if fan_size:
        registers.append(("fan", fan_size))
    circ = Circuit(registers)
    addr = [QubitRef("addr", i) for i in range(n)]

    def mem_ref(cell: int, plane: int) -> QubitRef:
        return QubitRef("mem", cell * w + plane)

    # stage A: gather mem[address] into cell 0, low address bit first
    cswap_groups = emit_swap_tree(circ, n, mem_ref, addr, "fan", planes=w)

    # stage B: copy out (or swap, for the swap-variant access)
    for plane in range(w):
        src = mem_ref(0, plane)
        dst = QubitRef("out", plane)
        if swap_variant:
            circ._append_inplace(Gate(GateKind.CNOT, (src, dst)))
            circ._append_inplace(Gate(GateKind.CNOT, (dst, src)))
            circ._append_inplace(Gate(GateKind.CNOT, (src, dst)))
        else:
            circ._append_inplace(Gate(GateKind.CNOT, (src, dst)))

    # stage C: mirror of A, restoring the memory register
    emit_swap_tree(circ, n, mem_ref, addr, "fan", planes=w, reverse=True)

    circ.meta.update(
        {
            "builder": "fanout_swap_qraqm",
            "n": N,
            "word_width": w,
            "swap_variant": swap_variant,
            "fan_ancillas": fan_size,
            "cswap_groups": cswap_groups,
            "cswap_count": 2 * sum(cswap_groups),
        }
    )
    return circ
