"""Recursive controlled lookup with the low-T AND convention.

The table splits on its top address bit into two half-tables; a single AND
per internal node converts the parent control plus the address bit into the
child control, held on a depth-indexed ancilla stack.  The base case is a
(fanned-out) CNOT.  With the 4-T compute / free measurement-based
uncompute accounting this costs exactly 4N-8 T for an uncontrolled lookup
of N words and 4N-4 for a controlled one.
"""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable


def _write_word(circ, ctrl, ctrl_neg, word, width, target_name):
    """XOR ``word`` into the target register, optionally under one control."""
    targets = [QubitRef(target_name, b) for b in range(width) if (word >> b) & 1]
    if not targets:
        return
    if ctrl is None:
        for t in targets:
            circ._append_inplace(Gate(GateKind.X, (t,)))
    elif len(targets) == 1 and not ctrl_neg:
        circ._append_inplace(Gate(GateKind.CNOT, (ctrl, targets[0])))
    elif len(targets) == 1:
        circ._append_inplace(
            Gate(GateKind.MULTI_CNOT, (ctrl, targets[0]), {"negations": (True,)})
        )
    else:
        flags = {"negations": (ctrl_neg,)} if ctrl_neg else ()
        circ._append_inplace(Gate(GateKind.FANOUT_CNOT, (ctrl, *targets), flags))


def emit_recursive_lookup(
    circ: Circuit,
    entries,
    word_width: int,
    addr_bits: list[QubitRef],
    target_name: str,
    stack_name: str = "stack",
    control: QubitRef | None = None,
    uncompute: str = "measurement_based",
) -> None:
    """Emit the split-on-top-bit lookup into an existing circuit.

    ``entries`` must have power-of-two length matching ``addr_bits``.  With
    ``control`` set, the whole lookup is conditioned on that qubit.
    """

    def emit(chunk, ctrl, ctrl_neg, bits, depth):
        if len(chunk) == 1:
            if chunk[0]:
                _write_word(circ, ctrl, ctrl_neg, chunk[0], word_width, target_name)
            return
        half = len(chunk) // 2
        top = bits[-1]
        if ctrl is None:
            emit(chunk[:half], top, True, bits[:-1], depth)
            emit(chunk[half:], top, False, bits[:-1], depth)
            return
        anc = QubitRef(stack_name, depth)
        circ._append_inplace(
            Gate(
                GateKind.AND_COMPUTE,
                (ctrl, top, anc),
                {"negations": (ctrl_neg, True)},
            )
        )
        emit(chunk[:half], anc, False, bits[:-1], depth + 1)
        if ctrl_neg:
            circ._append_inplace(
                Gate(GateKind.MULTI_CNOT, (ctrl, anc), {"negations": (True,)})
            )
        else:
            circ._append_inplace(Gate(GateKind.CNOT, (ctrl, anc)))
        emit(chunk[half:], anc, False, bits[:-1], depth + 1)
        kind = (
            GateKind.AND_UNCOMPUTE
            if uncompute == "measurement_based"
            else GateKind.TOFFOLI
        )
        circ._append_inplace(
            Gate(kind, (ctrl, top, anc), {"negations": (ctrl_neg, False)})
        )

    emit(tuple(entries), control, False, list(addr_bits), 0)


def build_recursive(
    table: BitTable,
    controlled: bool = False,
    uncompute: str = "measurement_based",
) -> Circuit:
    if uncompute not in ("measurement_based", "coherent"):
        raise ValueError(f"unknown uncompute mode {uncompute!r}")
    padded = table.padded_to_power_of_two()
    n = padded.address_bits
    w = padded.word_width
    stack_size = n if controlled else n - 1
    registers = []
    if controlled:
        registers.append(("ctrl", 1))
    registers.extend([("addr", n), ("out", w)])
    if stack_size > 0:
        registers.append(("stack", stack_size))
    circ = Circuit(registers)
    addr = [QubitRef("addr", i) for i in range(n)]
    control = QubitRef("ctrl", 0) if controlled else None
    emit_recursive_lookup(
        circ,
        padded.entries,
        w,
        addr,
        "out",
        control=control,
        uncompute=uncompute,
    )
    circ.meta.update(
        {
            "builder": "recursive",
            "n": padded.n,
            "padded_from": table.n if padded.n != table.n else None,
            "word_width": w,
            "controlled": controlled,
            "uncompute": uncompute,
        }
    )
    return circ
