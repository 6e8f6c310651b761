"""Tree-of-routers lookup circuit.

Each internal tree node carries a routing qubit and a control qubit.
Address bits enter at the root and descend through routing qubits until a
control-absorption step parks them as the node controls along the active
path; the data layer is then routed back up to the root, copied out, and
the whole schedule is mirrored to restore every ancilla.  Gates are packed
greedily, so successive address bits pipeline and the depth stays
logarithmic in the table size.
"""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable


def _node(level: int, pos: int) -> int:
    return (1 << level) - 1 + pos


def build_bucket_brigade(table: BitTable) -> Circuit:
    padded = table.padded_to_power_of_two()
    n = padded.address_bits
    N = padded.n
    w = padded.word_width
    nodes = N - 1
    registers = [
        ("addr", n),
        ("out", w),
        ("r", nodes * w),
        ("c", nodes),
        ("leaf", N * w),
    ]
    circ = Circuit(registers)
    addr = [QubitRef("addr", i) for i in range(n)]

    def r_ref(level: int, pos: int, plane: int) -> QubitRef:
        return QubitRef("r", _node(level, pos) * w + plane)

    def c_ref(level: int, pos: int) -> QubitRef:
        return QubitRef("c", _node(level, pos))

    def leaf_ref(index: int, plane: int) -> QubitRef:
        return QubitRef("leaf", index * w + plane)

    forward: list[Gate] = []

    def emit(gate: Gate) -> None:
        forward.append(gate)
        circ._append_inplace(gate)

    def routing_pair(level: int, pos: int, plane: int) -> None:
        """Move a routing-plane value one level down/up, steered by the control."""
        ctrl = c_ref(level, pos)
        here = r_ref(level, pos, plane)
        if level + 1 < n:
            left = r_ref(level + 1, 2 * pos, plane)
            right = r_ref(level + 1, 2 * pos + 1, plane)
        else:
            left = leaf_ref(2 * pos, plane)
            right = leaf_ref(2 * pos + 1, plane)
        emit(Gate(GateKind.CSWAP, (ctrl, here, left), {"negations": (True,)}))
        emit(Gate(GateKind.CSWAP, (ctrl, here, right)))

    def control_pair(level: int, pos: int) -> None:
        """Absorb the routed bit into one of the two child controls."""
        ctrl = c_ref(level, pos)
        here = r_ref(level, pos, 0)
        left = c_ref(level + 1, 2 * pos)
        right = c_ref(level + 1, 2 * pos + 1)
        emit(Gate(GateKind.CSWAP, (ctrl, here, left), {"negations": (True,)}))
        emit(Gate(GateKind.CSWAP, (ctrl, here, right)))

    # classical pre-pass: mark leaves holding 1-bits of the table
    marks = [
        Gate(GateKind.X, (leaf_ref(i, b),), {"classical_mark": True})
        for i, word in enumerate(padded.entries)
        for b in range(w)
        if (word >> b) & 1
    ]
    for g in marks:
        circ._append_inplace(g)

    # load address bits, most significant at the root
    emit(Gate(GateKind.CNOT, (addr[n - 1], c_ref(0, 0))))
    emit(Gate(GateKind.CNOT, (c_ref(0, 0), addr[n - 1])))
    cswaps = 0
    for i in range(1, n):
        bit = addr[n - 1 - i]
        emit(Gate(GateKind.CNOT, (bit, r_ref(0, 0, 0))))
        emit(Gate(GateKind.CNOT, (r_ref(0, 0, 0), bit)))
        for level in range(i - 1):
            for pos in range(1 << level):
                routing_pair(level, pos, 0)
                cswaps += 2
        for pos in range(1 << (i - 1)):
            control_pair(i - 1, pos)
            cswaps += 2

    # route the addressed word up to the root, one plane per word bit
    for plane in range(w):
        for level in range(n - 1, -1, -1):
            for pos in range(1 << level):
                routing_pair(level, pos, plane)
                cswaps += 2

    for plane in range(w):
        circ._append_inplace(
            Gate(GateKind.CNOT, (r_ref(0, 0, plane), QubitRef("out", plane)))
        )

    # mirror everything to restore the tree, then clear the classical marks
    for gate in reversed(forward):
        circ._append_inplace(gate.inverse())
    for g in marks:
        circ._append_inplace(g)

    circ.meta.update(
        {
            "builder": "bucket_brigade",
            "n": N,
            "padded_from": table.n if padded.n != table.n else None,
            "word_width": w,
            "routing_ancillas": nodes * (1 + w),
            "cswap_count": 2 * cswaps,
            "cswap_closed_form": 4 * (N - n - 1) + 4 * w * (N - 1),
        }
    )
    return circ
