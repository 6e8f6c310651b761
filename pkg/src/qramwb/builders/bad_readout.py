"""Suboptimal tree readout: one-hot token plus a global parity layer.

A single |1> token descends a binary tree of address-controlled swaps into
an N-cell slot layer, table bits are copied from the occupied slot into a
readout layer L, and the output is the parity of L, taken as a single
multi-target CNOT conjugated by Hadamards.  Every address bit directly
controls all the swaps of its tree level and every cell of L feeds the
parity, so roughly one error anywhere among Theta(N) locations spoils the
query: this readout needs per-component error rates shrinking like 1/N,
in contrast to the routed-readout tree.
"""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable


def build_bad_readout_bb(table: BitTable) -> Circuit:
    padded = table.padded_to_power_of_two()
    n = padded.address_bits
    N = padded.n
    w = padded.word_width
    registers = [("addr", n), ("out", w), ("slot", N), ("L", N * w)]
    circ = Circuit(registers)
    addr = [QubitRef("addr", i) for i in range(n)]

    token = Gate(GateKind.X, (QubitRef("slot", 0),))
    circ._append_inplace(token)

    descent: list[Gate] = []
    for level in range(n - 1, -1, -1):
        for k in range(1 << (n - 1 - level)):
            a = k << (level + 1)
            b = a + (1 << level)
            g = Gate(
                GateKind.CSWAP,
                (addr[level], QubitRef("slot", a), QubitRef("slot", b)),
            )
            descent.append(g)
            circ._append_inplace(g)

    marks = [
        Gate(
            GateKind.CNOT,
            (QubitRef("slot", i), QubitRef("L", i * w + b)),
        )
        for i, word in enumerate(padded.entries)
        for b in range(w)
        if (word >> b) & 1
    ]
    for g in marks:
        circ._append_inplace(g)

    for plane in range(w):
        cells = tuple(QubitRef("L", i * w + plane) for i in range(N))
        circ._append_inplace(
            Gate(
                GateKind.FANOUT_CNOT,
                (QubitRef("out", plane), *cells),
                {"h_conjugated": True},
            )
        )

    for g in marks:
        circ._append_inplace(g)
    for g in reversed(descent):
        circ._append_inplace(g)
    circ._append_inplace(token)

    circ.meta.update(
        {
            "builder": "bad_readout_bb",
            "n": N,
            "padded_from": table.n if padded.n != table.n else None,
            "word_width": w,
            "readout_layer_qubits": N * w,
        }
    )
    return circ
