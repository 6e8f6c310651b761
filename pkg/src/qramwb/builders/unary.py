"""Check-address-and-write lookup: one comparator per nonzero table entry."""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable
from .common import comparator_negations, out_ref


def build_unary(table: BitTable) -> Circuit:
    """Lookup circuit that iterates over every table entry.

    For each entry with a nonzero word, a comparator conjunction over the
    full address register fires when the address equals that entry's index.
    Single-bit words fuse the comparator and the data write into one
    multi-controlled NOT on the output; wider words compute a comparator
    ancilla, fan the word out, and uncompute the ancilla.

    The comparator ancilla is declared (and therefore counted in width)
    whenever it is used; whether such ancillas belong in the width of this
    construction is ambiguous, and we resolve the ambiguity by counting.
    """
    n = table.address_bits
    w = table.word_width
    registers = [("addr", n), ("out", w)]
    use_cmp = w > 1
    if use_cmp:
        registers.append(("cmp", 1))
    circ = Circuit(registers)
    addr = [QubitRef("addr", i) for i in range(n)]
    cmp0 = QubitRef("cmp", 0)
    for index, word in enumerate(table.entries):
        if word == 0:
            continue
        negs = comparator_negations(index, n)
        if not use_cmp:
            circ._append_inplace(
                Gate(
                    GateKind.MULTI_CNOT,
                    (*addr, out_ref(0)),
                    {"negations": negs},
                )
            )
            continue
        circ._append_inplace(
            Gate(GateKind.MULTI_CNOT, (*addr, cmp0), {"negations": negs})
        )
        targets = [out_ref(b) for b in range(w) if (word >> b) & 1]
        if len(targets) == 1:
            circ._append_inplace(Gate(GateKind.CNOT, (cmp0, targets[0])))
        else:
            circ._append_inplace(Gate(GateKind.FANOUT_CNOT, (cmp0, *targets)))
        circ._append_inplace(
            Gate(
                GateKind.MULTI_CNOT,
                (*addr, cmp0),
                {"negations": negs, "uncompute": True},
            )
        )
    circ.meta.update(
        {
            "builder": "unary",
            "n": table.n,
            "word_width": w,
            "nonzero_entries": sum(1 for e in table.entries if e),
        }
    )
    return circ
