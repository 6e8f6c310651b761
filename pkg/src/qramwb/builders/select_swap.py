"""Two-stage lookup: page retrieval, then in-page quantum extraction.

The table is regrouped into N/2^l pages of 2^l consecutive words.  A
recursive lookup addressed by the high bits writes the whole page into an
auxiliary register, a swap-tree access addressed by the low l bits
extracts the wanted word into the output, and the page register is then
uncomputed, either by re-running the inverse lookup (coherent) or by
measurement-based release with a classical phase fix-up marker.
Page size near sqrt(N) balances the two stages' non-Clifford cost.
"""
from __future__ import annotations

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable
from .recursive import emit_recursive_lookup
from .unary import build_unary


def _paged_entries(padded: BitTable, page_log: int) -> list[int]:
    """Group 2^page_log consecutive words into one wide word per page."""
    span = 1 << page_log
    w = padded.word_width
    pages = []
    for p in range(padded.n // span):
        word = 0
        for j in range(span):
            word |= padded.entries[p * span + j] << (j * w)
        pages.append(word)
    return pages


def build_select_swap(
    table: BitTable, page_log: int, uncompute: str = "coherent"
) -> Circuit:
    if uncompute not in ("coherent", "measurement_based"):
        raise ValueError(f"unknown uncompute mode {uncompute!r}")
    padded = table.padded_to_power_of_two()
    n = padded.address_bits
    if not 0 <= page_log <= n:
        raise ValueError(f"page_log must be in [0, {n}]")
    if page_log == 0:
        # degenerate paging: a plain unary lookup
        circ = build_unary(table)
        circ.meta.update(
            {"builder": "select_swap", "page_log": 0, "pages": table.n}
        )
        return circ

    w = padded.word_width
    span = 1 << page_log
    pages = _paged_entries(padded, page_log)
    n_pages = len(pages)
    page_bits = n - page_log
    aux_size = span * w
    stack_size = max(0, page_bits - 1)
    fan_size = span // 2 if page_log >= 2 else 0
    registers = [("addr", n), ("out", w), ("aux", aux_size)]
    if stack_size:
        registers.append(("stack", stack_size))
    if fan_size:
        registers.append(("fan", fan_size))
    circ = Circuit(registers)
    high = [QubitRef("addr", i) for i in range(page_log, n)]
    low = [QubitRef("addr", i) for i in range(page_log)]

    # stage 1: write the addressed page into aux
    lookup = Circuit(circ.registers)
    if page_bits == 0:
        for b in range(aux_size):
            if (pages[0] >> b) & 1:
                lookup._append_inplace(Gate(GateKind.X, (QubitRef("aux", b),)))
    else:
        emit_recursive_lookup(lookup, pages, aux_size, high, "aux")
    for g in lookup.gates():
        circ._append_inplace(g)

    # stage 2: swap-tree extraction of the in-page word, low bits as address
    from .fanout_swap import emit_swap_tree

    def aux_ref(cell: int, plane: int) -> QubitRef:
        return QubitRef("aux", cell * w + plane)

    emit_swap_tree(circ, page_log, aux_ref, low, "fan", planes=w)
    for plane in range(w):
        circ._append_inplace(
            Gate(GateKind.CNOT, (aux_ref(0, plane), QubitRef("out", plane)))
        )
    emit_swap_tree(circ, page_log, aux_ref, low, "fan", planes=w, reverse=True)

    # stage 3: uncompute the page register
    inverse_lookup = lookup.inverse()
    if uncompute == "coherent":
        for g in inverse_lookup.gates():
            circ._append_inplace(g)
    else:
        # same permutation as the coherent inverse, but every conjunction is
        # tagged as measurement-based (T-free); the phase correction that a
        # real device would owe is marked on the released register
        for g in inverse_lookup.gates():
            if g.kind in (GateKind.TOFFOLI, GateKind.MULTI_CNOT, GateKind.AND_COMPUTE):
                flags = dict(g.flags)
                flags["uncompute"] = True
                g = Gate(g.kind, g.operands, flags)
            circ._append_inplace(g)
        circ._append_inplace(
            Gate(
                GateKind.CLASSICAL_PHASE_FIXUP,
                tuple(QubitRef("aux", b) for b in range(aux_size)),
            )
        )

    circ.meta.update(
        {
            "builder": "select_swap",
            "n": padded.n,
            "padded_from": table.n if padded.n != table.n else None,
            "word_width": w,
            "page_log": page_log,
            "pages": n_pages,
            "page_span": span,
            "uncompute": uncompute,
        }
    )
    return circ
