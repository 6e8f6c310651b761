"""Batched lookup: sort memory and query records together, copy, unsort.

Memory words are augmented to (address, word, 1) records and each query
register to (address, 0, 0).  A bitonic network of reversible
compare-and-swap blocks sorts all records by (address, flag-descending),
which parks every query directly after the memory record it addresses.  A
sequential cascade of equality-controlled copies then moves each word into
all adjacent same-address queries, and the network is replayed backwards
off the recorded comparison bits to put every record back.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..circuit import Circuit, Gate, GateKind, QubitRef
from ..tables import BitTable


@dataclass(frozen=True)
class _Record:
    sent: QubitRef
    addr: tuple[QubitRef, ...]  # LSB first
    flag: QubitRef
    data: tuple[QubitRef, ...]

    def key_bits(self) -> list[tuple[QubitRef, bool]]:
        """(qubit, inverted-sense) pairs, most significant first.

        Sort key is (sentinel, address, NOT flag): pads last, addresses
        ascending, and memory records (flag=1) ahead of queries at ties.
        """
        bits = [(self.sent, False)]
        bits.extend((q, False) for q in reversed(self.addr))
        bits.append((self.flag, True))
        return bits

    def payload_bits(self) -> list[QubitRef]:
        return [self.sent, *self.addr, self.flag, *self.data]


def _bitonic_pairs(m: int) -> list[tuple[int, int]]:
    """(low, high) comparator pairs; after all of them the keys ascend."""
    pairs = []
    size = 2
    while size <= m:
        stride = size // 2
        while stride >= 1:
            for i in range(m):
                partner = i ^ stride
                if partner > i:
                    if i & size:
                        pairs.append((partner, i))
                    else:
                        pairs.append((i, partner))
            stride //= 2
        size *= 2
    return pairs


def build_parallel_sorted(
    table: BitTable, query_count: int, network: str = "bitonic"
) -> Circuit:
    if network != "bitonic":
        raise ValueError(f"unsupported sorting network {network!r}")
    if query_count < 1:
        raise ValueError("need at least one query register")
    a = table.address_bits
    w = table.word_width
    n_mem = table.n
    k = query_count
    m = n_mem + k
    m_pad = 1 << max(1, (m - 1).bit_length())
    n_pads = m_pad - m
    key_len = a + 2
    comparators = len(_bitonic_pairs(m_pad))

    registers = []
    for j in range(k):
        registers.append((f"qaddr{j}", a))
        registers.append((f"qout{j}", w))
    registers.extend(
        [("maddr", n_mem * a), ("mdata", n_mem * w), ("mflag", n_mem)]
    )
    if n_pads:
        registers.extend(
            [("paddr", n_pads * a), ("pdata", n_pads * w), ("pflag", n_pads)]
        )
    registers.extend(
        [
            ("qflag", k),
            ("sent", m_pad),
            ("cmp", comparators),
            ("chain", m_pad * (key_len - 1)),
            ("eq", 1),
        ]
    )
    circ = Circuit(registers)

    records: list[_Record] = []
    for i in range(n_mem):
        records.append(
            _Record(
                QubitRef("sent", i),
                tuple(QubitRef("maddr", i * a + b) for b in range(a)),
                QubitRef("mflag", i),
                tuple(QubitRef("mdata", i * w + b) for b in range(w)),
            )
        )
    for j in range(k):
        records.append(
            _Record(
                QubitRef("sent", n_mem + j),
                tuple(QubitRef(f"qaddr{j}", b) for b in range(a)),
                QubitRef("qflag", j),
                tuple(QubitRef(f"qout{j}", b) for b in range(w)),
            )
        )
    for p in range(n_pads):
        records.append(
            _Record(
                QubitRef("sent", m + p),
                tuple(QubitRef("paddr", p * a + b) for b in range(a)),
                QubitRef("pflag", p),
                tuple(QubitRef("pdata", p * w + b) for b in range(w)),
            )
        )

    # classical set-up of the augmented memory (and pad sentinels)
    init: list[Gate] = []
    for i in range(n_mem):
        rec = records[i]
        for b in range(a):
            if (i >> b) & 1:
                init.append(Gate(GateKind.X, (rec.addr[b],)))
        init.append(Gate(GateKind.X, (rec.flag,)))
        for b in range(w):
            if (table.entries[i] >> b) & 1:
                init.append(Gate(GateKind.X, (rec.data[b],)))
    for p in range(n_pads):
        init.append(Gate(GateKind.X, (records[m + p].sent,)))
    for g in init:
        circ._append_inplace(g)

    sort_gates: list[Gate] = []

    def emit(gate: Gate) -> None:
        sort_gates.append(gate)
        circ._append_inplace(gate)

    def comparator(lo: int, hi: int, cmp_ref: QubitRef) -> None:
        """Record [key(lo) > key(hi)] in cmp_ref and swap the records on it."""
        rec_a, rec_b = records[lo], records[hi]
        bits_a = rec_a.key_bits()
        bits_b = rec_b.key_bits()
        chain = [
            QubitRef("chain", lo * (key_len - 1) + t) for t in range(key_len - 1)
        ]
        for t in range(key_len):
            (qa, sense) = bits_a[t]
            (qb, _) = bits_b[t]
            emit(Gate(GateKind.CNOT, (qa, qb)))  # qb now holds the XOR
            if t == 0:
                emit(
                    Gate(
                        GateKind.MULTI_CNOT,
                        (qa, qb, cmp_ref),
                        {"negations": (sense, False)},
                    )
                )
            else:
                emit(
                    Gate(
                        GateKind.MULTI_CNOT,
                        (chain[t - 1], qa, qb, cmp_ref),
                        {"negations": (False, sense, False)},
                    )
                )
            if t < key_len - 1:
                if t == 0:
                    emit(
                        Gate(
                            GateKind.MULTI_CNOT,
                            (qb, chain[0]),
                            {"negations": (True,)},
                        )
                    )
                else:
                    emit(
                        Gate(
                            GateKind.AND_COMPUTE,
                            (chain[t - 1], qb, chain[t]),
                            {"negations": (False, True)},
                        )
                    )
        for t in range(key_len - 1, -1, -1):
            (qa, _) = bits_a[t]
            (qb, _) = bits_b[t]
            if t < key_len - 1:
                if t == 0:
                    emit(
                        Gate(
                            GateKind.MULTI_CNOT,
                            (qb, chain[0]),
                            {"negations": (True,)},
                        )
                    )
                else:
                    emit(
                        Gate(
                            GateKind.AND_UNCOMPUTE,
                            (chain[t - 1], qb, chain[t]),
                            {"negations": (False, True)},
                        )
                    )
            emit(Gate(GateKind.CNOT, (qa, qb)))
        for qa, qb in zip(rec_a.payload_bits(), rec_b.payload_bits()):
            emit(Gate(GateKind.CSWAP, (cmp_ref, qa, qb)))

    for idx, (lo, hi) in enumerate(_bitonic_pairs(m_pad)):
        comparator(lo, hi, QubitRef("cmp", idx))

    # cascade: copy words into every adjacent same-address query record
    eq = QubitRef("eq", 0)
    for j in range(m_pad - 1):
        rec_a, rec_b = records[j], records[j + 1]
        pairs = list(zip((rec_a.sent, *rec_a.addr), (rec_b.sent, *rec_b.addr)))
        for qa, qb in pairs:
            circ._append_inplace(Gate(GateKind.CNOT, (qa, qb)))
        negs = (True,) * len(pairs)
        circ._append_inplace(
            Gate(
                GateKind.MULTI_CNOT,
                (*(qb for _, qb in pairs), eq),
                {"negations": negs},
            )
        )
        for b in range(w):
            circ._append_inplace(
                Gate(GateKind.TOFFOLI, (eq, rec_a.data[b], rec_b.data[b]))
            )
        circ._append_inplace(
            Gate(
                GateKind.MULTI_CNOT,
                (*(qb for _, qb in pairs), eq),
                {"negations": negs, "uncompute": True},
            )
        )
        for qa, qb in pairs:
            circ._append_inplace(Gate(GateKind.CNOT, (qa, qb)))

    # unsort by replaying the comparison record backwards
    for gate in reversed(sort_gates):
        circ._append_inplace(gate.inverse())

    for g in init:
        circ._append_inplace(g)

    circ.meta.update(
        {
            "builder": "parallel_sorted",
            "n": n_mem,
            "word_width": w,
            "query_count": k,
            "network": network,
            "network_size": m_pad,
            "comparator_count": comparators,
        }
    )
    return circ
