"""Vectorized classical-basis execution of permutation circuits.

All builder gates permute computational basis states, so a batch of basis
states is a boolean matrix (trial, qubit) and every gate is a handful of
vectorized boolean operations.  This engine backs both the functional
verifiers (exact on basis inputs) and the noise trajectory sampler.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, GateKind
from .sim import QubitLayout


class CompiledCircuit:
    """Circuit lowered to flat qubit indices and per-layer closures."""

    def __init__(self, circuit: Circuit):
        self.layout = QubitLayout.of(circuit)
        self.n_qubits = self.layout.total
        self.layers: list[list] = []
        self.layer_sites: list[np.ndarray] = []
        bit = self.layout.bit
        for layer in circuit.layers:
            ops = []
            sites: list[int] = []
            for g in layer:
                kind = g.kind
                if kind == GateKind.CLASSICAL_PHASE_FIXUP:
                    continue
                idx = [bit(q) for q in g.operands]
                negs = g.negations()
                if not g.flag("classical_mark"):
                    sites.extend(idx)
                if kind == GateKind.X:
                    ops.append(("X", idx[0]))
                elif kind == GateKind.CNOT:
                    ops.append(("CNOT", idx[0], idx[1]))
                elif kind in (
                    GateKind.TOFFOLI,
                    GateKind.AND_COMPUTE,
                    GateKind.AND_UNCOMPUTE,
                ):
                    ops.append(("CCX", idx[0], idx[1], idx[2], negs[0], negs[1]))
                elif kind == GateKind.MULTI_CNOT:
                    ops.append(
                        (
                            "MCX",
                            np.array(idx[:-1]),
                            np.array(negs, dtype=bool),
                            idx[-1],
                        )
                    )
                elif kind == GateKind.CSWAP:
                    ops.append(("CSWAP", idx[0], idx[1], idx[2], negs[0]))
                elif kind == GateKind.FANOUT_CNOT:
                    if g.flag("h_conjugated"):
                        ops.append(("PARITY", idx[0], np.array(idx[1:])))
                    else:
                        ops.append(("FANOUT", idx[0], np.array(idx[1:]), negs[0]))
                else:
                    raise ValueError(f"classical engine cannot run {kind}")
            self.layers.append(ops)
            self.layer_sites.append(np.array(sorted(set(sites)), dtype=np.int64))

    def run(self, states: np.ndarray, inject=None) -> np.ndarray:
        """Run the batch in place.  ``states`` is (trials, n_qubits) bool.

        ``inject(layer_index, states)`` is called before each layer and may
        flip bits (noise injection); the noiseless reference passes None.
        """
        s = states
        for t, ops in enumerate(self.layers):
            if inject is not None:
                inject(t, s)
            for op in ops:
                code = op[0]
                if code == "CNOT":
                    s[:, op[2]] ^= s[:, op[1]]
                elif code == "CSWAP":
                    _, c, a, b, neg = op
                    fire = s[:, c] ^ neg
                    diff = (s[:, a] ^ s[:, b]) & fire
                    s[:, a] ^= diff
                    s[:, b] ^= diff
                elif code == "CCX":
                    _, c1, c2, tgt, n1, n2 = op
                    s[:, tgt] ^= (s[:, c1] ^ n1) & (s[:, c2] ^ n2)
                elif code == "X":
                    s[:, op[1]] ^= True
                elif code == "MCX":
                    _, ctrls, negs, tgt = op
                    s[:, tgt] ^= np.logical_and.reduce(s[:, ctrls] ^ negs, axis=1)
                elif code == "FANOUT":
                    _, c, targets, neg = op
                    s[:, targets] ^= (s[:, c] ^ neg)[:, None]
                elif code == "PARITY":
                    _, c, targets = op
                    s[:, c] ^= np.logical_xor.reduce(s[:, targets], axis=1)
                else:
                    raise AssertionError(code)
        return s

    def register_columns(self, name: str) -> np.ndarray:
        off = self.layout.offsets[name]
        size = dict(self.layout.registers)[name]
        return np.arange(off, off + size, dtype=np.int64)


def basis_batch(compiled: CompiledCircuit, values: list[dict[str, int]]) -> np.ndarray:
    """Build a (len(values), n_qubits) boolean batch of basis states."""
    out = np.zeros((len(values), compiled.n_qubits), dtype=bool)
    for row, assignment in enumerate(values):
        key = compiled.layout.pack(assignment)
        while key:
            b = (key & -key).bit_length() - 1
            out[row, b] = True
            key &= key - 1
    return out
