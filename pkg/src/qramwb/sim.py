"""Exact sparse-amplitude simulation.

Every builder gate is a permutation of computational basis states, so a
finite map from basis keys to amplitudes simulates them exactly; only H
enlarges the support.  Basis keys are integers in register-major order,
little-endian within each register, fixed by the circuit's register list.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .circuit import Circuit, Gate, GateKind, QubitRef

NORM_TOL = 1e-12
PRUNE_TOL = 1e-15
DEFAULT_SUPPORT_CAP = 1 << 16


class SimulationError(RuntimeError):
    pass


class SupportCapExceeded(SimulationError):
    pass


class QubitLayout:
    """Fixed register-major bit layout for basis keys."""

    def __init__(self, registers):
        self.registers = tuple((str(n), int(s)) for n, s in registers)
        self.offsets: dict[str, int] = {}
        total = 0
        for name, size in self.registers:
            self.offsets[name] = total
            total += size
        self.total = total

    def bit(self, q: QubitRef) -> int:
        return self.offsets[q.register] + q.index

    def pack(self, values: dict[str, int]) -> int:
        key = 0
        for name, value in values.items():
            key |= int(value) << self.offsets[name]
        return key

    def extract(self, key: int, name: str) -> int:
        size = dict(self.registers)[name]
        return (key >> self.offsets[name]) & ((1 << size) - 1)

    @classmethod
    def of(cls, circuit: Circuit) -> "QubitLayout":
        return cls(circuit.registers)


@dataclass
class SparseState:
    layout: QubitLayout
    amplitudes: dict[int, complex] = field(default_factory=dict)
    support_cap: int = DEFAULT_SUPPORT_CAP

    @classmethod
    def basis(cls, layout: QubitLayout, values: dict[str, int] | int = 0, **kw):
        key = values if isinstance(values, int) else layout.pack(values)
        return cls(layout, {key: 1.0 + 0.0j}, **kw)

    def norm_sq(self) -> float:
        return sum((a * a.conjugate()).real for a in self.amplitudes.values())

    def check_norm(self) -> None:
        if abs(self.norm_sq() - 1.0) > NORM_TOL:
            raise SimulationError(f"norm drifted to {self.norm_sq()}")

    def support(self) -> int:
        return len(self.amplitudes)


def _controls_fire(key: int, bits, negs) -> bool:
    for b, neg in zip(bits, negs):
        if (((key >> b) & 1) == 0) != neg:
            return False
    return True


def apply_gate(state: SparseState, gate: Gate) -> SparseState:
    """Apply one gate, returning a new state.  Permutations keep support size."""
    layout = state.layout
    kind = gate.kind
    if kind == GateKind.CLASSICAL_PHASE_FIXUP:
        return SparseState(layout, dict(state.amplitudes), state.support_cap)

    if kind == GateKind.H:
        b = layout.bit(gate.operands[0])
        mask = 1 << b
        s = 1 / math.sqrt(2)
        out: dict[int, complex] = {}
        for key, amp in state.amplitudes.items():
            lo = key & ~mask
            hi = key | mask
            out[lo] = out.get(lo, 0) + amp * s
            sign = -1.0 if key & mask else 1.0
            out[hi] = out.get(hi, 0) + amp * s * sign
        out = {k: a for k, a in out.items() if abs(a) > PRUNE_TOL}
        if len(out) > state.support_cap:
            raise SupportCapExceeded(
                f"support {len(out)} exceeds cap {state.support_cap}"
            )
        return SparseState(layout, out, state.support_cap)

    negs = gate.negations()
    out = {}
    if kind == GateKind.X:
        mask = 1 << layout.bit(gate.operands[0])
        for key, amp in state.amplitudes.items():
            out[key ^ mask] = amp
    elif kind == GateKind.CNOT:
        c = layout.bit(gate.operands[0])
        mask = 1 << layout.bit(gate.operands[1])
        for key, amp in state.amplitudes.items():
            out[key ^ (mask if (key >> c) & 1 else 0)] = amp
    elif kind in (GateKind.TOFFOLI, GateKind.MULTI_CNOT):
        *ctrl_refs, target = gate.operands
        bits = [layout.bit(q) for q in ctrl_refs]
        mask = 1 << layout.bit(target)
        for key, amp in state.amplitudes.items():
            out[key ^ (mask if _controls_fire(key, bits, negs) else 0)] = amp
    elif kind == GateKind.AND_COMPUTE:
        c1, c2, target = gate.operands
        bits = [layout.bit(c1), layout.bit(c2)]
        mask = 1 << layout.bit(target)
        for key, amp in state.amplitudes.items():
            if key & mask:
                raise SimulationError("AND_COMPUTE target is not fresh |0>")
            out[key ^ (mask if _controls_fire(key, bits, negs) else 0)] = amp
    elif kind == GateKind.AND_UNCOMPUTE:
        c1, c2, target = gate.operands
        bits = [layout.bit(c1), layout.bit(c2)]
        mask = 1 << layout.bit(target)
        for key, amp in state.amplitudes.items():
            want = _controls_fire(key, bits, negs)
            have = bool(key & mask)
            if want != have:
                raise SimulationError(
                    "AND_UNCOMPUTE target inconsistent with its controls"
                )
            out[key & ~mask] = amp
    elif kind == GateKind.CSWAP:
        ctrl, qa, qb = gate.operands
        c = layout.bit(ctrl)
        ba, bb = layout.bit(qa), layout.bit(qb)
        neg = negs[0]
        for key, amp in state.amplitudes.items():
            fire = bool((key >> c) & 1) != neg
            if fire and ((key >> ba) & 1) != ((key >> bb) & 1):
                key ^= (1 << ba) | (1 << bb)
            out[key] = amp
    elif kind == GateKind.FANOUT_CNOT:
        ctrl, *targets = gate.operands
        c = layout.bit(ctrl)
        tbits = [layout.bit(t) for t in targets]
        if gate.flag("h_conjugated"):
            cmask = 1 << c
            for key, amp in state.amplitudes.items():
                parity = 0
                for tb in tbits:
                    parity ^= (key >> tb) & 1
                out[key ^ (cmask if parity else 0)] = amp
        else:
            mask = 0
            for tb in tbits:
                mask |= 1 << tb
            neg = negs[0]
            for key, amp in state.amplitudes.items():
                fire = bool((key >> c) & 1) != neg
                out[key ^ (mask if fire else 0)] = amp
    else:
        raise SimulationError(f"cannot simulate gate kind {kind}")
    return SparseState(layout, out, state.support_cap)


def run(circuit: Circuit, state: SparseState) -> SparseState:
    for layer in circuit.layers:
        for gate in layer:
            state = apply_gate(state, gate)
    state.check_norm()
    return state


def states_close(a: SparseState, b: SparseState, tol: float = 1e-10) -> float:
    """Max absolute amplitude difference between two states."""
    keys = set(a.amplitudes) | set(b.amplitudes)
    return max(
        (abs(a.amplitudes.get(k, 0) - b.amplitudes.get(k, 0)) for k in keys),
        default=0.0,
    )
