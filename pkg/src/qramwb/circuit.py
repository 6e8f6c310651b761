"""Circuit intermediate representation and resource accounting.

Circuits are layered lists of permutation-style gates over named qubit
registers.  Gates within a layer act on pairwise-disjoint qubits, so the
number of layers is the circuit depth under unit-depth scheduling.  All
memory-access builders emit this IR; the simulators and the noise engine
consume it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple


class QubitRef(NamedTuple):
    """A single qubit, addressed as (register name, index within register)."""

    register: str
    index: int


class GateKind:
    """Gate vocabulary of the IR.

    AND_COMPUTE writes the conjunction of two controls into a fresh |0>
    target and carries the non-Clifford cost; AND_UNCOMPUTE is its
    measurement-based inverse and is free of that cost.
    CLASSICAL_PHASE_FIXUP marks where a measurement-based uncomputation
    would apply its classically-controlled phase correction.
    """

    X = "X"
    H = "H"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    CSWAP = "CSWAP"
    FANOUT_CNOT = "FANOUT_CNOT"
    MULTI_CNOT = "MULTI_CNOT"
    AND_COMPUTE = "AND_COMPUTE"
    AND_UNCOMPUTE = "AND_UNCOMPUTE"
    CLASSICAL_PHASE_FIXUP = "CLASSICAL_PHASE_FIXUP"

    ALL = frozenset(
        {
            X,
            H,
            CNOT,
            TOFFOLI,
            CSWAP,
            FANOUT_CNOT,
            MULTI_CNOT,
            AND_COMPUTE,
            AND_UNCOMPUTE,
            CLASSICAL_PHASE_FIXUP,
        }
    )


class GateError(ValueError):
    pass


class RegisterError(ValueError):
    pass


def _freeze_flags(flags: dict | None) -> tuple:
    if not flags:
        return ()
    items = []
    for key in sorted(flags):
        value = flags[key]
        if isinstance(value, list):
            value = tuple(value)
        items.append((key, value))
    return tuple(items)


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind, ordered operands, and optional flags.

    Flags used by the toolkit:
      negations      per-control polarity (True = trigger on |0>)
      uncompute      gate is the uncompute half of a compute/uncompute pair
      classical_mark X applied by the classical controller while loading
                     classical data; carries no quantum gate cost
      h_conjugated   FANOUT_CNOT conjugated by H on every operand, i.e. a
                     parity accumulation of the targets into the control
    """

    kind: str
    operands: tuple[QubitRef, ...]
    flags: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "operands", tuple(QubitRef(*q) for q in self.operands)
        )
        if not isinstance(self.flags, tuple):
            object.__setattr__(self, "flags", _freeze_flags(self.flags))
        self._check()

    def _check(self) -> None:
        kind, ops = self.kind, self.operands
        if kind not in GateKind.ALL:
            raise GateError(f"unknown gate kind {kind!r}")
        if len(set(ops)) != len(ops):
            raise GateError(f"{kind} has repeated operand")
        n = len(ops)
        fixed_arity = {
            GateKind.X: 1,
            GateKind.H: 1,
            GateKind.CNOT: 2,
            GateKind.TOFFOLI: 3,
            GateKind.CSWAP: 3,
            GateKind.AND_COMPUTE: 3,
            GateKind.AND_UNCOMPUTE: 3,
        }
        if kind in fixed_arity and n != fixed_arity[kind]:
            raise GateError(f"{kind} needs {fixed_arity[kind]} operands, got {n}")
        if kind == GateKind.FANOUT_CNOT and n < 2:
            raise GateError("FANOUT_CNOT needs a control and at least one target")
        if kind == GateKind.MULTI_CNOT and n < 2:
            raise GateError("MULTI_CNOT needs at least one control and a target")
        if kind == GateKind.CLASSICAL_PHASE_FIXUP and n < 1:
            raise GateError("CLASSICAL_PHASE_FIXUP marks at least one qubit")
        negs = self.flag("negations")
        if negs is not None and len(negs) != self.num_controls():
            raise GateError(f"{kind}: negation flags do not match control count")

    def flag(self, key: str, default=None):
        for k, v in self.flags:
            if k == key:
                return v
        return default

    def num_controls(self) -> int:
        kind = self.kind
        if kind in (GateKind.CNOT, GateKind.CSWAP, GateKind.FANOUT_CNOT):
            return 1
        if kind in (GateKind.TOFFOLI, GateKind.AND_COMPUTE, GateKind.AND_UNCOMPUTE):
            return 2
        if kind == GateKind.MULTI_CNOT:
            return len(self.operands) - 1
        return 0

    def negations(self) -> tuple[bool, ...]:
        negs = self.flag("negations")
        if negs is None:
            return (False,) * self.num_controls()
        return tuple(bool(b) for b in negs)

    def inverse(self) -> "Gate":
        """Inverse gate.  Everything here is self-inverse except the AND pair."""
        if self.kind == GateKind.AND_COMPUTE:
            return Gate(GateKind.AND_UNCOMPUTE, self.operands, self.flags)
        if self.kind == GateKind.AND_UNCOMPUTE:
            return Gate(GateKind.AND_COMPUTE, self.operands, self.flags)
        return self


class Circuit:
    """Layered circuit over declared registers.

    Instances handed out by builders are treated as immutable; ``append``
    returns a new circuit.  Internal builders use ``_append_inplace`` while
    constructing and never mutate afterwards.
    """

    def __init__(self, registers: Iterable[tuple[str, int]]):
        regs = [(str(name), int(size)) for name, size in registers]
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            raise RegisterError("duplicate register name")
        for name, size in regs:
            if size < 1:
                raise RegisterError(f"register {name!r} must have size >= 1")
        self.registers: tuple[tuple[str, int], ...] = tuple(regs)
        self._sizes = dict(regs)
        self.layers: list[list[Gate]] = []
        # highest layer index (so far) touching each qubit, for greedy packing
        self._frontier: dict[QubitRef, int] = {}
        self.meta: dict = {}

    # -- construction -----------------------------------------------------

    def _check_operands(self, gate: Gate) -> None:
        for q in gate.operands:
            size = self._sizes.get(q.register)
            if size is None:
                raise RegisterError(f"register {q.register!r} not declared")
            if not 0 <= q.index < size:
                raise RegisterError(
                    f"{q.register}[{q.index}] out of range (size {size})"
                )

    def _append_inplace(self, gate: Gate, packing: str = "greedy") -> None:
        self._check_operands(gate)
        if packing == "greedy":
            last = max(
                (self._frontier.get(q, -1) for q in gate.operands), default=-1
            )
            target = last + 1
        elif packing == "new-layer":
            target = len(self.layers)
        else:
            raise ValueError(f"unknown packing {packing!r}")
        while len(self.layers) <= target:
            self.layers.append([])
        self.layers[target].append(gate)
        for q in gate.operands:
            self._frontier[q] = target

    def append(self, gate: Gate, packing: str = "greedy") -> "Circuit":
        new = self.copy()
        new._append_inplace(gate, packing)
        return new

    def extend(self, gates: Iterable[Gate], packing: str = "greedy") -> None:
        for g in gates:
            self._append_inplace(g, packing)

    def copy(self) -> "Circuit":
        new = Circuit(self.registers)
        new.layers = [list(layer) for layer in self.layers]
        new._frontier = dict(self._frontier)
        new.meta = dict(self.meta)
        return new

    def concat(self, other: "Circuit") -> "Circuit":
        if other.registers != self.registers:
            raise RegisterError("concat requires identical register maps")
        new = self.copy()
        for layer in other.layers:
            for g in layer:
                new._append_inplace(g)
        return new

    def inverse(self) -> "Circuit":
        new = Circuit(self.registers)
        new.meta = dict(self.meta)
        for layer in reversed(self.layers):
            for g in reversed(layer):
                new._append_inplace(g.inverse())
        return new

    # -- inspection -------------------------------------------------------

    @property
    def width(self) -> int:
        return sum(size for _, size in self.registers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    def num_gates(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def register_size(self, name: str) -> int:
        return self._sizes[name]

    def validate(self) -> list[str]:
        """Check structural invariants.  Violations are returned, not raised."""
        problems: list[str] = []
        for t, layer in enumerate(self.layers):
            seen: set[QubitRef] = set()
            for g in layer:
                if len(set(g.operands)) != len(g.operands):
                    problems.append(f"operand clash at layer {t}")
                for q in g.operands:
                    size = self._sizes.get(q.register)
                    if size is None:
                        problems.append(
                            f"unknown register {q.register!r} at layer {t}"
                        )
                    elif not 0 <= q.index < size:
                        problems.append(
                            f"{q.register}[{q.index}] out of range at layer {t}"
                        )
                overlap = seen.intersection(g.operands)
                if overlap:
                    problems.append(f"layer overlap at layer {t}")
                seen.update(g.operands)
        return problems

    # -- serialization (schema version "1") --------------------------------

    SCHEMA_VERSION = "1"

    def to_json_obj(self) -> dict:
        return {
            "version": self.SCHEMA_VERSION,
            "registers": [[name, size] for name, size in self.registers],
            "layers": [
                [
                    {
                        "kind": g.kind,
                        "operands": [[q.register, q.index] for q in g.operands],
                        "flags": {k: list(v) if isinstance(v, tuple) else v
                                  for k, v in g.flags},
                    }
                    for g in layer
                ]
                for layer in self.layers
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Circuit":
        # layer-major greedy replay reproduces greedily-packed circuits
        # byte-exactly; hand-packed layouts may re-pack tighter, which
        # preserves semantics (operand order never changes)
        if obj.get("version") != cls.SCHEMA_VERSION:
            raise ValueError(f"unsupported circuit schema {obj.get('version')!r}")
        circuit = cls([(name, size) for name, size in obj["registers"]])
        for layer in obj["layers"]:
            first = True
            for rec in layer:
                gate = Gate(
                    rec["kind"],
                    tuple(QubitRef(r, i) for r, i in rec["operands"]),
                    _freeze_flags(rec.get("flags") or {}),
                )
                circuit._append_inplace(gate, "new-layer" if first else "greedy")
                first = False
        return circuit

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_json_obj(json.loads(text))


def new_circuit(registers: Iterable[tuple[str, int]]) -> Circuit:
    """Create an empty circuit over the given (name, size) registers."""
    return Circuit(registers)


# ---------------------------------------------------------------------------
# Resource accounting


@dataclass(frozen=True)
class ResourceReport:
    total_gates: int
    t_count: int
    depth: int
    width: int
    fanout_gate_share: Fraction

    def as_dict(self) -> dict:
        return {
            "total_gates": self.total_gates,
            "t_count": self.t_count,
            "depth": self.depth,
            "width": self.width,
            "fanout_gate_share": float(self.fanout_gate_share),
        }


def _ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length()) if n > 0 else 0


@dataclass(frozen=True)
class ResourceProfile:
    """Per-kind cost rules.

    unit-gate: every elementary gate costs 1 and a FANOUT_CNOT with k
    targets expands to k CNOTs in a depth-ceil(lg(k+1)) tree; a MULTI_CNOT
    with c controls expands to its conjunction ladder (2c-1 elementary
    gates).  surface-code: multi-target CNOTs are native depth-1 gates.

    Conjunction gates (TOFFOLI, MULTI_CNOT, AND pairs) are costed with the
    4-T compute / 0-T measurement-based-uncompute convention; the
    ``strict_toffoli`` flag switches to 7 T per conjunction in either
    direction.
    """

    name: str
    strict_toffoli: bool = False

    def _conj_t(self, units: int, uncompute: bool) -> int:
        if self.strict_toffoli:
            return 7 * units
        return 0 if uncompute else 4 * units

    def gate_count(self, gate: Gate) -> int:
        kind = gate.kind
        if kind == GateKind.CLASSICAL_PHASE_FIXUP:
            return 0
        if gate.flag("classical_mark"):
            return 0
        if kind == GateKind.FANOUT_CNOT:
            k = len(gate.operands) - 1
            base = k if self.name == "unit-gate" else 1
            if gate.flag("h_conjugated"):
                # the conjugating H layers are real gates in both profiles
                base += 2 * len(gate.operands)
            return base
        if kind == GateKind.MULTI_CNOT:
            c = len(gate.operands) - 1
            return 1 if c == 1 else 2 * c - 1
        return 1

    def t_count(self, gate: Gate) -> int:
        kind = gate.kind
        unc = bool(gate.flag("uncompute"))
        if kind in (GateKind.TOFFOLI, GateKind.AND_COMPUTE):
            return self._conj_t(1, unc)
        if kind == GateKind.AND_UNCOMPUTE:
            return self._conj_t(1, True)
        if kind == GateKind.CSWAP:
            # one conjunction conjugated by CNOTs; never measurement-free
            return 7 if self.strict_toffoli else 4
        if kind == GateKind.MULTI_CNOT:
            c = len(gate.operands) - 1
            return self._conj_t(c - 1, unc) if c >= 2 else 0
        return 0

    def depth_weight(self, gate: Gate) -> int:
        kind = gate.kind
        if kind == GateKind.CLASSICAL_PHASE_FIXUP or gate.flag("classical_mark"):
            return 0
        if kind == GateKind.FANOUT_CNOT:
            k = len(gate.operands) - 1
            d = _ceil_log2(k + 1) if self.name == "unit-gate" else 1
            if gate.flag("h_conjugated"):
                d += 2
            return d
        if kind == GateKind.MULTI_CNOT:
            c = len(gate.operands) - 1
            return 1 if c == 1 else 2 * _ceil_log2(c) + 1
        return 1

    def fanout_units(self, gate: Gate) -> int:
        if gate.kind == GateKind.FANOUT_CNOT and not gate.flag("classical_mark"):
            return len(gate.operands) - 1 if self.name == "unit-gate" else 1
        return 0


UNIT_GATE = ResourceProfile("unit-gate")
SURFACE_CODE = ResourceProfile("surface-code")
UNIT_GATE_STRICT = ResourceProfile("unit-gate", strict_toffoli=True)
SURFACE_CODE_STRICT = ResourceProfile("surface-code", strict_toffoli=True)

PROFILES = {
    "unit-gate": UNIT_GATE,
    "surface-code": SURFACE_CODE,
    "unit-gate-strict": UNIT_GATE_STRICT,
    "surface-code-strict": SURFACE_CODE_STRICT,
}


def count_resources(circuit: Circuit, profile: ResourceProfile = UNIT_GATE) -> ResourceReport:
    """Sum per-gate costs; depth is re-packed with the profile's weights.

    Depth re-packing schedules gates in emission order as-soon-as-possible,
    where each gate occupies ``depth_weight`` time on all its operands.
    """
    total = 0
    t_total = 0
    fanout_units = 0
    finish: dict[QubitRef, int] = {}
    makespan = 0
    for gate in circuit.gates():
        total += profile.gate_count(gate)
        t_total += profile.t_count(gate)
        fanout_units += profile.fanout_units(gate)
        w = profile.depth_weight(gate)
        if w > 0:
            start = max((finish.get(q, 0) for q in gate.operands), default=0)
            end = start + w
            for q in gate.operands:
                finish[q] = end
            makespan = max(makespan, end)
    share = Fraction(fanout_units, total) if total else Fraction(0)
    return ResourceReport(
        total_gates=total,
        t_count=t_total,
        depth=makespan,
        width=circuit.width,
        fanout_gate_share=share,
    )
