"""Functional verification of builder circuits against direct table lookup."""
from __future__ import annotations

import itertools
import json

import numpy as np

from .builders.spec import BuilderSpec, build
from .classical import CompiledCircuit, basis_batch
from .sim import QubitLayout, SparseState, run
from .tables import BitTable

EXHAUSTIVE_CAP = 256


def _query_plan(spec: BuilderSpec, table: BitTable):
    """Input/output register conventions per builder kind."""
    padded = table.padded_to_power_of_two()
    if spec.kind == "parallel_sorted":
        k = spec.query_count or 1
        addr_regs = [f"qaddr{j}" for j in range(k)]
        out_regs = [f"qout{j}" for j in range(k)]
        mem = None
        valid = table.n
    else:
        addr_regs = ["addr"]
        out_regs = ["out"]
        mem = "mem" if spec.kind == "fanout_swap_qraqm" else None
        valid = padded.n if spec.kind != "unary" else table.n
    return addr_regs, out_regs, mem, valid, padded


def _mem_word(padded: BitTable) -> int:
    word = 0
    w = padded.word_width
    for i, e in enumerate(padded.entries):
        word |= e << (i * w)
    return word


def _expected_word(padded: BitTable, table: BitTable, address: int) -> int:
    if address < padded.n:
        return padded.entries[address]
    return 0


def verify_builder(
    spec: BuilderSpec,
    table: BitTable,
    mode: str = "exhaustive",
    sample_count: int = 50,
    seed: int = 0,
    engine: str = "auto",
) -> dict:
    """Check that the built circuit performs table lookup on basis inputs.

    Every address case asserts the looked-up word, unit output amplitude,
    and that all non-query registers return to their initial contents.
    Failures are reported as data, never raised.
    """
    addr_regs, out_regs, mem, valid, padded = _query_plan(spec, table)
    if mode == "auto":
        mode = (
            "exhaustive"
            if valid ** len(addr_regs) <= EXHAUSTIVE_CAP
            else "sampled"
        )
    if mode == "exhaustive" and valid > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive mode capped at N={EXHAUSTIVE_CAP}")
    circuit = build(spec, table)
    w = padded.word_width

    if mode == "exhaustive":
        if len(addr_regs) == 1:
            cases = [(a,) for a in range(valid)]
        else:
            cases = list(itertools.product(range(valid), repeat=len(addr_regs)))
            if len(cases) > EXHAUSTIVE_CAP:
                raise ValueError("exhaustive query-tuple space too large")
    elif mode == "sampled":
        rng = np.random.Generator(np.random.Philox(key=seed))
        cases = [
            tuple(int(x) for x in rng.integers(0, valid, size=len(addr_regs)))
            for _ in range(sample_count)
        ]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if engine == "auto":
        engine = "sparse" if circuit.num_gates() * len(cases) <= 200_000 else "classical"

    failures: list[dict] = []
    max_dev = 0.0
    ancillas_clean = True

    def expected_out(case):
        return [_expected_word(padded, table, a) for a in case]

    if engine == "sparse":
        layout = QubitLayout.of(circuit)
        for case in cases:
            values = {reg: a for reg, a in zip(addr_regs, case)}
            if mem:
                values[mem] = _mem_word(padded)
            initial = layout.pack(values)
            state = SparseState.basis(layout, initial)
            final = run(circuit, state)
            expect = initial
            for reg, word in zip(out_regs, expected_out(case)):
                expect ^= word << layout.offsets[reg]
            amp = final.amplitudes.get(expect, 0.0)
            dev = abs(amp - 1.0)
            stray = sum(
                abs(v) for k, v in final.amplitudes.items() if k != expect
            )
            max_dev = max(max_dev, dev, stray)
            if dev > 1e-10 or stray > 1e-10:
                got = max(final.amplitudes, key=lambda k: abs(final.amplitudes[k]))
                clean = all(
                    layout.extract(got, reg) == layout.extract(initial, reg)
                    for reg, _ in layout.registers
                    if reg not in out_regs and reg not in addr_regs
                )
                ancillas_clean = ancillas_clean and clean
                failures.append(
                    {
                        "addresses": list(case),
                        "expected": expected_out(case),
                        "got": [layout.extract(got, reg) for reg in out_regs],
                        "amp_dev": dev,
                    }
                )
    else:
        compiled = CompiledCircuit(circuit)
        values = []
        for case in cases:
            v = {reg: a for reg, a in zip(addr_regs, case)}
            if mem:
                v[mem] = _mem_word(padded)
            values.append(v)
        init = basis_batch(compiled, values)
        expect = init.copy()
        for row, case in enumerate(cases):
            for reg, word in zip(out_regs, expected_out(case)):
                cols = compiled.register_columns(reg)
                for b in range(w):
                    if (word >> b) & 1:
                        expect[row, cols[b]] ^= True
        final = compiled.run(init.copy())
        bad_rows = np.nonzero((final != expect).any(axis=1))[0]
        for row in bad_rows:
            case = cases[row]
            got = []
            for reg in out_regs:
                cols = compiled.register_columns(reg)
                got.append(int(sum(int(final[row, c]) << b for b, c in enumerate(cols))))
            anc_cols = [
                c
                for reg, _ in compiled.layout.registers
                if reg not in out_regs
                for c in compiled.register_columns(reg)
            ]
            clean = bool((final[row, anc_cols] == expect[row, anc_cols]).all())
            ancillas_clean = ancillas_clean and clean
            failures.append(
                {
                    "addresses": list(case),
                    "expected": expected_out(case),
                    "got": got,
                    "amp_dev": 1.0,
                }
            )
        if len(bad_rows):
            max_dev = 1.0

    return {
        "spec": {
            "kind": spec.kind,
            "page_log": spec.page_log,
            "query_count": spec.query_count,
            "uncompute": spec.uncompute,
        },
        "N": table.n,
        "word_width": table.word_width,
        "mode": mode,
        "engine": engine,
        "cases": len(cases),
        "failures": failures,
        "max_dev": max_dev,
        "ancillas_clean": ancillas_clean,
        "passed": not failures,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, separators=(",", ":"))
