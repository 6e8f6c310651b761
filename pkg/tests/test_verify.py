import json

import pytest

from qramwb import BitTable, BuilderSpec, build, random_table
from qramwb.circuit import Circuit, GateKind
from qramwb.verify import report_to_json, verify_builder


class TestVerifyBuilder:
    def test_recursive_exhaustive_passes(self):
        rep = verify_builder(BuilderSpec("recursive"), random_table(8, seed=1))
        assert rep["passed"]
        assert rep["cases"] == 8
        assert rep["ancillas_clean"]
        assert rep["max_dev"] < 1e-10

    def test_corrupted_circuit_is_caught(self):
        t = random_table(8, seed=2)
        circuit = build(BuilderSpec("recursive"), t)
        # drop one CNOT from the middle of the circuit
        doctored = Circuit(circuit.registers)
        dropped = False
        for layer in circuit.layers:
            for g in layer:
                if not dropped and g.kind == GateKind.CNOT:
                    dropped = True
                    continue
                doctored._append_inplace(g)
        assert dropped
        from qramwb.classical import CompiledCircuit, basis_batch

        compiled = CompiledCircuit(doctored)
        init = basis_batch(compiled, [{"addr": a} for a in range(8)])
        expect = init.copy()
        out_col = compiled.register_columns("out")[0]
        for a in range(8):
            if t.entries[a]:
                expect[a, out_col] ^= True
        final = compiled.run(init.copy())
        assert (final != expect).any()

    def test_sampled_mode_deterministic(self):
        t = random_table(32, seed=3)
        a = verify_builder(BuilderSpec("recursive"), t, mode="sampled", seed=5)
        b = verify_builder(BuilderSpec("recursive"), t, mode="sampled", seed=5)
        assert a["failures"] == b["failures"]
        assert a["cases"] == b["cases"]

    def test_exhaustive_cap(self):
        with pytest.raises(ValueError):
            verify_builder(
                BuilderSpec("recursive"), random_table(512, seed=0), mode="exhaustive"
            )

    def test_fanout_swap_memory_restored(self):
        t = random_table(8, seed=4)
        rep = verify_builder(BuilderSpec("fanout_swap_qraqm"), t)
        assert rep["passed"] and rep["ancillas_clean"]

    def test_select_swap_measurement_based_mode(self):
        t = random_table(16, seed=9)
        rep = verify_builder(
            BuilderSpec("select_swap", page_log=2, uncompute="measurement_based"), t
        )
        assert rep["passed"] and rep["ancillas_clean"]

    def test_parallel_single_query_is_plain_lookup(self):
        t = random_table(8, seed=6)
        rep = verify_builder(BuilderSpec("parallel_sorted", query_count=1), t)
        assert rep["passed"] and rep["cases"] == 8

    def test_parallel_shared_address(self):
        # two of three queries share an address; both must read the word
        t = BitTable((1, 0, 1, 1, 0, 0, 1, 0))
        rep = verify_builder(
            BuilderSpec("parallel_sorted", query_count=3),
            t,
            mode="sampled",
            sample_count=40,
            seed=7,
        )
        assert rep["passed"]

    def test_report_is_json(self):
        rep = verify_builder(BuilderSpec("unary"), random_table(4, seed=1))
        parsed = json.loads(report_to_json(rep))
        assert parsed["N"] == 4
        assert "max_dev" in parsed and "failures" in parsed

    def test_engines_agree(self):
        t = random_table(8, seed=8)
        spec = BuilderSpec("bucket_brigade")
        a = verify_builder(spec, t, engine="sparse")
        b = verify_builder(spec, t, engine="classical")
        assert a["passed"] == b["passed"] == True  # noqa: E712
