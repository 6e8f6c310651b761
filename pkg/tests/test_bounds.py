import math

import numpy as np
import pytest
import sympy

from qramwb import bounds


class TestCircuitCount:
    def test_single_slot_single_gate(self):
        p = bounds.CircuitCountParams(width=1, depth=1, gates=1, gate_set=1, fanin=1)
        assert bounds.log2_circuit_count(p) == 0.0

    def test_empty_circuit_unique(self):
        p = bounds.CircuitCountParams(width=4, depth=4, gates=0, gate_set=8, fanin=2)
        assert bounds.log2_circuit_count(p) == 0.0

    def test_matches_exact_value(self):
        p = bounds.CircuitCountParams(width=4, depth=3, gates=5, gate_set=3, fanin=2)
        # lg C(12, 10) + 5 lg 12
        expect = math.log2(math.comb(12, 10)) + 5 * math.log2(12)
        assert bounds.log2_circuit_count(p) == pytest.approx(expect, abs=1e-12)

    def test_exhaustive_grid_against_big_integers(self):
        worst = 0.0
        for w in (1, 2, 3, 5, 8, 16, 32, 64):
            for d in (1, 2, 4, 8):
                if w * d > 64:
                    continue
                for g_count in range(0, w * d + 1, max(1, w * d // 7)):
                    for gate_set in (1, 3, 16):
                        for k in range(1, min(w, 4) + 1):
                            p = bounds.CircuitCountParams(w, d, g_count, gate_set, k)
                            got = bounds.log2_circuit_count(p)
                            want = bounds.log2_circuit_count_exact(p)
                            worst = max(worst, abs(got - want))
        assert worst < 1e-9

    def test_no_overflow_at_large_scale(self):
        p = bounds.CircuitCountParams(
            width=10**5, depth=10**4, gates=10**6, gate_set=32, fanin=3
        )
        assert math.isfinite(bounds.log2_circuit_count(p))

    def test_invariants(self):
        with pytest.raises(ValueError):
            bounds.CircuitCountParams(width=2, depth=2, gates=5, gate_set=1, fanin=1)
        with pytest.raises(ValueError):
            bounds.CircuitCountParams(width=2, depth=2, gates=1, gate_set=1, fanin=3)


class TestMinGates:
    def test_trivial_table(self):
        r = bounds.min_gates_for_table(1, width=64, depth=64, gate_set=16, fanin=3)
        assert r.feasible and r.gates == 1

    def test_boundary_is_sharp(self):
        r = bounds.min_gates_for_table(
            2**20, width=2**21, depth=2**21, gate_set=16, fanin=3
        )
        assert r.feasible
        g = r.gates
        cap = lambda x: bounds._table_capacity(x, 2**21, 2**21, 16, 3)
        assert cap(g) >= 2**20 > cap(g - 1)

    def test_linear_scan_agrees_near_solution(self):
        r = bounds.min_gates_for_table(5000, width=4096, depth=4096, gate_set=8, fanin=2)
        cap = lambda x: bounds._table_capacity(x, 4096, 4096, 8, 2)
        scan = next(g for g in range(1, 10000) if cap(g) >= 5000)
        assert r.gates == scan

    def test_doubling_n_roughly_doubles_g(self):
        prev = None
        for e in range(12, 22):
            r = bounds.min_gates_for_table(
                2**e, width=2**24, depth=2**24, gate_set=16, fanin=3
            )
            if prev is not None:
                ratio = r.gates / prev
                assert 2.0 <= ratio <= 2.3
            prev = r.gates

    def test_infeasible_flagged(self):
        r = bounds.min_gates_for_table(10**9, width=4, depth=4, gate_set=2, fanin=2)
        assert not r.feasible and r.gates is None


class TestBallistic:
    def test_satisfied_case(self):
        v = bounds.ballistic_constraint(
            bounds.BallisticParams(terms=100, time=1.0, energy=1.0, width=2, table_bits=100)
        )
        assert v.lhs == pytest.approx(200.0)
        assert v.satisfied_for_n

    def test_unsatisfied_case(self):
        v = bounds.ballistic_constraint(
            bounds.BallisticParams(terms=1, time=1.0, energy=1.0, width=2, table_bits=100)
        )
        assert v.lhs == pytest.approx(2.0)
        assert not v.satisfied_for_n

    def test_threshold_flip(self):
        # holding the left side fixed while N doubles flips the verdict at
        # the pinned threshold
        params = lambda n: bounds.BallisticParams(
            terms=8, time=4.0, energy=1.0, width=16, table_bits=n
        )
        lhs = bounds.ballistic_constraint(params(1)).lhs
        n = 1
        while bounds.ballistic_constraint(params(n)).satisfied_for_n:
            n *= 2
        assert n / 2 <= lhs <= n

    def test_stirling_form_available(self):
        v = bounds.ballistic_constraint(
            bounds.BallisticParams(terms=4, time=1.0, energy=1.0, width=8, table_bits=10),
            form="stirling",
        )
        assert v.form == "stirling" and math.isfinite(v.lhs)


class TestDistanceFloor:
    def test_zero_delta(self):
        floor, lower = bounds.hamiltonian_distance_floor(0.0, 1.0)
        assert floor == 0.0 and lower == 0.0

    def test_monotone_in_delta(self):
        values = [bounds.hamiltonian_distance_floor(d, 2.0)[0] for d in np.linspace(0, 2, 9)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_reference_value(self):
        floor, _ = bounds.hamiltonian_distance_floor(1.0, 1.0)
        assert floor == pytest.approx(math.log(1 + math.exp(-1)), abs=1e-12)
        assert floor == pytest.approx(0.3133, abs=5e-5)

    def test_floor_dominates_stated_lower_bound(self):
        for d in (0.1, 0.5, 1.0, 2.0):
            for t in (0.3, 1.0, 3.0):
                floor, lower = bounds.hamiltonian_distance_floor(d, t)
                assert floor >= lower - 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            bounds.hamiltonian_distance_floor(2.5, 1.0)
        with pytest.raises(ValueError):
            bounds.hamiltonian_distance_floor(1.0, 0.0)


class TestHamiltonianLemma:
    def test_identical_pair_consistent(self):
        h = np.diag([0.5, -0.5]).astype(complex)
        u1 = bounds._expm_hermitian(h, 1.0)
        assert np.linalg.norm(u1 - u1, 2) == 0.0

    @pytest.mark.parametrize("dim", [2, 4])
    def test_no_violations_random(self, dim):
        assert bounds.verify_hamiltonian_lemma(dim, 150, seed=dim) == 0

    def test_adversarial_diagonal_is_tight(self):
        # commuting diagonal pair with known distance: the floor should
        # recover the actual perturbation within ten percent
        eps, t = 0.1, 0.01
        h1 = np.zeros((2, 2), dtype=complex)
        h2 = np.diag([eps, 0.0]).astype(complex)
        d = np.linalg.norm(
            bounds._expm_hermitian(h1, t) - bounds._expm_hermitian(h2, t), 2
        )
        floor, _ = bounds.hamiltonian_distance_floor(d, t)
        assert floor <= eps + 1e-12
        assert floor >= 0.9 * eps

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            bounds.verify_hamiltonian_lemma(3, 10)


class TestDistillation:
    def test_reference_value(self):
        cap = bounds.distillation_fidelity_cap(
            bounds.DistillationParams(calls=4, table_bits=64)
        )
        assert cap.value == 0.8125 and not cap.vacuous

    def test_vacuous_small_n(self):
        cap = bounds.distillation_fidelity_cap(
            bounds.DistillationParams(calls=1, table_bits=4)
        )
        assert cap.value == 1.0 and cap.vacuous
        assert cap.raw == 1.25

    def test_nonincreasing_in_n(self):
        caps = [
            bounds.distillation_fidelity_cap(
                bounds.DistillationParams(calls=4, table_bits=n)
            ).value
            for n in (16, 32, 64, 128)
        ]
        assert all(a >= b for a, b in zip(caps, caps[1:]))

    def test_nonvacuous_threshold_symbolically(self):
        n, d, l = sympy.symbols("n d l", positive=True)
        raw = sympy.Rational(3, 4) + 2 * l * sympy.sqrt(d) / n
        threshold = sympy.solve(sympy.Eq(raw, 1), n)[0]
        assert sympy.simplify(threshold - 8 * l * sympy.sqrt(d)) == 0


class TestIndistinguishableTables:
    def test_zero_support_index_gives_zero_delta(self):
        states = np.zeros((2, 8, 2), dtype=complex)
        states[:, 0, 0] = 1.0  # all mass on address 0
        res = bounds.verify_indistinguishable_tables(states, 1)
        assert 0 not in res.flip_set
        assert res.delta_sum == pytest.approx(0.0, abs=1e-12)

    def test_uniform_states_hold_with_slack(self):
        states = np.zeros((4, 64, 2), dtype=complex)
        states[:, :, 0] = 1 / math.sqrt(64)
        res = bounds.verify_indistinguishable_tables(states, 1)
        assert res.holds
        assert res.delta_sum < res.derived_bound

    def test_random_states_never_violate_derived_bound(self):
        for d in (1, 2, 4, 8):
            for n in (16, 64):
                for trial in range(25):
                    states = bounds.random_access_states(d, n, seed=trial * 31 + d)
                    res = bounds.verify_indistinguishable_tables(states, 1)
                    assert res.holds

    def test_stated_constant_fails_for_generic_states(self):
        # the published constant is below what generic inputs achieve; the
        # verifier reports both bounds so the discrepancy stays visible
        states = bounds.random_access_states(4, 64, seed=5)
        res = bounds.verify_indistinguishable_tables(states, 1)
        assert not res.holds_stated
        assert res.holds

    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            bounds.verify_indistinguishable_tables(
                np.ones((2, 4, 2), dtype=complex), 1
            )

    def test_flip_set_size(self):
        states = bounds.random_access_states(3, 32, seed=1)
        res = bounds.verify_indistinguishable_tables(states, 4)
        assert len(res.flip_set) == 4
