"""Tour of the analytic bound calculators and their numeric verifiers."""
import numpy as np

from qramwb import bounds

print("-- counting bound ------------------------------------------------")
params = bounds.CircuitCountParams(width=100, depth=40, gates=256, gate_set=16, fanin=3)
print(f"lg #circuits(W=100, D=40, G=256) <= {bounds.log2_circuit_count(params):.1f}")

res = bounds.min_gates_for_table(2**20, width=2**21, depth=2**21, gate_set=16, fanin=3)
print(f"smallest G able to express a 2^20-bit table: {res.gates}")
print("doubling the table roughly doubles the required gates:")
for e in (16, 17, 18, 19):
    r = bounds.min_gates_for_table(2**e, width=2**24, depth=2**24, gate_set=16, fanin=3)
    print(f"  N=2^{e}: G = {r.gates}")

print()
print("-- evolution-time bound ------------------------------------------")
v = bounds.ballistic_constraint(
    bounds.BallisticParams(terms=1000, time=10.0, energy=1.0, width=64, table_bits=2**14)
)
print(
    f"n*t*E + n*lg W = {v.lhs:.0f} against N = {v.table_bits}: "
    f"{'satisfiable' if v.satisfied_for_n else 'ruled out'} (slack {v.slack:.0f})"
)

floor, lower = bounds.hamiltonian_distance_floor(1.0, 1.0)
print(f"distance floor at delta=1, t=1: {floor:.4f} (>= stated bound {lower:.4f})")
violations = bounds.verify_hamiltonian_lemma(8, 300, seed=0)
print(f"floor verified on 300 random 8x8 pairs x 3 times: {violations} violations")

print()
print("-- distillation ceiling ------------------------------------------")
for d, n in [(4, 64), (16, 256), (1, 4)]:
    cap = bounds.distillation_fidelity_cap(bounds.DistillationParams(calls=d, table_bits=n))
    tag = " (vacuous)" if cap.vacuous else ""
    print(f"  d={d:>2}, N={n:>4}: minimum-fidelity cap {cap.value:.4f}{tag}")

print()
print("underlying low-mass-index bound, checked on explicit states:")
states = bounds.random_access_states(4, 64, seed=1)
res = bounds.verify_indistinguishable_tables(states, 1)
print(f"  flip set {res.flip_set}, sum of trace distances {res.delta_sum:.4f}")
print(f"  provable bound 2d*sqrt(l/N) = {res.derived_bound:.4f}: holds = {res.holds}")
print(f"  published constant 2l*sqrt(d)/N = {res.stated_bound:.4f}: "
      f"holds = {res.holds_stated} (too small for generic inputs)")
