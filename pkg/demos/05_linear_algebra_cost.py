"""Polynomial transforms of Hermitian matrices and the memory-scale verdicts.

Computes f(H)v with the running-total scheme (exactly degree-many matvecs),
cross-checks against a full eigendecomposition, then prices one sparse
matvec under the four parallel step-count models and prints the verdict
table for quantum advantage by architectural scale.
"""
import numpy as np

from qramwb import qla

rng = np.random.default_rng(5)
n, d, k = 128, 6, 5
h = qla.random_hermitian_sparse(n, d, seed=2)
v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
f = qla.Polynomial([0.2, 0.5, -0.3, 0.0, 0.1, 0.05])

res = qla.poly_eigen_transform(h, v, f)
oracle = qla.eigen_oracle(h, v, f)
print(f"degree-{f.degree} transform of a {n}x{n}, {h.sparsity}-sparse matrix")
print(f"  matvecs used: {res.matvec_count} (= degree)")
print(f"  |result - eigendecomposition oracle| = {np.linalg.norm(res.vector - oracle):.2e}")
print(f"  bounded on [-1,1]: {f.bounded_on_unit_interval()}")

print()
a = rng.standard_normal((6, 4))
emb = qla.hermitian_embedding(a)
ev = np.sort(np.linalg.eigvalsh(emb))[-4:]
sv = np.sort(np.linalg.svd(a, compute_uv=False))
print("non-Hermitian inputs embed as [[0, A], [A*, 0]]; top eigenvalues vs")
print(f"singular values: {np.round(ev, 4)} vs {np.round(sv, 4)}")

print()
print("one sparse matvec under the parallel step-count models")
big_n, big_d = 2**20, 8
p = big_n * big_d
for model in qla.STEP_MODELS:
    sc = qla.stepcount_models(big_n, big_d, p, model)
    terms = ", ".join(f"{k}={v:.3g}" for k, v in sc.terms.items())
    print(f"  {model:>15}: {sc.steps:>10.3g} steps  ({terms})")

print()
print(qla.regime_table(big_n, big_d, 32).to_markdown())
print()
print("only the medium scale, sparse column retains a square-root gap;")
print("with free wires or with lightspeed latency counted, it closes.")
