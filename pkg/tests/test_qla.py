import math

import numpy as np
import pytest

from qramwb import qla


def random_vec(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


class TestSparseHermitian:
    def test_rejects_non_hermitian(self):
        with pytest.raises(qla.MatrixError):
            qla.SparseHermitian.from_matrix(np.array([[0, 1], [0, 0]]))

    def test_rescales_to_unit_norm(self):
        h = qla.SparseHermitian.from_matrix(np.diag([3.0, -1.0]))
        assert h.scale == pytest.approx(3.0, rel=1e-6)
        assert np.linalg.norm(h.matrix.toarray(), 2) <= 1.0 + 1e-9

    def test_sparsity_recorded(self):
        m = np.zeros((8, 8))
        m[0, 1] = m[1, 0] = 1.0
        m[0, 2] = m[2, 0] = 1.0
        h = qla.SparseHermitian.from_matrix(m)
        assert h.sparsity == 2  # row 0 holds two nonzero entries


class TestPolynomial:
    def test_constant(self):
        f = qla.Polynomial([1.0])
        assert f.degree == 0 and f(0.3) == 1.0

    def test_bounded_check(self):
        assert qla.Polynomial([0, 1]).bounded_on_unit_interval()
        assert not qla.Polynomial([0, 2]).bounded_on_unit_interval()


class TestTransform:
    def test_constant_polynomial_no_matvecs(self):
        h = qla.random_hermitian_sparse(16, 4, seed=0)
        v = random_vec(16, 1)
        res = qla.poly_eigen_transform(h, v, qla.Polynomial([1.0]))
        assert res.matvec_count == 0
        assert np.allclose(res.vector, v / np.linalg.norm(v))

    def test_identity_matrix(self):
        h = qla.SparseHermitian.from_matrix(np.eye(8))
        v = random_vec(8, 2)
        res = qla.poly_eigen_transform(h, v, qla.Polynomial([0.0, 1.0]))
        assert np.allclose(res.vector, v / np.linalg.norm(v))

    def test_matvec_count_is_degree(self):
        h = qla.random_hermitian_sparse(32, 4, seed=3)
        v = random_vec(32, 4)
        for k in range(1, 9):
            f = qla.Polynomial([0.1] * (k + 1))
            assert qla.poly_eigen_transform(h, v, f).matvec_count == k

    @pytest.mark.parametrize("n", [8, 32, 64, 128])
    def test_matches_eigen_oracle(self, n):
        rng = np.random.default_rng(n)
        worst = 0.0
        for k in range(1, 9):
            h = qla.random_hermitian_sparse(n, 6, seed=n * 10 + k)
            v = random_vec(n, k)
            coeffs = rng.standard_normal(k + 1) * 0.3
            f = qla.Polynomial(list(coeffs))
            got = qla.poly_eigen_transform(h, v, f).vector
            want = qla.eigen_oracle(h, v, f)
            worst = max(worst, float(np.linalg.norm(got - want)))
        assert worst < 1e-9

    def test_vanishing_result_rejected(self):
        h = qla.SparseHermitian.from_matrix(np.eye(4))
        v = random_vec(4, 5)
        with pytest.raises(qla.MatrixError):
            qla.poly_eigen_transform(h, v, qla.Polynomial([0.0]))


class TestEigenOracle:
    def test_diagonal_applies_entrywise(self):
        h = qla.SparseHermitian.from_matrix(np.diag([1.0, -1.0, 0.5, 0.0]))
        v = np.ones(4, dtype=complex)
        f = qla.Polynomial([0.0, 0.0, 1.0])  # x^2
        out = qla.eigen_oracle(h, v, f)
        want = np.array([1.0, 1.0, 0.25, 0.0])
        want = want / np.linalg.norm(want)
        assert np.allclose(np.abs(out), want)

    def test_projector_from_constructed_spectrum(self):
        # spectrum {-1, 0, 1} and f(x) = x^2 acts as the projector onto
        # the nonzero eigenspace
        rng = np.random.default_rng(7)
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        vals = np.array([-1.0, -1.0, 0.0, 0.0, 1.0, 1.0])
        h = qla.SparseHermitian.from_matrix(q @ np.diag(vals) @ q.T, rescale=False)
        v = random_vec(6, 8)
        out = qla.eigen_oracle(h, v, qla.Polynomial([0.0, 0.0, 1.0]))
        proj = q @ np.diag(np.abs(vals)) @ q.T @ v
        assert np.allclose(out, proj / np.linalg.norm(proj))

    def test_embedding_gives_plus_minus_singular_values(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
        emb = qla.hermitian_embedding(a)
        ev = np.sort(np.linalg.eigvalsh(emb))
        sv = np.linalg.svd(a, compute_uv=False)
        want = np.sort(np.concatenate([sv, -sv, np.zeros(len(ev) - 2 * len(sv))]))
        assert np.allclose(ev, want, atol=1e-10)


class TestStepCounts:
    def test_shared_memory_with_matching_processors(self):
        sc = qla.stepcount_models(1024, 4, 4096, "shared_memory")
        assert sc.terms["work"] == 1.0
        assert sc.terms["reduction"] == 2.0

    def test_doubling_p_halves_work(self):
        a = qla.stepcount_models(1 << 16, 8, 1 << 10, "shared_memory")
        b = qla.stepcount_models(1 << 16, 8, 1 << 11, "shared_memory")
        assert a.terms["work"] == 2 * b.terms["work"]

    def test_dense_grid_logarithmic(self):
        for e in (10, 16, 20):
            sc = qla.stepcount_models(2**e, 2**e, 1, "dense_grid")
            assert sc.steps == e

    def test_mesh_sort_scales_sqrt(self):
        a = qla.stepcount_models(1 << 10, 4, 1 << 12, "mesh2d_sort")
        b = qla.stepcount_models(1 << 12, 4, 1 << 14, "mesh2d_sort")
        assert b.terms["sort"] == pytest.approx(2 * a.terms["sort"])

    def test_hypercube_polylog_sort(self):
        sc = qla.stepcount_models(1 << 20, 8, 1 << 23, "hypercube_sort")
        assert sc.terms["sort"] == pytest.approx(23.0**2)


class TestRegimes:
    def test_fixed_verdicts(self):
        rep = qla.regime_table(2**20, 8, 32)
        rows = {r.regime: r for r in rep.rows}
        assert rows["small"].sparse_advantage == "None"
        assert rows["small"].dense_advantage == "None"
        assert rows["medium"].dense_advantage == "None"
        assert rows["medium"].sparse_advantage_value == pytest.approx(2**11.5)
        assert rows["large"].sparse_advantage == "None"
        assert rows["large"].dense_advantage == "None"

    def test_verdict_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            e = int(rng.integers(4, 24))
            n = 2**e
            d = int(rng.integers(1, min(n, 64) + 1))
            rep = qla.regime_table(n, d, 8)
            for row in rep.rows:
                if row.regime == "medium":
                    assert row.sparse_advantage.startswith("~O((Nd)^(1/2))")
                    assert row.dense_advantage == "None"
                else:
                    assert row.sparse_advantage == "None"
                    assert row.dense_advantage == "None"

    def test_markdown_shape(self):
        md = qla.regime_table(1 << 20, 8, 32).to_markdown()
        lines = md.splitlines()
        assert len(lines) == 5
        assert lines[0].count("|") == 6

    def test_assumption_flags(self):
        rep = qla.regime_table(256, 2, 4)
        flags = [(r.free_wires, r.instant_communication) for r in rep.rows]
        assert flags == [(True, True), (False, True), (False, False)]


class TestIngestion:
    def test_matrix_market_roundtrip(self, tmp_path):
        from scipy.io import mmwrite

        rng = np.random.default_rng(13)
        m = rng.standard_normal((6, 6))
        m = (m + m.T) / 2
        path = tmp_path / "h.mtx"
        mmwrite(path, m)
        h = qla.load_matrix_market(path)
        assert h.dimension == 6

    def test_vector_file(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1.0\n-2.5\n0.25\n")
        v = qla.load_vector(path)
        assert np.allclose(v, [1.0, -2.5, 0.25])
