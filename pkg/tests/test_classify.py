import numpy as np
import pytest

from btensor import (
    Tensor,
    all_row_stats,
    b_tensor_formulations,
    classify_all,
    is_b_tensor,
    is_double_b_tensor,
    is_dsdd,
    is_qdsdd,
    is_quasi_double_b0_tensor,
    is_quasi_double_b_tensor,
    is_z_tensor,
    make_tensor,
    pair_stats,
    partially_all_one,
    product_inequality,
    row_stats,
    unit_tensor,
)

from conftest import random_tensor


class TestRowStats:
    def test_remark_row1(self, remark_tensor):
        st = row_stats(remark_tensor, 1)
        assert st.beta == 0.0
        assert st.delta == pytest.approx(0.3, rel=1e-12)
        assert st.r == pytest.approx(0.3, rel=1e-12)
        assert st.row_sum == pytest.approx(1.7, rel=1e-12)

    def test_remark_row2(self, remark_tensor):
        st = row_stats(remark_tensor, 2)
        assert st.beta == 0.0
        assert st.delta == pytest.approx(2.8, rel=1e-12)
        assert st.r == pytest.approx(2.8, rel=1e-12)
        assert st.row_sum == pytest.approx(-0.8, rel=1e-12)

    def test_unit_tensor_rows(self):
        for i in (1, 2, 3):
            st = row_stats(unit_tensor(4, 3), i)
            assert (st.beta, st.delta, st.r, st.row_sum) == (0.0, 0.0, 0.0, 1.0)

    def test_out_of_range(self, remark_tensor):
        with pytest.raises(ValueError):
            row_stats(remark_tensor, 3)

    def test_z_row_identities(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            T = random_tensor(rng, m, n, low=-1.0, high=0.0)
            data = np.array(T.data)
            for i in range(n):
                data[(i,) * m] = rng.uniform(-2, 2)
            T = Tensor(m, n, data)
            assert is_z_tensor(T)
            for st in all_row_stats(T):
                assert st.beta == 0.0
                assert st.delta == st.r  # bitwise on Z rows
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i != j:
                        ps = pair_stats(T, i, j)
                        assert ps.delta_j_i == ps.r_j_i


class TestPairStats:
    def test_remark_pairs(self, remark_tensor):
        ps = pair_stats(remark_tensor, 1, 2)
        assert ps.delta_j_i == pytest.approx(1.8, rel=1e-12)
        assert ps.b_ji_tail == -1.0
        ps = pair_stats(remark_tensor, 2, 1)
        assert ps.delta_j_i == pytest.approx(0.0, abs=1e-12)
        assert ps.b_ji_tail == -0.3

    def test_counterexample_pair(self, counterexample_tensor):
        ps = pair_stats(counterexample_tensor, 1, 2)
        assert ps.delta_j_i == pytest.approx(3.0)
        assert ps.b_ji_tail == 0.0

    def test_equal_indices_rejected(self, remark_tensor):
        with pytest.raises(ValueError, match="differ"):
            pair_stats(remark_tensor, 2, 2)

    def test_invariant_decomposition(self, remark_tensor):
        st = row_stats(remark_tensor, 2)
        ps = pair_stats(remark_tensor, 1, 2)
        assert ps.delta_j_i == st.delta - (st.beta - ps.b_ji_tail)
        assert ps.r_j_i == st.r - abs(ps.b_ji_tail)
        assert ps.delta_j_i >= 0.0 and ps.r_j_i >= 0.0


class TestBTensor:
    def test_remark_fails_on_row_sum(self, remark_tensor):
        v = is_b_tensor(remark_tensor)
        assert not v
        assert v.witness.index == 2
        assert v.witness.condition == "row-sum-positive"
        assert v.witness.lhs == pytest.approx(-0.8, rel=1e-12)

    @pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (4, 3), (2, 5)])
    def test_unit_tensor_is_b(self, m, n):
        assert is_b_tensor(unit_tensor(m, n))

    def test_counterexample_fails_at_row2(self, counterexample_tensor):
        v = is_b_tensor(counterexample_tensor)
        assert not v
        assert v.witness.index == 2

    def test_three_formulations_agree_on_random(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            n, m = int(rng.integers(1, 5)), int(rng.integers(2, 5))
            T = random_tensor(rng, m, n)
            forms = b_tensor_formulations(T)
            assert len(set(forms)) == 1
            assert is_b_tensor(T).holds == forms[0]

    def test_dim1_degenerates_to_positive_diagonal(self):
        assert is_b_tensor(make_tensor(3, 1, [((1, 1, 1), 0.5)]))
        assert not is_b_tensor(make_tensor(3, 1, [((1, 1, 1), -0.5)]))


class TestProductInequality:
    def test_counterexample_holds(self, counterexample_tensor):
        assert product_inequality(counterexample_tensor)

    def test_counterexample_sides(self, counterexample_tensor):
        # (2 - 0)(2 - 0) = 4 against 1 * 3 = 3
        st = all_row_stats(counterexample_tensor)
        lhs = (counterexample_tensor.entry((1,) * 4) - st[0].beta) * (
            counterexample_tensor.entry((2,) * 4) - st[1].beta)
        rhs = st[0].delta * st[1].delta
        assert lhs == pytest.approx(4.0) and rhs == pytest.approx(3.0)

    def test_unit_tensor(self):
        assert product_inequality(unit_tensor(3, 2))

    def test_all_one_fails(self):
        v = product_inequality(partially_all_one(3, 2, {1, 2}))
        assert not v
        assert v.witness.pair == (1, 2)
        assert v.witness.lhs == 0.0 and v.witness.rhs == 0.0

    def test_dim1_rejected(self):
        with pytest.raises(ValueError, match="n >= 2"):
            product_inequality(make_tensor(2, 1, [((1, 1), 1.0)]))


class TestDoubleB:
    def test_remark_fails_row_dominance(self, remark_tensor):
        v = is_double_b_tensor(remark_tensor)
        assert not v
        assert v.witness.condition == "row-dominance"
        assert v.witness.index == 2
        assert v.witness.lhs == pytest.approx(2.0)
        assert v.witness.rhs == pytest.approx(2.8)

    def test_counterexample_fails_despite_product(self, counterexample_tensor):
        assert product_inequality(counterexample_tensor)
        v = is_double_b_tensor(counterexample_tensor)
        assert not v
        assert v.witness.condition == "row-dominance"
        assert v.witness.index == 2
        assert (v.witness.lhs, v.witness.rhs) == (2.0, 3.0)

    def test_unit_tensor(self):
        assert is_double_b_tensor(unit_tensor(4, 2))


class TestQuasiDoubleB:
    def test_remark_is_quasi(self, remark_tensor):
        assert is_quasi_double_b_tensor(remark_tensor)

    def test_remark_pair_sides(self, remark_tensor):
        # sides recomputed from the published statistics: 0.4 > 0.3 and 4 > 0.84
        st = all_row_stats(remark_tensor)
        p12 = pair_stats(remark_tensor, 1, 2)
        lhs = (remark_tensor.entry((1, 1, 1)) - st[0].beta) * (
            remark_tensor.entry((2, 2, 2)) - st[1].beta - p12.delta_j_i)
        rhs = (st[1].beta - p12.b_ji_tail) * st[0].delta
        assert lhs == pytest.approx(0.4, rel=1e-12)
        assert rhs == pytest.approx(0.3, rel=1e-12)
        p21 = pair_stats(remark_tensor, 2, 1)
        lhs = (remark_tensor.entry((2, 2, 2)) - st[1].beta) * (
            remark_tensor.entry((1, 1, 1)) - st[0].beta - p21.delta_j_i)
        rhs = (st[0].beta - p21.b_ji_tail) * st[1].delta
        assert lhs == pytest.approx(4.0, rel=1e-12)
        assert rhs == pytest.approx(0.84, rel=1e-12)

    def test_counterexample_fails_at_first_pair(self, counterexample_tensor):
        v = is_quasi_double_b_tensor(counterexample_tensor)
        assert not v
        assert v.witness.pair == (1, 2)
        assert v.witness.lhs == pytest.approx(-2.0)
        assert v.witness.rhs == pytest.approx(0.0)

    def test_unit_tensor(self):
        assert is_quasi_double_b_tensor(unit_tensor(3, 3))


class TestQuasiDoubleB0:
    def test_strict_implies_weak(self, remark_tensor):
        assert is_quasi_double_b_tensor(remark_tensor)
        assert is_quasi_double_b0_tensor(remark_tensor)

    def test_all_one_boundary(self):
        T = partially_all_one(4, 2, {1, 2})
        assert not is_quasi_double_b_tensor(T)
        assert is_quasi_double_b0_tensor(T)

    def test_counterexample_fails(self, counterexample_tensor):
        v = is_quasi_double_b0_tensor(counterexample_tensor)
        assert not v
        assert v.witness.pair == (1, 2)

    def test_diagonal_flag_variant(self):
        # diagonal strictly below beta, yet both weak pair inequalities hold
        # (negative times negative); the literal weak class admits it, the
        # flagged strict variant does not
        T = make_tensor(2, 2, [((1, 2), 1.0), ((2, 1), 1.0), ((2, 2), 0.5)])
        assert is_quasi_double_b0_tensor(T)
        assert not is_quasi_double_b0_tensor(T, require_diagonal=True)


class TestZTensor:
    def test_remark_is_z(self, remark_tensor):
        assert is_z_tensor(remark_tensor)

    def test_all_one_is_not(self):
        v = is_z_tensor(partially_all_one(3, 2, {1, 2}))
        assert not v
        assert v.witness.multi_index == (1, 1, 2)

    def test_unit_tensor_is_z(self):
        assert is_z_tensor(unit_tensor(3, 2))


class TestDSDD:
    def test_remark_fails(self, remark_tensor):
        v = is_dsdd(remark_tensor)
        assert not v
        assert v.witness.index == 2
        assert v.witness.lhs == pytest.approx(2.0)
        assert v.witness.rhs == pytest.approx(2.8)

    def test_matrix_case_has_no_row_condition(self):
        A = make_tensor(2, 2, [((1, 1), 2.0), ((1, 2), -1.0), ((2, 1), -3.0), ((2, 2), 2.0)])
        assert is_dsdd(A)  # 4 > 3 even though row 2 is not dominant

    def test_unit_tensor(self):
        assert is_dsdd(unit_tensor(4, 2))


class TestQDSDD:
    def test_remark_is_qdsdd(self, remark_tensor):
        # Z tensor, so the verdict mirrors the quasi class
        assert is_qdsdd(remark_tensor)

    def test_counterexample_fails(self, counterexample_tensor):
        assert not is_qdsdd(counterexample_tensor)

    def test_unit_tensor(self):
        assert is_qdsdd(unit_tensor(3, 2))


class TestZEquivalences:
    """On Z tensors with positive diagonals the absolute-value classes agree
    with the beta-based ones (the shared standing hypothesis); without the
    positivity only the forward implications survive, and the matrix variant
    of the double class keeps only the forward direction too."""

    def _random_z(self, rng, m, n, positive_diag):
        T = random_tensor(rng, m, n, low=-1.0, high=0.0)
        data = np.array(T.data)
        for i in range(n):
            data[(i,) * m] = rng.uniform(0.1, 3.0) if positive_diag else rng.uniform(-3.0, 3.0)
        return Tensor(m, n, data)

    def test_positive_diagonal_equivalence(self):
        rng = np.random.default_rng(21)
        for _ in range(400):
            n, m = int(rng.integers(2, 4)), int(rng.integers(2, 5))
            T = self._random_z(rng, m, n, positive_diag=True)
            assert is_quasi_double_b_tensor(T).holds == is_qdsdd(T).holds
            if m > 2:
                assert is_double_b_tensor(T).holds == is_dsdd(T).holds
            elif is_double_b_tensor(T):
                assert is_dsdd(T)

    def test_forward_implications_always(self):
        rng = np.random.default_rng(22)
        for _ in range(400):
            n, m = int(rng.integers(2, 4)), int(rng.integers(2, 5))
            T = self._random_z(rng, m, n, positive_diag=False)
            if is_double_b_tensor(T):
                assert is_dsdd(T)
            if is_quasi_double_b_tensor(T):
                assert is_qdsdd(T)

    def test_negative_diagonal_breaks_reverse_direction(self):
        # DSDD and Q-DSDD ignore the diagonal sign; the beta-based classes do not
        A = make_tensor(2, 2, [((1, 1), -2.0), ((1, 2), -1.0), ((2, 1), -1.0), ((2, 2), -2.0)])
        assert is_dsdd(A) and is_qdsdd(A)
        assert not is_double_b_tensor(A)
        assert not is_quasi_double_b_tensor(A)

    def test_matrix_row_condition_breaks_reverse_direction(self):
        # order 2 drops the row condition from the absolute-value class
        A = make_tensor(2, 2, [((1, 1), 1.0), ((1, 2), -2.0), ((2, 1), -0.1), ((2, 2), 3.0)])
        assert is_z_tensor(A) and is_dsdd(A)
        assert not is_double_b_tensor(A)


class TestClassifyAll:
    def test_remark_report(self, remark_tensor):
        rep = classify_all(remark_tensor)
        assert rep.verdicts == {
            "B": False, "DoubleB": False, "QuasiDoubleB": True, "QuasiDoubleB0": True,
            "Z": True, "DSDD": False, "QDSDD": True, "ProductIneq": True,
        }
        assert not rep.symmetric
        assert not rep.even_order
        assert set(rep.witnesses) == {"B", "DoubleB", "DSDD"}

    def test_counterexample_report(self, counterexample_tensor):
        rep = classify_all(counterexample_tensor)
        assert rep.verdicts["ProductIneq"] is True
        assert rep.verdicts["QuasiDoubleB"] is False
        assert rep.verdicts["DoubleB"] is False
        assert rep.verdicts["B"] is False
        assert rep.symmetric and rep.even_order

    def test_unit_tensor_all_true(self):
        rep = classify_all(unit_tensor(4, 2))
        assert all(v is True for v in rep.verdicts.values())
        assert rep.witnesses == {}

    def test_dim1_marks_pairwise_inapplicable(self):
        rep = classify_all(make_tensor(2, 1, [((1, 1), 2.0)]))
        assert rep.verdicts["B"] is True
        assert rep.verdicts["Z"] is True
        for name in ("DoubleB", "QuasiDoubleB", "QuasiDoubleB0", "DSDD", "QDSDD", "ProductIneq"):
            assert rep.verdicts[name] is None

    def test_margin_tightens_verdicts(self, remark_tensor):
        # the 0.4 > 0.3 pair survives a margin of 0.05 but not 0.2
        assert classify_all(remark_tensor, margin=0.05).verdicts["QuasiDoubleB"] is True
        assert classify_all(remark_tensor, margin=0.2).verdicts["QuasiDoubleB"] is False

    def test_every_false_verdict_has_witness(self):
        rng = np.random.default_rng(33)
        for _ in range(200):
            n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            rep = classify_all(random_tensor(rng, m, n))
            for name, verdict in rep.verdicts.items():
                if verdict is False:
                    assert name in rep.witnesses
