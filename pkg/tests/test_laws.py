import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matlog.errors import InvalidCompanionPairError, NotHermitianPDError
from matlog.laws import (
    Verdict,
    classify_prop1,
    falsify_theorem,
    gen_commuting_arg_pair,
    gen_item3_pair,
    log_law_report,
    random_prop3_instance,
    trial_rng,
    verify_prop3,
)
from matlog.laws.generators import (
    gen_commuting_hermitian_pd,
    joint_triangularize,
    random_dense,
    random_hermitian_pd,
    random_upper,
)
from matlog.laws.prop3 import NonCommutingBlocksError, Prop3Instance
from matlog.laws.prop4 import verify_prop4_structure
from matlog.linalg import fro
from matlog.matfun import mat_exp, mat_log_principal
from matlog.scalar import TWO_PI, Rectangle, companions, phi_scalar

# a companion pair: phi(1) = phi(V1) with V1 in the strip 2pi < Im < 4pi
U1 = 1.0 + 0j
V1 = companions(U1, Rectangle(-10, 10, TWO_PI, 2 * TWO_PI))[0].v


def _arg(z):
    return cmath.phase(z)


class TestLawReport:
    def test_positive_diagonals(self):
        r = log_law_report(np.diag([2, 3]), np.diag([5, 7]))
        assert r.verdict is Verdict.LAW_HOLDS_COMMUTING
        assert r.law_residual <= 1e-12

    def test_wrapped_argument(self):
        z = np.array([[cmath.exp(0.9j * math.pi)]])
        r = log_law_report(z, z)
        assert r.verdict in (Verdict.INAPPLICABLE, Verdict.LAW_FAILS)
        # log(xy) = -0.2 pi i, log x + log y = 1.8 pi i
        assert r.law_residual == pytest.approx(2 * math.pi / (2 * 0.9 * math.pi + 1), rel=1e-12)

    def test_random_noncommuting_fails(self):
        rng = trial_rng(11)
        for _ in range(10):
            r = log_law_report(random_dense(rng, 2), random_dense(rng, 2))
            assert r.verdict is Verdict.LAW_FAILS
            assert r.law_residual > 1e-4

    def test_on_cut_is_inapplicable(self):
        r = log_law_report(np.diag([-1.0, 1.0]), np.eye(2))
        assert r.verdict is Verdict.INAPPLICABLE
        assert r.to_json()["verdict"] == "INAPPLICABLE"

    def test_provenance_and_low_confidence(self):
        x = np.diag([-1 + 1e-8j, 1.0])
        r = log_law_report(x, np.eye(2), seed=5, trial=9)
        assert r.low_confidence
        assert (r.seed, r.trial) == (5, 9)


class TestCommutingArgPair:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_construction(self, n):
        for t in range(20):
            x, y = gen_commuting_arg_pair(trial_rng(3, t), n)
            assert fro(x @ y - y @ x) <= 1e-11 * fro(x) * fro(y)
            assert log_law_report(x, y).verdict is Verdict.LAW_HOLDS_COMMUTING

    def test_scalar_arguments(self):
        for t in range(50):
            x, y = gen_commuting_arg_pair(trial_rng(8, t), 1)
            assert abs(_arg(x[0, 0]) + _arg(y[0, 0])) < math.pi - 0.1 + 1e-12

    def test_seed_reproducible(self):
        a = gen_commuting_arg_pair(42, 3)
        b = gen_commuting_arg_pair(42, 3)
        assert all(np.array_equal(p, q) for p, q in zip(a, b))

    def test_triangular(self):
        x, y = gen_commuting_arg_pair(trial_rng(1), 4, triangular=True)
        assert not np.any(np.tril(x, -1)) and not np.any(np.tril(y, -1))
        assert fro(x @ y - y @ x) <= 1e-11 * fro(x) * fro(y)


def test_commuting_logs_give_commuting_matrices():
    # logs built as polynomials in one matrix commute exactly; so must x and y
    rng = trial_rng(77)
    for n in (2, 3, 4):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m *= 1.5 / fro(m)
        la, lb = m, 0.3 * m @ m - 0.7 * m
        assert fro(la @ lb - lb @ la) <= 1e-12 * fro(la) * fro(lb) + 1e-15
        x, y = mat_exp(la), mat_exp(lb)
        assert fro(x @ y - y @ x) <= 1e-9 * fro(x) * fro(y)


class TestItem3:
    def test_closed_form_off_diagonal(self):
        lam, mu = 0.2 - 0.1j, -0.3 + 0.4j
        inst = gen_item3_pair(U1, V1, lam, mu)
        c = phi_scalar(U1)
        e_sum = mat_exp(inst.a + inst.b)
        e_prod = mat_exp(inst.a) @ mat_exp(inst.b)
        expected = c * cmath.exp(lam + mu)
        assert e_sum[0, 1] == pytest.approx(expected, rel=1e-12)
        assert e_prod[0, 1] == pytest.approx(expected, rel=1e-12)
        assert inst.identity_residual <= 1e-10
        assert inst.commutator_norm >= 1e-3

    def test_conjugated_instance(self):
        p = np.array([[1.0, 0.4 - 0.2j], [0.1j, 0.9]])
        inst = gen_item3_pair(U1, V1, 0.1, 0.2, conjugator=p)
        assert inst.identity_residual <= 1e-10
        ev = np.sort_complex(np.linalg.eigvals(inst.a))
        assert np.allclose(ev, np.sort_complex([0.1, 1.1]), atol=1e-12)

    def test_degenerate_pairs_rejected(self):
        with pytest.raises(InvalidCompanionPairError):
            gen_item3_pair(U1, U1, 0, 0)
        with pytest.raises(InvalidCompanionPairError):
            gen_item3_pair(U1, 2 + 1j, 0, 0)
        with pytest.raises(InvalidCompanionPairError):
            gen_item3_pair(0, V1, 0, 0)


class TestClassifyProp1:
    def test_item3_instance(self):
        inst = gen_item3_pair(U1, V1, 0.3, -0.2)
        cls = classify_prop1(inst.a, inst.b)
        assert cls.applicable and cls.item3
        assert cls.structural_check == "PARTIAL"

    def test_lattice_pair(self):
        a = np.diag([0, TWO_PI * 1j])
        b = np.array([[0, 1], [0, TWO_PI * 1j]])
        cls = classify_prop1(a, b)
        assert cls.applicable
        assert cls.item1
        assert 1 in cls.items

    def test_commuting_inapplicable(self):
        assert not classify_prop1(np.diag([1, 2]), np.diag([3, 4])).applicable

    def test_identity_failing_inapplicable(self):
        rng = trial_rng(5)
        assert not classify_prop1(random_dense(rng, 2), random_dense(rng, 2)).applicable


class TestProp3:
    def test_item3_embedding(self):
        lam, mu = 0.25 + 0.1j, -0.4j
        inst = Prop3Instance(np.array([[lam]]), np.array([[mu + V1]]), lam + U1, mu, [0.0], [1.0])
        res = verify_prop3(inst)
        assert res.identity_holds and res.cond6_holds
        assert inst.w[0] == pytest.approx(-U1, abs=1e-14)
        assert res.pivot_k == 1
        assert res.item4_holds
        assert phi_scalar(V1 - U1) == pytest.approx(phi_scalar(-U1), rel=1e-10)

    def test_generic_instance_fails_both(self):
        rng = trial_rng(2)
        for n in (3, 4, 5):
            res = verify_prop3(random_prop3_instance(rng, n, "generic"))
            assert not res.identity_holds and not res.cond6_holds
            assert res.pivot_k is not None

    def test_zero_columns_commute(self):
        a0 = np.triu(np.arange(1, 5).reshape(2, 2)) * (0.3 + 0.1j)
        b0 = 2 * a0 + np.eye(2)
        inst = Prop3Instance(a0, b0, 0.5, -0.1j, [0, 0], [0, 0])
        res = verify_prop3(inst)
        assert res.identity_holds and res.cond6_holds and res.pivot_k is None
        a, b = inst.assemble()
        assert fro(a @ b - b @ a) <= 1e-14

    def test_commuting_kind(self):
        rng = trial_rng(4)
        for n in (3, 4, 5):
            inst = random_prop3_instance(rng, n, "commuting")
            assert np.linalg.norm(inst.w) <= 1e-12 * (1 + np.linalg.norm(inst.u_col))
            assert verify_prop3(inst).identity_holds

    def test_noncommuting_blocks_rejected(self):
        with pytest.raises(NonCommutingBlocksError):
            Prop3Instance(np.array([[1, 1], [0, 2]]), np.array([[1, 0], [0, 3]]), 0, 0, [0, 0], [0, 0])

    def test_lower_triangular_rejected(self):
        with pytest.raises(ValueError):
            Prop3Instance(np.array([[1, 0], [1, 1]]), np.eye(2), 0, 0, [0, 0], [0, 0])

    def test_joint_triangularize(self):
        rng = trial_rng(9)
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a0, b0 = m, m @ m - 2 * m
        q, ta, tb = joint_triangularize(a0, b0)
        assert fro(q @ ta @ q.conj().T - a0) <= 1e-10 * fro(a0)
        assert fro(q @ tb @ q.conj().T - b0) <= 1e-10 * fro(b0)
        Prop3Instance(ta, tb, 0.1, 0.2, np.ones(4), np.zeros(4))


class TestProp4:
    def test_equal_pair(self):
        x = random_hermitian_pd(trial_rng(1), 3)
        r = verify_prop4_structure(x, x)
        assert r.identity_holds and r.chain_holds and r.log_x_hermitian

    def test_commuting_pair(self):
        x, y = gen_commuting_hermitian_pd(trial_rng(2), 4)
        r = verify_prop4_structure(x, y)
        assert r.identity_holds and r.chain_holds

    def test_noncommuting_pair(self):
        rng = trial_rng(3)
        r = verify_prop4_structure(random_hermitian_pd(rng, 3), random_hermitian_pd(rng, 3))
        assert not r.identity_holds and r.chain_holds
        assert r.log_x_hermitian and r.log_y_hermitian

    def test_rejects_bad_input(self):
        with pytest.raises(NotHermitianPDError):
            verify_prop4_structure(np.array([[1, 1], [0, 1]]), np.eye(2))
        with pytest.raises(NotHermitianPDError):
            verify_prop4_structure(np.diag([1.0, -1.0]), np.eye(2))


class TestEnsembles:
    @given(st.integers(0, 2**63 - 1))
    def test_envelope(self, seed):
        rng = trial_rng(seed)
        for m in (random_dense(rng, 2), random_upper(rng, 3), random_hermitian_pd(rng, 3)):
            assert 0.5 <= fro(m) <= 10.0
            ev = np.linalg.eigvals(m)
            cut = np.where(ev.real > 0, np.abs(ev), np.abs(ev.imag))
            assert cut.min() >= 0.1 - 1e-12
        m = random_hermitian_pd(rng, 3)
        assert fro(m - m.conj().T) == 0.0


class TestFalsify:
    @pytest.mark.parametrize("target,n", [("thm1", 2), ("thm2", 3), ("thm2", 4), ("prop4", 3)])
    def test_small_run_clean(self, target, n):
        rep = falsify_theorem(target, 60, seed=1, n=n, search_iters=40)
        assert rep.passed
        assert rep.min_law_residual > 1e-4
        assert rep.min_law_residual <= rep.min_law_residual_sampled
        assert rep.controls["count"] == 1 and rep.controls["failures"] == []
        assert sum(rep.histogram.values()) == rep.sampled - rep.filtered_commuting - rep.inapplicable

    def test_controls_hold(self):
        rep = falsify_theorem("thm2", 10, seed=5, n=3, controls=25, search_starts=0)
        assert rep.controls == {"count": 25, "failures": []}

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            falsify_theorem("thm1", 0)

    def test_deterministic(self):
        a = falsify_theorem("thm1", 40, seed=9, search_iters=30)
        b = falsify_theorem("thm1", 40, seed=9, search_iters=30)
        assert a.min_law_residual == b.min_law_residual
        assert np.array_equal(a.argmin["x"], b.argmin["x"])

    def test_argmin_reproduces_residual(self):
        rep = falsify_theorem("thm2", 40, seed=2, n=3, search_iters=30)
        x, y = rep.argmin["x"], rep.argmin["y"]
        assert log_law_report(x, y).law_residual == rep.min_law_residual
        lx, ly = mat_log_principal(x), mat_log_principal(y)
        assert fro(lx @ ly - ly @ lx) > 1e-6
