import numpy as np
import pytest

from qscocycle import (
    SemigroupFamily,
    StepFunction,
    assemble,
    c_operator_fd,
    cocycle_defect,
    exp_inner,
    from_hlc,
    full_matrix_element,
    op_norm,
    random_contractive,
    sliced_element,
    t_operator_fd,
)
from qscocycle.generator import lift_map
from qscocycle.semigroups import dual_generator

from oracles import random_complex, random_step, random_unit


def scalar_hp():
    return from_hlc(np.zeros((1, 1)), np.ones((1, 1)), np.ones((1, 1)))


def zero_generator(dim_h, dim_k):
    return assemble(
        np.zeros((dim_h, dim_h)),
        np.zeros((dim_h * dim_k, dim_h)),
        np.zeros((dim_h, dim_h * dim_k)),
        np.eye(dim_h * dim_k),
        dim_h=dim_h,
        dim_k=dim_k,
    )


def eps_norm(f, a=0.0, b=None):
    return float(np.sqrt(abs(exp_inner(f, f, a, b))))


class TestStepFunction:
    def test_validation(self):
        with pytest.raises(ValueError, match="first breakpoint"):
            StepFunction(np.array([0.5]), np.zeros((1, 1)), 1.0)
        with pytest.raises(ValueError, match="increasing"):
            StepFunction(np.array([0.0, 0.5, 0.5]), np.zeros((3, 1)), 1.0)
        with pytest.raises(ValueError, match="values"):
            StepFunction(np.array([0.0, 0.5]), np.zeros((1, 1)), 1.0)
        with pytest.raises(ValueError, match="support_end"):
            StepFunction(np.array([0.0, 0.5]), np.zeros((2, 1)), 0.3)

    def test_right_continuous_evaluation(self):
        f = StepFunction(np.array([0.0, 1.0]), np.array([[1.0], [2.0]]), 3.0)
        assert f(0.0)[0] == 1.0
        assert f(0.999)[0] == 1.0
        assert f(1.0)[0] == 2.0
        assert f(2.999)[0] == 2.0
        assert f(3.0)[0] == 0.0
        assert f(10.0)[0] == 0.0
        with pytest.raises(ValueError, match="t >= 0"):
            f(-0.1)

    def test_shifted(self):
        f = StepFunction(np.array([0.0, 1.0]), np.array([[1.0], [2.0]]), 3.0)
        g = f.shifted(0.5)
        assert g(0.0)[0] == 1.0
        assert g(0.5)[0] == 2.0
        assert g(2.4)[0] == 2.0
        assert g(2.5)[0] == 0.0
        assert f.shifted(5.0).support_end == 0.0

    def test_reversal_involution_off_breakpoints(self):
        rng = np.random.default_rng(0)
        f = random_step(rng, 2, 4, 1.5)
        t = 1.3
        h = f.reversed_on(t).reversed_on(t)
        for s in np.linspace(0.013, 2.4, 37):
            assert np.allclose(h(s), f(s), atol=1e-12)

    def test_reversal_reflects(self):
        f = StepFunction(np.array([0.0, 1.0]), np.array([[1.0], [2.0]]), 3.0)
        r = f.reversed_on(2.0)
        # On [0, 2): r(s) = f(2 - s); f is 1 on [0,1), 2 on [1,3).
        assert r(0.25)[0] == 2.0
        assert r(1.5)[0] == 1.0
        # Unchanged past the reversal horizon.
        assert r(2.5)[0] == 2.0
        assert r(3.5)[0] == 0.0

    def test_zero_and_constant_constructors(self):
        z = StepFunction.zero(2)
        assert z(0.7).tolist() == [0.0, 0.0]
        c = StepFunction.constant([1.0, 2.0j], 1.5)
        assert c(1.49).tolist() == [1.0, 2.0j]
        assert c(1.5).tolist() == [0.0, 0.0]


class TestExpInner:
    def test_zero_functions(self):
        z = StepFunction.zero(1)
        assert exp_inner(z, z, 0.0, 5.0) == 1.0

    def test_constant(self):
        c = np.array([0.3 + 0.4j, -1.0j])
        f = StepFunction.constant(c, 1.0)
        expect = np.exp(np.vdot(c, c).real)
        assert abs(exp_inner(f, f, 0.0, 1.0) - expect) < 1e-12

    def test_partial_overlap_by_hand(self):
        # f = 1 on [0,2), g = i on [1,3): overlap [1,2) contributes <1, i> = i.
        f = StepFunction.constant([1.0], 2.0)
        g = StepFunction(np.array([0.0, 1.0]), np.array([[0.0], [1.0j]]), 3.0)
        assert abs(exp_inner(f, g, 0.0, 3.0) - np.exp(1.0j)) < 1e-14

    def test_interval_split_multiplicative(self):
        rng = np.random.default_rng(1)
        f = random_step(rng, 2, 4, 2.0)
        g = random_step(rng, 2, 3, 2.0)
        whole = exp_inner(f, g, 0.0, None)
        split = exp_inner(f, g, 0.0, 0.9) * exp_inner(f, g, 0.9, None)
        assert abs(whole - split) <= 1e-12 * abs(whole)

    def test_error_cases(self):
        z = StepFunction.zero(1)
        with pytest.raises(ValueError, match="order"):
            exp_inner(z, z, 2.0, 1.0)
        with pytest.raises(ValueError, match="mismatch"):
            exp_inner(z, StepFunction.zero(2), 0.0, 1.0)


class TestSlicedElement:
    def test_identity_cocycle(self):
        F = zero_generator(2, 1)
        rng = np.random.default_rng(2)
        f = random_step(rng, 1, 3, 1.5)
        g = random_step(rng, 1, 3, 1.5)
        t = 1.2
        out = sliced_element(F, f, g, t)
        expect = exp_inner(f, g, 0.0, t) * np.eye(2)
        assert op_norm(out.matrix - expect) <= 1e-12

    def test_time_zero(self):
        F = scalar_hp()
        z = StepFunction.zero(1)
        assert np.array_equal(sliced_element(F, z, z, 0.0).matrix, np.eye(1))

    def test_scalar_hp_vacuum(self):
        z = StepFunction.zero(1)
        out = sliced_element(scalar_hp(), z, z, 1.0)
        assert abs(out.matrix[0, 0] - 0.6065306597126334) < 1e-14

    def test_negative_time_rejected(self):
        z = StepFunction.zero(1)
        with pytest.raises(ValueError, match="nonnegative"):
            sliced_element(scalar_hp(), z, z, -1.0)

    def test_markov_slice_matches_q_exactly(self):
        F = random_contractive(3, 2, seed=3)
        fam = SemigroupFamily(F)
        z = StepFunction.zero(2)
        for t in (0.4, 1.1):
            assert np.array_equal(
                sliced_element(fam, z, z, t).matrix,
                fam.q(np.zeros(2), np.zeros(2), t),
            )

    def test_refinement_invariance(self):
        F = random_contractive(2, 2, seed=4)
        rng = np.random.default_rng(5)
        f = random_step(rng, 2, 3, 1.5)
        g = random_step(rng, 2, 3, 1.5)
        t = 1.4
        base = sliced_element(F, f, g, t).matrix
        # Insert spurious breakpoints with unchanged values.
        extra = np.sort(np.concatenate([f.breakpoints, [0.123, 0.77, 1.111]]))
        refined = StepFunction(extra, np.array([f(b) for b in extra]), f.support_end)
        out = sliced_element(F, refined, g, t).matrix
        assert op_norm(out - base) <= 1e-12 * max(1.0, op_norm(base))

    def test_cauchy_schwarz_contraction_bound(self):
        F = random_contractive(3, 2, seed=6)
        rng = np.random.default_rng(7)
        for _ in range(10):
            f = random_step(rng, 2, 4, 1.5)
            g = random_step(rng, 2, 4, 1.5)
            t = float(rng.uniform(0.2, 2.0))
            out = sliced_element(F, f, g, t).matrix
            bound = eps_norm(f, 0.0, t) * eps_norm(g, 0.0, t)
            assert op_norm(out) <= bound * (1 + 1e-9)


class TestFullMatrixElement:
    def test_identity_cocycle(self):
        F = zero_generator(2, 1)
        rng = np.random.default_rng(8)
        f = random_step(rng, 1, 2, 1.0)
        g = random_step(rng, 1, 2, 1.0)
        u, v = random_unit(rng, 2), random_unit(rng, 2)
        got = full_matrix_element(F, u, f, v, g, 0.8)
        expect = np.vdot(u, v) * exp_inner(f, g, 0.0, None)
        assert abs(got - expect) < 1e-12

    def test_zero_state(self):
        F = scalar_hp()
        z = StepFunction.zero(1)
        assert full_matrix_element(F, [1.0], z, [0.0], z, 1.0) == 0.0

    def test_scalar_hp_value(self):
        z = StepFunction.zero(1)
        got = full_matrix_element(scalar_hp(), [1.0], z, [1.0], z, 1.0)
        assert abs(got - 0.6065306597126334) < 1e-14

    def test_dimension_check(self):
        z = StepFunction.zero(1)
        with pytest.raises(ValueError, match="dimensions"):
            full_matrix_element(scalar_hp(), [1.0, 0.0], z, [1.0], z, 1.0)


class TestCocycleLaw:
    def test_degenerate_times_exact(self):
        F = random_contractive(2, 1, seed=9)
        rng = np.random.default_rng(10)
        f = random_step(rng, 1, 3, 1.5)
        g = random_step(rng, 1, 3, 1.5)
        assert cocycle_defect(F, f, g, 0.0, 1.3) == 0.0
        assert cocycle_defect(F, f, g, 1.3, 0.0) == 0.0

    def test_identity_cocycle(self):
        F = zero_generator(1, 2)
        rng = np.random.default_rng(11)
        f = random_step(rng, 2, 3, 2.0)
        g = random_step(rng, 2, 3, 2.0)
        assert cocycle_defect(F, f, g, 0.7, 0.9) <= 1e-14

    def test_random_contractive_cases(self):
        rng = np.random.default_rng(12)
        for seed in range(8):
            F = random_contractive(
                int(rng.integers(1, 5)), int(rng.integers(1, 3)), seed=seed,
                mode="unitary_C" if seed % 2 else "strict_C",
            )
            f = random_step(rng, F.dim_k, 5, 2.0)
            g = random_step(rng, F.dim_k, 5, 2.0)
            r, t = rng.uniform(0, 2, size=2)
            defect = cocycle_defect(F, f, g, r, t)
            scale = op_norm(sliced_element(F, f, g, r + t).matrix) * abs(
                exp_inner(f, g, r + t, None)
            )
            assert defect <= 1e-10 * max(scale, 1e-6)

    def test_negative_times_rejected(self):
        z = StepFunction.zero(1)
        with pytest.raises(ValueError, match="nonnegative"):
            cocycle_defect(scalar_hp(), z, z, -0.1, 1.0)


class TestDualConsistency:
    def test_full_elements_conjugate_under_time_reversal(self):
        rng = np.random.default_rng(13)
        F = random_contractive(3, 2, seed=14)
        dual = dual_generator(F)
        f = random_step(rng, 2, 4, 1.6)
        g = random_step(rng, 2, 4, 1.6)
        u, v = random_unit(rng, 3), random_unit(rng, 3)
        for t in (0.35, 0.9, 1.7):
            lhs = full_matrix_element(dual, u, f, v, g, t)
            rhs = np.conj(
                full_matrix_element(F, v, g.reversed_on(t), u, f.reversed_on(t), t)
            )
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestFiniteDifferenceRecovery:
    def test_zero_generator_t_operator(self):
        F = zero_generator(2, 2)
        # H_{e_a,0} = H_{0,0} = 0 for the identity cocycle: differences vanish.
        assert op_norm(t_operator_fd(F, np.zeros(2), 0.5)) == 0.0

    def test_scalar_hp_recovers_l(self):
        got = t_operator_fd(scalar_hp(), [0.0], 1e-3)
        assert abs(got[0, 0] - 1.0) < 5e-3

    def test_t_operator_halving_trend(self):
        F = random_contractive(3, 2, seed=15)
        rng = np.random.default_rng(16)
        d = random_complex(rng, 2)
        exact = F.L + F.C @ lift_map(d, 3)
        errs = [op_norm(t_operator_fd(F, d, t) - exact) for t in (1e-2, 5e-3, 2.5e-3)]
        assert errs[0] > 1e-8
        for small, big in zip(errs[1:], errs[:-1]):
            assert 0.4 <= small / big <= 0.6

    def test_positive_step_required(self):
        with pytest.raises(ValueError, match="positive"):
            t_operator_fd(scalar_hp(), [0.0], 0.0)
        with pytest.raises(ValueError, match="positive"):
            c_operator_fd(scalar_hp(), -1e-3)

    def test_zero_generator_c_operator(self):
        F = zero_generator(1, 1)
        t = 0.25
        got = c_operator_fd(F, t)
        # Second difference of e^{t<c,d>}: (e^t - 1 - 1 + 1)/t.
        assert abs(got[0, 0] - (np.exp(t) - 1.0) / t) < 1e-13

    def test_scalar_hp_recovers_c(self):
        errs = [abs(c_operator_fd(scalar_hp(), t)[0, 0] - 1.0) for t in (1e-2, 1e-3)]
        assert errs[1] < 5e-3
        assert errs[1] < errs[0]

    def test_drift_only_slicing(self):
        # dim_k = 0: the cocycle is the semigroup of K and slices reduce to
        # plain exponentials.
        F = assemble(np.array([[-0.3 + 0.7j]]), np.zeros((0, 1)), np.zeros((1, 0)),
                     np.zeros((0, 0)), dim_h=1, dim_k=0)
        z = StepFunction(np.zeros(1), np.zeros((1, 0)), 0.0)
        out = sliced_element(F, z, z, 1.5)
        assert abs(out.matrix[0, 0] - np.exp(1.5 * (-0.3 + 0.7j))) < 1e-13
        el = full_matrix_element(F, [1.0], z, [1.0], z, 1.5)
        assert abs(el - np.exp(1.5 * (-0.3 + 0.7j))) < 1e-13

    def test_rotation_gauge_recovered(self):
        theta = 0.8
        rot = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        dim_h = 2
        C = np.kron(rot, np.eye(dim_h))
        rng = np.random.default_rng(17)
        F = from_hlc(np.zeros((2, 2)), random_complex(rng, (4, 2), 0.4), C)
        got = c_operator_fd(F, 1e-3)
        assert op_norm(got - C) < 5e-3
        offdiag = got[0:2, 2:4]
        assert op_norm(offdiag - (-np.sin(theta)) * np.eye(2)) < 5e-3
