import numpy as np
import pytest
from scipy.optimize import nnls

from helpers import random_channel, random_density
from qadv.errors import ValidationError
from qadv.harness import example1_channels, example1_cq_channels
from qadv.qobjects import (
    CQChannel,
    ProbDist,
    apply_matrix,
    channel_adjoint_apply,
    channel_apply,
    channel_from_kraus,
    channel_tensor,
    cq_apply,
    cq_channel,
    cq_to_eb_channel,
    density_from_matrix,
    eb_channel_build,
    effective_apply,
    identity_channel,
    maximally_mixed,
    partial_trace_register,
    point_mass,
    pure_state,
    uniform_dist,
)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


class TestDensityMatrix:
    def test_accepts_maximally_mixed(self):
        density_from_matrix(np.eye(2) / 2)

    def test_accepts_classical_state(self):
        density_from_matrix(np.diag([0.7, 0.3]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError):
            density_from_matrix(np.diag([1.1, -0.1]))

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValidationError):
            density_from_matrix(np.diag([0.7, 0.7]))


class TestChannelConstruction:
    def test_identity_channel(self):
        ch = channel_from_kraus([np.eye(2)])
        assert ch.in_dim == ch.out_dim == 2

    def test_named_qubit_pair_kraus_set_is_complete(self):
        s = 1.0 / np.sqrt(2.0)
        ch = channel_from_kraus(
            [np.outer(KET0, KET0), s * np.outer(KET0, KET1), s * np.outer(KET1, KET1)]
        )
        total = sum(k.conj().T @ k for k in ch.kraus)
        assert np.allclose(total, np.eye(2))

    def test_incomplete_kraus_set_rejected(self):
        with pytest.raises(ValidationError):
            channel_from_kraus([np.outer(KET0, KET0)])


class TestChannelApply:
    def test_identity_fixes_states(self, rng):
        ch = identity_channel(2)
        rho = random_density(rng, 2)
        assert np.allclose(channel_apply(ch, rho).mat, rho.mat)

    def test_named_pair_scrambling_branches(self):
        n1, n2 = example1_channels()
        assert np.allclose(channel_apply(n1, pure_state(KET1)).mat, np.eye(2) / 2)
        assert np.allclose(channel_apply(n2, pure_state(KET0)).mat, np.eye(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            channel_apply(identity_channel(2), density_from_matrix(np.eye(3) / 3))

    def test_preserves_trace_and_positivity(self, rng):
        # DensityMatrix construction revalidates the output each time
        for _ in range(1000):
            ch = random_channel(rng, 2, 2, int(rng.integers(1, 4)))
            channel_apply(ch, random_density(rng, 2))


class TestChannelAdjoint:
    def test_unital(self, rng):
        ch = random_channel(rng, 3, 2, 2)
        assert np.allclose(channel_adjoint_apply(ch, np.eye(2)), np.eye(3))

    def test_duality_with_apply(self, rng):
        for _ in range(20):
            ch = random_channel(rng, 2, 3, 2)
            rho = random_density(rng, 2)
            a = random_density(rng, 3).mat
            lhs = np.trace(a @ apply_matrix(ch, rho.mat))
            rhs = np.trace(channel_adjoint_apply(ch, a) @ rho.mat)
            assert abs(lhs - rhs) <= 1e-10

    def test_identity_channel(self, rng):
        a = random_density(rng, 2).mat
        assert np.allclose(channel_adjoint_apply(identity_channel(2), a), a)


class TestChannelTensor:
    def test_identity_tensor(self, rng):
        big = channel_tensor(identity_channel(2), identity_channel(2))
        rho = random_density(rng, 4)
        assert np.allclose(channel_apply(big, rho).mat, rho.mat)

    def test_product_input_factorization(self, rng):
        a = random_channel(rng, 2, 2, 2)
        b = random_channel(rng, 2, 2, 3)
        rho, tau = random_density(rng, 2), random_density(rng, 2)
        joint = apply_matrix(channel_tensor(a, b), np.kron(rho.mat, tau.mat))
        split = np.kron(apply_matrix(a, rho.mat), apply_matrix(b, tau.mat))
        assert np.max(np.abs(joint - split)) <= 1e-10

    def test_named_pair_two_copies(self):
        n1, _ = example1_channels()
        big = channel_tensor(n1, n1)
        out = apply_matrix(big, np.kron(np.outer(KET1, KET1), np.outer(KET1, KET1)))
        assert np.allclose(out, np.eye(4) / 4)

    def test_associative_up_to_reshuffle(self, rng):
        chans = [random_channel(rng, 2, 2, 2) for _ in range(3)]
        left = channel_tensor(channel_tensor(chans[0], chans[1]), chans[2])
        right = channel_tensor(chans[0], channel_tensor(chans[1], chans[2]))
        rho = np.kron(
            np.kron(random_density(rng, 2).mat, random_density(rng, 2).mat),
            random_density(rng, 2).mat,
        )
        assert np.max(np.abs(apply_matrix(left, rho) - apply_matrix(right, rho))) <= 1e-10


class TestEBChannel:
    def test_dephasing_statistics(self):
        ch = eb_channel_build(
            [KET0, KET1],
            [density_from_matrix(np.outer(KET0, KET0)), density_from_matrix(np.outer(KET1, KET1))],
        )
        out = apply_matrix(ch, np.outer(PLUS, PLUS.conj()))
        assert np.allclose(out, np.eye(2) / 2)

    def test_point_mass_measurement(self, rng):
        outputs = [random_density(rng, 2), random_density(rng, 2)]
        ch = eb_channel_build([KET0, KET1], outputs)
        assert np.allclose(apply_matrix(ch, np.outer(KET0, KET0)), outputs[0].mat)

    def test_matches_direct_kraus_build(self, rng):
        n1, _ = example1_channels()
        rebuilt = eb_channel_build(
            [KET0, KET1],
            [density_from_matrix(np.outer(KET0, KET0)), maximally_mixed(2)],
        )
        for _ in range(10):
            rho = random_density(rng, 2).mat
            assert np.max(np.abs(apply_matrix(rebuilt, rho) - apply_matrix(n1, rho))) <= 1e-10

    def test_rejects_non_orthonormal_basis(self):
        with pytest.raises(ValidationError):
            eb_channel_build([KET0, PLUS], [maximally_mixed(2), maximally_mixed(2)])

    def test_output_in_convex_hull_of_prepared_states(self, rng):
        # diagonal prepared states: membership solvable by nonnegative lsq
        outputs = [density_from_matrix(np.diag(rng.dirichlet(np.ones(3)))) for _ in range(3)]
        basis = [np.eye(3, dtype=complex)[:, i] for i in range(3)]
        ch = eb_channel_build(basis, outputs)
        for _ in range(10):
            out = np.real(np.diag(apply_matrix(ch, random_density(rng, 3).mat)))
            stack = np.column_stack([np.real(np.diag(s.mat)) for s in outputs])
            system = np.vstack([stack, np.ones((1, 3))])
            target = np.concatenate([out, [1.0]])
            _, residual = nnls(system, target)
            assert residual <= 1e-8


class TestCQChannel:
    def test_cq_apply_point_mass(self, rng):
        w = cq_channel({"a": random_density(rng, 2), "b": random_density(rng, 2)})
        out = cq_apply(w, point_mass(w.alphabet, "b"))
        assert np.allclose(out.mat, w.output("b").mat)

    def test_cq_apply_uniform_average(self):
        w = cq_channel({"0": np.diag([1.0, 0.0]), "1": np.diag([0.0, 1.0])})
        assert np.allclose(cq_apply(w, uniform_dist(w.alphabet)).mat, np.eye(2) / 2)

    def test_cq_apply_named_instance(self):
        w1, _ = example1_cq_channels()
        out = cq_apply(w1, ProbDist(w1.alphabet, [0.5, 0.5]))
        assert np.allclose(out.mat, np.diag([0.75, 0.25]))

    def test_alphabet_mismatch(self):
        w1, _ = example1_cq_channels()
        with pytest.raises(ValidationError):
            cq_apply(w1, point_mass(("x", "y"), "x"))

    def test_effective_point_mass_single_block(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        out = effective_apply(w, point_mass(w.alphabet, "0"))
        expected = np.zeros((4, 4), dtype=complex)
        expected[:2, :2] = w.output("0").mat
        assert np.allclose(out.mat, expected)

    def test_effective_block_traces(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        p = ProbDist(w.alphabet, rng.dirichlet(np.ones(2)))
        out = effective_apply(w, p).mat
        for i, weight in enumerate(p.weights):
            block = out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]
            assert np.trace(block).real == pytest.approx(weight)

    def test_effective_marginal_is_cq_apply(self, rng):
        w = cq_channel({"0": random_density(rng, 3), "1": random_density(rng, 3)})
        p = ProbDist(w.alphabet, rng.dirichlet(np.ones(2)))
        marginal = partial_trace_register(effective_apply(w, p).mat, 2, 3)
        assert np.allclose(marginal, cq_apply(w, p).mat)


class TestCQToEB:
    def test_point_mass_no_register(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        ch = cq_to_eb_channel(w, keep_register=False)
        basis_state = np.diag([0.0, 1.0]).astype(complex)
        assert np.allclose(apply_matrix(ch, basis_state), w.output("1").mat)

    def test_register_form_reproduces_effective_states(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        ch = cq_to_eb_channel(w, keep_register=True)
        p = ProbDist(w.alphabet, rng.dirichlet(np.ones(2)))
        applied = apply_matrix(ch, np.diag(p.weights).astype(complex))
        assert np.max(np.abs(applied - effective_apply(w, p).mat)) <= 1e-12

    def test_superposition_is_measured(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        ch = cq_to_eb_channel(w, keep_register=False)
        out = apply_matrix(ch, np.outer(PLUS, PLUS.conj()))
        expected = 0.5 * w.output("0").mat + 0.5 * w.output("1").mat
        assert np.allclose(out, expected)

    def test_absorbs_prior_dephasing(self, rng):
        w = cq_channel({"0": random_density(rng, 2), "1": random_density(rng, 2)})
        ch = cq_to_eb_channel(w, keep_register=False)
        dephase = eb_channel_build(
            [KET0, KET1],
            [density_from_matrix(np.outer(KET0, KET0)), density_from_matrix(np.outer(KET1, KET1))],
        )
        for _ in range(10):
            rho = random_density(rng, 2).mat
            direct = apply_matrix(ch, rho)
            via_dephasing = apply_matrix(ch, apply_matrix(dephase, rho))
            assert np.max(np.abs(direct - via_dephasing)) <= 1e-12

    def test_outputs_are_validated(self):
        with pytest.raises(ValidationError):
            CQChannel(("0",), (np.eye(2),))
