import math

import numpy as np
import pytest

from helpers import random_density, random_full_support_density
from qadv.divergences import relative_entropy
from qadv.errors import ValidationError
from qadv.harness import (
    classical_cq_channels,
    constant_channels,
    example1_channels,
    example1_cq_channels,
)
from qadv.optimize import (
    cq_informed_divergence,
    cq_pair_divergence,
    grad_informed,
    minimize_inf,
    minimize_informed,
)
from qadv.qobjects import (
    apply_matrix,
    cq_channel,
    density_from_matrix,
    identity_channel,
    maximally_mixed,
)


def informed_value(n1, n2, rho_mat):
    return relative_entropy(apply_matrix(n1, rho_mat), apply_matrix(n2, rho_mat))


def diagonal_profile_minimum(points: int = 200001) -> float:
    a = np.linspace(1e-9, 1.0 - 1e-9, points)
    vals = (1 + a) / 2 * np.log((1 + a) / a) + (1 - a) / 2 * np.log((1 - a) / (2 - a))
    return float(vals.min())


class TestGradInformed:
    def test_identity_channels_flat_along_traceless(self, rng):
        ch = identity_channel(2)
        rho = random_full_support_density(rng, 2)
        g = grad_informed(ch, ch, rho)
        delta = np.diag([1.0, -1.0])
        assert abs(np.real(np.trace(g @ delta))) <= 1e-9

    def test_matches_central_differences(self, rng):
        n1, n2 = example1_channels()
        for _ in range(5):
            rho = random_full_support_density(rng, 2)
            g = grad_informed(n1, n2, rho)
            d = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            d = 0.5 * (d + d.conj().T)
            d -= np.real(np.trace(d)) / 2 * np.eye(2)
            t = 1e-5
            fd = (
                informed_value(n1, n2, rho.mat + t * d)
                - informed_value(n1, n2, rho.mat - t * d)
            ) / (2 * t)
            assert abs(fd - np.real(np.trace(g @ d))) <= 1e-5 * max(1.0, abs(fd))

    def test_descent_direction_toward_interior_minimum(self):
        n1, n2 = example1_channels()
        g = grad_informed(n1, n2, maximally_mixed(2))
        # objective decreases toward larger <0|rho|0>
        assert np.real(np.trace(g @ np.diag([1.0, -1.0]))) < 0.0

    def test_support_violation_rejected(self):
        tau1 = density_from_matrix(np.diag([1.0, 0.0]))
        tau2 = density_from_matrix(np.diag([0.0, 1.0]))
        c1, c2 = constant_channels(tau1, tau2)
        with pytest.raises(ValidationError):
            grad_informed(c1, c2, maximally_mixed(2))


class TestMinimizeInformed:
    def test_identical_channels(self):
        n1, _ = example1_channels()
        res = minimize_informed(n1, n1)
        assert res.value == pytest.approx(0.0, abs=1e-9)

    def test_named_pair_matches_profile_oracle(self):
        n1, n2 = example1_channels()
        res = minimize_informed(n1, n2)
        oracle = diagonal_profile_minimum()
        assert abs(res.value - oracle) <= 2e-3
        assert abs(res.value - 0.5324) <= 2e-3
        assert res.gap <= 1e-6

    def test_constant_channels_input_independent(self, rng):
        tau1 = random_full_support_density(rng, 2)
        tau2 = random_full_support_density(rng, 2)
        c1, c2 = constant_channels(tau1, tau2)
        res = minimize_informed(c1, c2)
        assert res.value == pytest.approx(relative_entropy(tau1, tau2), abs=1e-9)

    def test_restarts_agree(self, rng):
        n1, n2 = example1_channels()
        base = minimize_informed(n1, n2).value
        for _ in range(20):
            start = random_full_support_density(rng, 2, floor=0.05)
            res = minimize_informed(n1, n2, start=start)
            assert abs(res.value - base) <= 10 * 1e-6

    def test_convexity_certificate(self, rng):
        n1, n2 = example1_channels()
        for _ in range(20):
            a = random_full_support_density(rng, 2).mat
            b = random_full_support_density(rng, 2).mat
            mid = informed_value(n1, n2, 0.5 * (a + b))
            avg = 0.5 * informed_value(n1, n2, a) + 0.5 * informed_value(n1, n2, b)
            assert mid <= avg + 1e-9


class TestMinimizeInf:
    def test_named_pair_collapses_to_zero(self):
        n1, n2 = example1_channels()
        res = minimize_inf(n1, n2)
        assert abs(res.value) <= 1e-6
        rho, sigma = res.argument
        assert np.max(np.abs(apply_matrix(n1, rho.mat) - np.eye(2) / 2)) <= 1e-3
        assert np.max(np.abs(apply_matrix(n2, sigma.mat) - np.eye(2) / 2)) <= 1e-3

    def test_identical_channels(self):
        n1, _ = example1_channels()
        assert minimize_inf(n1, n1).value == pytest.approx(0.0, abs=1e-9)

    def test_constant_orthogonal_channels_diverge(self):
        c1, c2 = constant_channels(
            density_from_matrix(np.diag([1.0, 0.0])),
            density_from_matrix(np.diag([0.0, 1.0])),
        )
        res = minimize_inf(c1, c2)
        assert res.value == math.inf
        assert res.argument is None

    def test_never_above_informed(self, rng):
        pairs = [example1_channels()]
        tau1 = random_full_support_density(rng, 2)
        tau2 = random_full_support_density(rng, 2)
        pairs.append(constant_channels(tau1, tau2))
        for n1, n2 in pairs:
            assert minimize_inf(n1, n2).value <= minimize_informed(n1, n2).value + 1e-8


class TestCQInformedDivergence:
    def test_named_pair(self):
        w1, w2 = example1_cq_channels()
        val, sym = cq_informed_divergence(w1, w2)
        assert val == pytest.approx(math.log(2.0), abs=1e-12)
        assert sym == "0"

    def test_identical(self):
        w1, _ = example1_cq_channels()
        val, sym = cq_informed_divergence(w1, w1)
        assert val == pytest.approx(0.0, abs=1e-12)
        assert sym == "0"

    def test_singleton_alphabet(self, rng):
        r1 = random_density(rng, 2)
        r2 = random_full_support_density(rng, 2)
        w1 = cq_channel({"x": r1})
        w2 = cq_channel({"x": r2})
        val, sym = cq_informed_divergence(w1, w2)
        assert val == pytest.approx(relative_entropy(r1, r2))
        assert sym == "x"

    def test_infinite_entries_participate(self):
        w1 = cq_channel({"0": np.eye(2) / 2, "1": np.diag([1.0, 0.0])})
        w2 = cq_channel({"0": np.diag([0.0, 1.0]), "1": np.eye(2) / 2})
        val, sym = cq_informed_divergence(w1, w2)
        assert val == pytest.approx(math.log(2.0))
        assert sym == "1"


class TestCQPairDivergence:
    def test_named_pair_witness(self):
        w1, w2 = example1_cq_channels()
        res = cq_pair_divergence(w1, w2)
        assert abs(res.value) <= 1e-6
        p, q = res.argument
        assert p.weights[1] == pytest.approx(1.0, abs=1e-3)
        assert q.weights[0] == pytest.approx(1.0, abs=1e-3)

    def test_identical_channels(self):
        w1, _ = example1_cq_channels()
        assert abs(cq_pair_divergence(w1, w1).value) <= 1e-9

    def test_classical_instance_matches_grid_oracle(self):
        w1, w2 = classical_cq_channels()
        # outputs are diagonal, so the objective is a Bernoulli KL over
        # mixture parameters; scan both simplices on a 1e-3 grid
        a = 0.4 + 0.4 * np.linspace(0.0, 1.0, 1001)[:, None]
        b = 0.1 + 0.4 * np.linspace(0.0, 1.0, 1001)[None, :]
        kl = a * np.log(a / b) + (1 - a) * np.log((1 - a) / (1 - b))
        oracle = float(kl.min())
        res = cq_pair_divergence(w1, w2)
        assert abs(res.value - oracle) <= 2e-3

    def test_never_above_cq_informed(self):
        for w1, w2 in (example1_cq_channels(), classical_cq_channels()):
            pair = cq_pair_divergence(w1, w2).value
            informed, _ = cq_informed_divergence(w1, w2)
            assert pair <= informed + 1e-8


class TestEffectiveAdditivity:
    def test_joint_symbol_minimum_splits(self):
        w1, w2 = example1_cq_channels()
        v1, v2 = classical_cq_channels()
        joint_best = math.inf
        for rw1, rw2 in zip(w1.outputs, w2.outputs):
            for rv1, rv2 in zip(v1.outputs, v2.outputs):
                joint = relative_entropy(
                    np.kron(rw1.mat, rv1.mat), np.kron(rw2.mat, rv2.mat)
                )
                joint_best = min(joint_best, joint)
        expected = cq_informed_divergence(w1, w2)[0] + cq_informed_divergence(v1, v2)[0]
        assert joint_best == pytest.approx(expected, abs=1e-9)
