import math

import numpy as np
import pytest

from ncycle_qre.errors import ValidationError
from ncycle_qre.linalg import (
    partial_trace,
    projector_from_vector,
    purify,
    tensor,
    trace_norm,
)

from conftest import random_density, random_unitary, svd_trace_norm


class TestProjectorFromVector:
    def test_basis_vector(self):
        p = projector_from_vector(np.array([1.0, 0.0, 0.0]))
        assert np.allclose(p, np.diag([1.0, 0.0, 0.0]))

    def test_plus_state(self):
        p = projector_from_vector(np.array([1.0, 1.0]) / math.sqrt(2))
        assert np.allclose(p, np.full((2, 2), 0.5))

    def test_projector_structure(self, rng):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        p = projector_from_vector(v)
        assert np.abs(p @ p - p).max() <= 1e-12
        assert np.abs(p - p.conj().T).max() <= 1e-12
        assert abs(p.trace() - 1.0) <= 1e-12

    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            projector_from_vector(np.array([1.0, 1.0]))


class TestTensor:
    def test_identity(self):
        assert np.allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_bilinear(self, rng):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3))
        assert np.allclose(tensor(2 * a, b), 2 * tensor(a, b))

    def test_trace_multiplicative(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert np.isclose(tensor(a, b).trace(), a.trace() * b.trace())


class TestPartialTrace:
    def test_product_state(self, rng):
        rho = random_density(rng, 3)
        sigma = random_density(rng, 2)
        reduced = partial_trace(tensor(rho, sigma), [3, 2], [0])
        assert np.abs(reduced - rho * sigma.trace()).max() <= 1e-12

    def test_bell_state_marginal(self):
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / math.sqrt(2)
        reduced = partial_trace(np.outer(bell, bell.conj()), [2, 2], [1])
        assert np.abs(reduced - np.eye(2) / 2).max() <= 1e-12

    def test_trace_preserved(self, rng):
        m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        m = m + m.conj().T
        for keep in ([0], [1], [0, 1], [0, 2]):
            out = partial_trace(m, [2, 3, 2], keep)
            assert np.isclose(out.trace(), m.trace())

    def test_linear(self, rng):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        b = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        lhs = partial_trace(2 * a + 3 * b, [2, 3], [0])
        rhs = 2 * partial_trace(a, [2, 3], [0]) + 3 * partial_trace(b, [2, 3], [0])
        assert np.abs(lhs - rhs).max() <= 1e-12

    def test_dim_mismatch(self):
        with pytest.raises(ValidationError):
            partial_trace(np.eye(5), [2, 2], [0])


class TestTraceNorm:
    def test_identity(self):
        assert trace_norm(np.eye(7)) == pytest.approx(7.0, abs=1e-12)

    def test_orthogonal_difference(self):
        diff = np.diag([1.0, -1.0])
        assert trace_norm(diff) == pytest.approx(2.0, abs=1e-12)

    def test_pure_state_difference(self):
        # eigenvalues of |0><0| - |+><+| are +/- sqrt(1 - |<0|+>|^2)
        zero = np.diag([1.0, 0.0])
        plus = np.full((2, 2), 0.5)
        assert trace_norm(zero - plus) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_nonsquare_rejected(self):
        with pytest.raises(ValidationError):
            trace_norm(np.ones((2, 3)))

    @pytest.mark.parametrize("trial", range(5))
    def test_triangle_inequality(self, rng, trial):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        b = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10

    @pytest.mark.parametrize("trial", range(5))
    def test_unitary_invariance(self, rng, trial):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = random_unitary(rng, 4)
        assert trace_norm(u @ a @ u.conj().T) == pytest.approx(trace_norm(a), abs=1e-10)

    @pytest.mark.parametrize("trial", range(5))
    def test_matches_svd_oracle(self, rng, trial):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        assert trace_norm(a) == pytest.approx(svd_trace_norm(a), abs=1e-9)
        h = a + a.conj().T
        assert trace_norm(h) == pytest.approx(svd_trace_norm(h), abs=1e-9)


class TestPurify:
    def test_pure_state_trivial(self):
        psi = purify(np.diag([1.0, 0.0]).astype(complex), 1)
        assert abs(abs(psi[0]) - 1.0) <= 1e-12
        assert psi[0].real > 0  # phase convention

    def test_maximally_mixed(self):
        psi = purify(np.eye(2, dtype=complex) / 2, 2)
        rho_env = partial_trace(np.outer(psi, psi.conj()), [2, 2], [1])
        assert np.abs(rho_env - np.eye(2) / 2).max() <= 1e-10

    def test_round_trip_rank2(self, rng):
        rho = random_density(rng, 3, rank=2)
        for env_dim in (2, 3):
            psi = purify(rho, env_dim)
            back = partial_trace(np.outer(psi, psi.conj()), [3, env_dim], [0])
            assert np.abs(back - rho).max() <= 1e-10

    def test_env_too_small(self, rng):
        rho = random_density(rng, 3, rank=3)
        with pytest.raises(ValidationError):
            purify(rho, 2)

    def test_phase_deterministic(self, rng):
        rho = random_density(rng, 3, rank=2)
        assert np.array_equal(purify(rho, 2), purify(rho, 2))
