"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / rho.trace()


def svd_trace_norm(mat: np.ndarray) -> float:
    """Independent trace-norm oracle via full SVD."""
    return float(np.linalg.svd(np.asarray(mat, dtype=complex), compute_uv=False).sum())


def dense_key_distance(rounds) -> float:
    """Assemble the full multi-round cq state and take its trace norm directly.

    Independent of the per-label factorized computation: explicit key
    register, explicit tensor products, SVD-based norm.
    """
    m = len(rounds)
    branch = [{lab: (w, rho) for lab, w, rho in cq.branches} for cq in rounds]
    marginals = [sum(w * rho for _, w, rho in cq.branches) for cq in rounds]
    d_eve = int(np.prod([next(iter(b.values()))[1].shape[0] for b in branch]))
    dk = 2**m
    full = np.zeros((dk * d_eve, dk * d_eve), dtype=complex)
    ideal_marg = marginals[0]
    for marg in marginals[1:]:
        ideal_marg = np.kron(ideal_marg, marg)
    for idx, label in enumerate(itertools.product("01", repeat=m)):
        weight = 1.0
        cond = np.array([[1.0]], dtype=complex)
        for b, k in zip(branch, label):
            w, rho = b[k]
            weight *= w
            cond = np.kron(cond, rho)
        key_proj = np.zeros((dk, dk), dtype=complex)
        key_proj[idx, idx] = 1.0
        full += np.kron(key_proj, weight * cond - (2.0**-m) * ideal_marg)
    return svd_trace_norm(full)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
