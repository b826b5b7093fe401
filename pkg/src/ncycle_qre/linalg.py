"""Dense complex linear algebra for small Hilbert spaces (dim <= ~64).

Pure functions on numpy arrays: projectors, Kronecker products, partial
traces, trace norms and purifications, with validation helpers for pure
states and density operators. Everything here is deterministic and free
of shared state, so concurrent use is safe.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError
from .tolerances import CLAMP_FLOOR, NORM_ATOL, PSD_FLOOR, PURIFY_ATOL


def as_operator(a: np.ndarray) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError("matrix entries must be finite")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def validate_pure_state(v: np.ndarray) -> np.ndarray:
    """Check normalization and finiteness; return a complex copy."""
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(vec.view(float))):
        raise ValidationError("state amplitudes must be finite")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_ATOL:
        raise ValidationError(f"state norm {norm!r} deviates from 1 beyond {NORM_ATOL}")
    return vec


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return a complex copy."""
    m = as_operator(rho)
    if np.abs(m - dagger(m)).max() > NORM_ATOL:
        raise ValidationError("density matrix is not Hermitian")
    tr = m.trace().real
    if abs(tr - 1.0) > NORM_ATOL:
        raise ValidationError(f"density matrix trace {tr!r} deviates from 1")
    eigs = np.linalg.eigvalsh(m)
    if eigs.min() < PSD_FLOOR:
        raise ValidationError(f"density matrix has eigenvalue {eigs.min()!r} < {PSD_FLOOR}")
    return m


def projector_from_vector(v: np.ndarray) -> np.ndarray:
    """Rank-1 projector |v><v| from a normalized vector."""
    vec = validate_pure_state(v)
    return np.outer(vec, vec.conj())


def is_projector(p: np.ndarray, atol: float = NORM_ATOL) -> bool:
    m = as_operator(p)
    return (
        np.abs(m - dagger(m)).max() <= atol
        and np.abs(m @ m - m).max() <= max(atol, 1e-12)
    )


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors) -> np.ndarray:
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def partial_trace(m: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; ``keep`` is an
    iterable of subsystem indices to retain (original order preserved).
    The result has dimension prod(dims[k] for k in keep) and the same trace
    as the input.
    """
    mat = as_operator(m)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims):
        raise ValidationError("subsystem dimensions must be positive")
    total = math.prod(dims)
    if mat.shape[0] != total:
        raise ValidationError(
            f"matrix dim {mat.shape[0]} != product of subsystem dims {total}"
        )
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"keep indices {keep} out of range for {n} subsystems")

    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise ValidationError("too many subsystems")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]  # contract traced-out subsystem
    out = "".join(row[k] for k in keep) + "".join(letters[n + k] for k in keep)
    spec = "".join(row) + "".join(col) + "->" + out
    reshaped = mat.reshape(dims + dims)
    reduced = np.einsum(spec, reshaped)
    d_keep = math.prod(dims[k] for k in keep) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values.

    Hermitian inputs use the symmetric eigensolver directly (sum of
    |eigenvalues|); this keeps absolute errors at machine precision even
    when many singular values are tiny. Non-Hermitian inputs fall back to
    eigenvalues of A^dag A with clamping of small negatives.
    """
    m = as_operator(a)
    scale = np.abs(m).max()
    if scale == 0.0:
        return 0.0
    if np.abs(m - dagger(m)).max() <= 1e-12 * max(scale, 1.0):
        eigs = np.linalg.eigvalsh(m)
        return float(np.abs(eigs).sum())
    gram = dagger(m) @ m
    eigs = np.linalg.eigvalsh(gram)
    eigs = np.where(np.abs(eigs) < CLAMP_FLOOR * max(scale, 1.0) ** 2, 0.0, eigs)
    eigs = np.clip(eigs, 0.0, None)
    return float(np.sqrt(eigs).sum())


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return trace_norm(a @ b - b @ a)


def purify(rho: np.ndarray, env_dim: int) -> np.ndarray:
    """Purification of ``rho`` on system (x) environment.

    Coefficients are the square roots of the eigenvalues of ``rho`` paired
    with an orthonormal environment basis, so tracing out the environment
    recovers ``rho``. The global phase is fixed by making the
    largest-magnitude amplitude real and positive.
    """
    m = validate_density_matrix(rho)
    env_dim = int(env_dim)
    if env_dim < 1:
        raise ValidationError("environment dimension must be >= 1")
    w, vecs = np.linalg.eigh(m)
    order = np.argsort(w)[::-1]
    w, vecs = w[order], vecs[:, order]
    w = np.clip(w, 0.0, None)
    rank = int(np.count_nonzero(w > CLAMP_FLOOR))
    if env_dim < rank:
        raise ValidationError(f"environment dim {env_dim} < state rank {rank}")
    d = m.shape[0]
    psi = np.zeros(d * env_dim, dtype=complex)
    for l in range(min(rank, env_dim)):
        env = np.zeros(env_dim, dtype=complex)
        env[l] = 1.0
        psi += np.sqrt(w[l]) * np.kron(vecs[:, l], env)
    psi /= np.linalg.norm(psi)
    pivot = int(np.argmax(np.abs(psi)))
    phase = psi[pivot] / abs(psi[pivot])
    psi = psi * phase.conjugate()

    check = partial_trace(np.outer(psi, psi.conj()), [d, env_dim], [0])
    if np.abs(check - m).max() > PURIFY_ATOL:
        raise ValidationError("purification failed to reproduce the input state")
    return psi
