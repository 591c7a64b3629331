"""Dense linear algebra and entropy primitives.

Everything here works on plain ``numpy`` arrays. Density matrices are square
complex arrays; functions that need the tensor structure take an explicit
``dims`` sequence whose product equals the matrix size. All entropies are in
bits.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

EIG_ZERO = 1e-12
EIG_CLIP = 1e-10

_KET = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


class ConsistencyError(RuntimeError):
    """Raised when a quantity that must be nonnegative comes out clearly negative."""


def ket(label: str) -> np.ndarray:
    """Product qubit ket from a label over ``0 1 + -``, e.g. ``ket('0+')``."""
    try:
        return reduce(np.kron, [_KET[c] for c in label])
    except KeyError as exc:
        raise ValueError(f"unknown ket label {label!r}") from exc


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def tensor(*mats) -> np.ndarray:
    """Kronecker product of any number of matrices (or vectors)."""
    if not mats:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in mats])


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"commutator needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def is_hermitian(mat, tol: float = 1e-12) -> bool:
    mat = np.asarray(mat)
    return mat.ndim == 2 and mat.shape[0] == mat.shape[1] and bool(np.abs(mat - mat.conj().T).max() <= tol)


def check_density_matrix(rho, dims: Sequence[int] | None = None, tol: float = 1e-10) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Raises ``ValueError`` if ``rho`` is not Hermitian, not unit trace, has an
    eigenvalue below ``-tol``, or does not match ``dims``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if dims is not None and int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {list(dims)} do not match matrix size {rho.shape[0]}")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise ValueError(f"density matrix has trace {tr}")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {lam_min}")
    return rho


def _clipped_spectrum(rho) -> np.ndarray:
    lam = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    if lam.min() < -EIG_CLIP:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lam.min()})")
    return np.clip(lam, 0.0, None)


def shannon_entropy(probs) -> float:
    """Shannon entropy in bits; entries below 1e-12 count as zero."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > EIG_ZERO]
    return float(-np.sum(p * np.log2(p)))


def binary_h(x: float) -> float:
    """Binary entropy of the distribution ((1+x)/2, (1-x)/2), in bits."""
    if x < -1e-12 or x > 1 + 1e-12:
        raise ValueError(f"binary_h argument {x} outside [0, 1]")
    x = min(max(float(x), 0.0), 1.0)
    return shannon_entropy([(1 + x) / 2, (1 - x) / 2])


def von_neumann_entropy(rho) -> float:
    return shannon_entropy(_clipped_spectrum(rho))


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Reduced state on the subsystems listed in ``keep`` (kept in the given order)."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    n = len(dims)
    if isinstance(keep, int):
        keep = [keep]
    keep = list(keep)
    if not keep or any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid subsystem selection {keep} for {n} subsystems")
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix size {rho.shape[0]}")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # einsum labels: row index i, column index n+i; traced pairs share a label
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    for i in traced:
        letters[n + i] = letters[i]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    red = np.einsum("".join(letters) + "->" + "".join(out), t)
    d = int(np.prod([dims[i] for i in keep]))
    return red.reshape(d, d)


def permute_subsystems(rho, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output subsystem ``k`` is input subsystem ``perm[k]``."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} subsystems")
    t = rho.reshape(dims + dims).transpose(list(perm) + [n + k for k in perm])
    return t.reshape(rho.shape)


def relative_entropy(rho, sigma) -> float:
    """S(rho || sigma) in bits; ``inf`` when supp(rho) is not inside supp(sigma)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    lam_s, vec_s = np.linalg.eigh(sigma)
    kernel = vec_s[:, lam_s <= EIG_ZERO]
    if kernel.size and np.trace(kernel.conj().T @ rho @ kernel).real > EIG_ZERO:
        return float("inf")
    support = lam_s > EIG_ZERO
    # Tr rho log sigma restricted to supp(sigma)
    weights = np.einsum("ik,ij,jk->k", vec_s.conj(), rho, vec_s).real
    cross = float(np.sum(weights[support] * np.log2(lam_s[support])))
    value = -von_neumann_entropy(rho) - cross
    return max(value, 0.0) if value > -1e-10 else value


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from the induced (Ginibre) measure; full rank unless ``rank`` is given."""
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
