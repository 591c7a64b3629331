"""State families: Bloch parametrisation, classical-quantum and classical-classical
states, rank-2 quantum-classical states, the two-pure-state decomposition of a
qubit pair, and purification of rank-2 two-qubit states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qcore import EIG_CLIP, PAULIS, check_density_matrix, projector

BASIS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectiveBasis:
    """Orthonormal rank-1 measurement basis; ``vectors[:, k]`` is the k-th element."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis must be a square matrix of column vectors, got {v.shape}")
        if np.abs(v.conj().T @ v - np.eye(v.shape[0])).max() > BASIS_TOL:
            raise ValueError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def projectors(self) -> list[np.ndarray]:
        return [projector(self.vectors[:, k]) for k in range(self.dim)]

    @classmethod
    def computational(cls, dim: int = 2) -> "ProjectiveBasis":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def from_angles(cls, chi: float, phi: float = 0.0) -> "ProjectiveBasis":
        """Qubit basis {cos chi|0> + e^{i phi} sin chi|1>, its orthocomplement}."""
        c, s, e = np.cos(chi), np.sin(chi), np.exp(1j * phi)
        return cls(np.array([[c, -np.conj(e) * s], [e * s, c]], dtype=complex))

    @property
    def angles(self) -> tuple[float, float]:
        """Canonical (chi, phi) with chi in [0, pi/2], phi in [0, pi)."""
        if self.dim != 2:
            raise ValueError("angles are defined for qubit bases only")
        return canonical_angles(*_vector_angles(self.vectors[:, 0]))


def _vector_angles(v) -> tuple[float, float]:
    a, b = v
    chi = float(np.arctan2(abs(b), abs(a)))
    phi = float(np.angle(b) - np.angle(a)) if abs(a) > 1e-15 and abs(b) > 1e-15 else 0.0
    return chi, phi


def canonical_angles(chi: float, phi: float) -> tuple[float, float]:
    """Map any (chi, phi) to the representative of the same unordered basis
    with chi in [0, pi/2] and phi in [0, pi)."""
    n = np.array([np.sin(2 * chi) * np.cos(phi), np.sin(2 * chi) * np.sin(phi), np.cos(2 * chi)])
    az = float(np.arctan2(n[1], n[0])) % (2 * np.pi)
    if np.hypot(n[0], n[1]) < 1e-14:
        return (0.0, 0.0)
    if az >= np.pi - 1e-9:
        n, az = -n, max(az - np.pi, 0.0)
    chi_c = 0.5 * float(np.arccos(np.clip(n[2], -1.0, 1.0)))
    return chi_c, az


def bloch_to_density(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    if np.linalg.norm(v) > 1 + 1e-12:
        raise ValueError(f"Bloch vector norm {np.linalg.norm(v)} exceeds 1")
    return 0.5 * (np.eye(2) + sum(c * s for c, s in zip(v, PAULIS)))


def density_to_bloch(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a qubit state, got shape {rho.shape}")
    return np.array([np.trace(rho @ s).real for s in PAULIS])


def pure_from_bloch(n) -> np.ndarray:
    """Ket whose Bloch vector is the unit vector ``n``."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    azim = np.arctan2(n[1], n[0])
    return np.array([np.cos(theta / 2), np.exp(1j * azim) * np.sin(theta / 2)])


def _check_weights(weights, n: int) -> np.ndarray:
    q = np.asarray(weights, dtype=float)
    if q.shape != (n,):
        raise ValueError(f"expected {n} weights, got {q.shape}")
    if (q < -1e-12).any() or abs(q.sum() - 1) > 1e-12:
        raise ValueError(f"weights {q} are not a probability vector")
    return np.clip(q, 0.0, None)


def cq_state(weights, basis_a: ProjectiveBasis, states_b: Sequence) -> np.ndarray:
    """sum_i q_i |alpha_i><alpha_i| (x) rho_i^B."""
    q = _check_weights(weights, basis_a.dim)
    if len(states_b) != basis_a.dim:
        raise ValueError(f"need {basis_a.dim} B states, got {len(states_b)}")
    states_b = [check_density_matrix(s) for s in states_b]
    dim_b = states_b[0].shape[0]
    if any(s.shape[0] != dim_b for s in states_b):
        raise ValueError("B states have different dimensions")
    return sum(qi * np.kron(pa, sb) for qi, pa, sb in zip(q, basis_a.projectors, states_b))


@dataclass(frozen=True, eq=False)
class CCInput:
    """Classical-classical input sum_j q_j |alpha_j><alpha_j| (x) |beta_j><beta_j|."""

    weights: np.ndarray
    basis_a: ProjectiveBasis
    basis_b: ProjectiveBasis = field(default_factory=ProjectiveBasis.computational)

    def __post_init__(self):
        if self.basis_a.dim != self.basis_b.dim:
            raise ValueError("A and B bases must have the same dimension")
        object.__setattr__(self, "weights", _check_weights(self.weights, self.basis_a.dim))

    @classmethod
    def from_angles(cls, q: float, theta: float, phi: float = 0.0) -> "CCInput":
        """Qubit input q|theta,phi><..|(x)|0><0| + (1-q)|theta+pi/2,..><..|(x)|1><1|."""
        return cls(np.array([q, 1 - q]), ProjectiveBasis.from_angles(theta, phi))


def cc_state(inp: CCInput) -> np.ndarray:
    return sum(
        qj * np.kron(pa, pb)
        for qj, pa, pb in zip(inp.weights, inp.basis_a.projectors, inp.basis_b.projectors)
    )


def rank2_qc_state(t: float, phi: float) -> np.ndarray:
    """p0|00><00| + p1|phi 1><phi 1| with p0 - p1 = t and |phi> = cos phi|0> + sin phi|1>."""
    if abs(t) > 1 + 1e-12:
        raise ValueError(f"|t| = {abs(t)} exceeds 1")
    p0, p1 = (1 + t) / 2, (1 - t) / 2
    a = np.array([np.cos(phi), np.sin(phi)], dtype=complex)
    return p0 * np.kron(projector([1, 0]), projector([1, 0])) + p1 * np.kron(projector(a), projector([0, 1]))


@dataclass(frozen=True, eq=False)
class Lemma1Decomposition:
    """rho1 = w1 psi + (1-w1) phi and rho2 = w2 psi + (1-w2) phi with psi, phi pure."""

    psi: np.ndarray
    phi: np.ndarray
    w1: float
    w2: float

    def reconstruct(self) -> tuple[np.ndarray, np.ndarray]:
        pp, pf = projector(self.psi), projector(self.phi)
        return self.w1 * pp + (1 - self.w1) * pf, self.w2 * pp + (1 - self.w2) * pf


def lemma1_decompose(rho1, rho2) -> Lemma1Decomposition:
    """Write two qubit states as mixtures of the same two pure states.

    The pure states are where the line through the two Bloch points meets the
    sphere. Coincident points use the line parallel to z through that point.
    """
    c1 = density_to_bloch(check_density_matrix(rho1))
    c2 = density_to_bloch(check_density_matrix(rho2))
    sep = np.linalg.norm(c1 - c2)
    d = (c1 - c2) / sep if sep > 1e-12 else np.array([0.0, 0.0, 1.0])
    # |c1 + s d|^2 = 1
    b = float(c1 @ d)
    disc = np.sqrt(max(b * b - float(c1 @ c1) + 1.0, 0.0))
    s_plus, s_minus = -b + disc, -b - disc
    a_vec, b_vec = c1 + s_plus * d, c1 + s_minus * d
    chord = s_plus - s_minus
    w1 = float(np.clip((-s_minus) / chord, 0.0, 1.0))
    w2 = float(np.clip(((c2 - b_vec) @ d) / chord, 0.0, 1.0))
    return Lemma1Decomposition(pure_from_bloch(a_vec), pure_from_bloch(b_vec), w1, w2)


def purify_rank2(rho) -> np.ndarray:
    """Pure three-qubit ket |Psi>_{ABC} with Tr_C |Psi><Psi| = rho (rank <= 2)."""
    rho = check_density_matrix(rho, dims=[2, 2])
    lam, vec = np.linalg.eigh(rho)
    if lam[-3] > EIG_CLIP:
        raise ValueError(f"state has rank > 2 (third eigenvalue {lam[-3]})")
    psi = np.zeros(8, dtype=complex)
    for k, idx in enumerate((3, 2)):
        c = np.zeros(2)
        c[k] = 1.0
        psi += np.sqrt(max(lam[idx], 0.0)) * np.kron(vec[:, idx], c)
    return psi
