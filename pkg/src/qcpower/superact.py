"""Super-activation with two phase-damping channels.

Four qubits are stored in the order (A, A', B, B'), so the pair AA' held by one
party is a contiguous leading 4-dimensional factor. The initial state is
1/4 sum_ij |ij><ij|_{AA'} (x) |ij><ij|_{BB'}; a two-qubit unitary U on AA' is
followed by PD (x) PD on AA'. ``to_interleaved`` converts to the (A, B, A', B')
layout of two copies of a two-qubit state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .channels import apply_local, output_commutator, phase_damping, tensor_channels
from .qcore import (
    I2,
    PAULI_Y,
    ket,
    partial_trace,
    permute_subsystems,
    projector,
    random_unitary,
    shannon_entropy,
    von_neumann_entropy,
)

DIMS = (2, 2, 2, 2)
A, A_, B, B_ = range(4)
PAIR_TOL = 1e-10
COMMUTATOR_TOL = 1e-12


def psi_states() -> dict[str, np.ndarray]:
    """The four images U|ij> of the computational basis."""
    s = 1 / np.sqrt(2)
    return {
        "00": s * (ket("00") + ket("11")),
        "01": s * (ket("01") - ket("10")),
        "10": s * (ket("0-") - ket("1+")),
        "11": s * (ket("0+") + ket("1-")),
    }


def superactivation_unitary() -> np.ndarray:
    psi = psi_states()
    u = np.stack([psi[k] for k in ("00", "01", "10", "11")], axis=1)
    assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12
    return u


def initial_state() -> np.ndarray:
    return sum(np.kron(projector(ket(ij)), projector(ket(ij))) for ij in ("00", "01", "10", "11")) / 4


def to_interleaved(rho) -> np.ndarray:
    """(A, A', B, B') -> (A, B, A', B')."""
    return permute_subsystems(rho, DIMS, [A, B, A_, B_])


def from_interleaved(rho) -> np.ndarray:
    """(A, B, A', B') -> (A, A', B, B')."""
    return permute_subsystems(rho, DIMS, [0, 2, 1, 3])


def output_state(p: float) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    u = np.kron(superactivation_unitary(), np.eye(4))
    rho = u @ initial_state() @ u.conj().T
    pd2 = tensor_channels(phase_damping(p), phase_damping(p))
    return apply_local(pd2, rho, DIMS, (A, A_))


class CommutatorWitness(NamedTuple):
    matrix: np.ndarray
    predicted: np.ndarray
    match: bool
    sign: int


def commutator_witness(p: float) -> CommutatorWitness:
    """[PD(x)PD(psi00), PD(x)PD(psi11)] against (i/8) p sqrt(1-p) (I(x)sy + sy(x)I).

    ``sign`` is the global sign that matches (+1 or -1), or 0 if neither does.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    psi = psi_states()
    pd2 = tensor_channels(phase_damping(p), phase_damping(p))
    mat = output_commutator(pd2, projector(psi["00"]), projector(psi["11"]))
    predicted = 1j / 8 * p * np.sqrt(1 - p) * (np.kron(I2, PAULI_Y) + np.kron(PAULI_Y, I2))
    sign = 0
    for s in (1, -1):
        if np.abs(mat - s * predicted).max() <= COMMUTATOR_TOL:
            sign = s
            break
    return CommutatorWitness(mat, predicted, sign != 0, sign)


@dataclass(frozen=True, eq=False)
class SuperactReport:
    p: float
    commutator_norm: float
    predicted_norm: float
    commutator_match: bool
    commutator_sign: int
    pairwise_checks: dict = field(default_factory=dict)  # name -> (passed, residual)
    output_state: np.ndarray | None = None
    deficit_bound: float | None = None

    @property
    def all_checks_pass(self) -> bool:
        return self.commutator_match and all(ok for ok, _ in self.pairwise_checks.values())


def pairwise_checks(rho) -> dict:
    """Residuals of the three two-qubit marginal identities of the output state."""
    rho_b = partial_trace(rho, DIMS, [B])
    rho_b_ = partial_trace(rho, DIMS, [B_])
    targets = {
        "AB_product": ([A, B], np.kron(I2 / 2, rho_b)),
        "A'B'_product": ([A_, B_], np.kron(I2 / 2, rho_b_)),
        "AA'_maximally_mixed": ([A, A_], np.eye(4) / 4),
    }
    out = {}
    for name, (keep, target) in targets.items():
        residual = float(np.abs(partial_trace(rho, DIMS, keep) - target).max())
        out[name] = (residual <= PAIR_TOL, residual)
    return out


def build_scenario(p: float, samples: int | None = None, seed=0) -> SuperactReport:
    """Evolve the four-qubit state and collect the witness, marginal checks and
    (when ``samples`` is given) the sampled deficit bound across AA':BB'."""
    rho = output_state(p)
    w = commutator_witness(p)
    bound = bipartite_correlation_lower_bound(p, samples, seed) if samples else None
    return SuperactReport(
        p=float(p),
        commutator_norm=float(np.linalg.norm(w.matrix)),
        predicted_norm=float(np.linalg.norm(w.predicted)),
        commutator_match=w.match,
        commutator_sign=w.sign,
        pairwise_checks=pairwise_checks(rho),
        output_state=rho,
        deficit_bound=bound,
    )


def _hermitian_from_params(x) -> np.ndarray:
    h = np.zeros((4, 4), dtype=complex)
    iu = np.triu_indices(4, 1)
    h[iu] = x[:6] + 1j * x[6:12]
    h = h + h.conj().T
    h[np.diag_indices(4)] = x[12:16]
    return h


def _measured_entropy(rho_blocks, basis) -> float:
    # rho_blocks[a, b, c, d]: AA' indices a, c; BB' indices b, d
    m = np.einsum("am,abcd,cm->mbd", basis.conj(), rho_blocks, basis)
    lam = np.linalg.eigvalsh(m)
    return shannon_entropy(np.clip(lam, 0.0, None))


def bipartite_correlation_lower_bound(p: float, samples: int = 8, seed=0, maxiter: int = 1500) -> float:
    """Smallest one-way deficit across AA':BB' found over sampled AA' bases.

    Each sample is a Haar-random 4-dimensional basis refined by Nelder-Mead over
    U exp(iH). The minimum over any set of bases can only overestimate the
    exact deficit, so this is an upper bound on it; it grows no larger when
    ``samples`` increases because sample k depends only on (seed, k).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    rho = output_state(p)
    blocks = rho.reshape(4, 4, 4, 4)
    s_rho = von_neumann_entropy(rho)
    best = np.inf
    for child in np.random.SeedSequence(seed).spawn(samples):
        v0 = random_unitary(4, np.random.default_rng(child))

        def f(x, v0=v0):
            return _measured_entropy(blocks, v0 @ expm(1j * _hermitian_from_params(x))) - s_rho

        simplex = np.vstack([np.zeros(16), 0.3 * np.eye(16)])
        res = minimize(f, np.zeros(16), method="Nelder-Mead",
                       options=dict(maxiter=maxiter, xatol=1e-8, fatol=1e-12, adaptive=True,
                                    initial_simplex=simplex))
        best = min(best, f(np.zeros(16)), float(res.fun))
    return max(float(best), 0.0)
