"""Kraus-form channels and the named channels used throughout the package.

Amplitude damping uses the decay-probability convention: ``p`` is the
probability that |1> relaxes to |0>, so ``amplitude_damping(0)`` is the
identity and ``amplitude_damping(1)`` resets every input to |0><0|. The
closed-form QCP expressions in :mod:`qcpower.qcp` are written in the same
parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import commutator, random_unitary
from .states import ProjectiveBasis

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple
    name: str | None = None

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValueError("Kraus operators must be matrices of one common shape")
        total = sum(k.conj().T @ k for k in ops)
        err = np.abs(total - np.eye(shape[1])).max()
        if err > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not complete (deviation {err:.3g})")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(f"channel expects {ch.dim_in}x{ch.dim_in} input, got {rho.shape}")
    return sum(k @ rho @ k.conj().T for k in ch.kraus)


def _embed(op: np.ndarray, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Operator acting as ``op`` on the contiguous ``targets`` and as identity elsewhere."""
    targets = list(targets)
    if targets != list(range(targets[0], targets[-1] + 1)):
        raise ValueError(f"target subsystems {targets} must be contiguous")
    left = int(np.prod(dims[: targets[0]]))
    right = int(np.prod(dims[targets[-1] + 1:]))
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def apply_local(ch: KrausChannel, rho, dims: Sequence[int], targets: Sequence[int] = (0,)) -> np.ndarray:
    """Apply ``ch`` to the contiguous subsystems ``targets`` of ``rho`` (identity elsewhere)."""
    dims = [int(d) for d in dims]
    rho = np.asarray(rho, dtype=complex)
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix size {rho.shape[0]}")
    dim_t = int(np.prod([dims[i] for i in targets]))
    if dim_t != ch.dim_in or ch.dim_in != ch.dim_out:
        raise ValueError(f"channel dimension {ch.dim_in} does not match targets ({dim_t})")
    ops = [_embed(k, dims, targets) for k in ch.kraus]
    return sum(k @ rho @ k.conj().T for k in ops)


def apply_local_A(ch: KrausChannel, rho, dims: Sequence[int] = (2, 2)) -> np.ndarray:
    """(Lambda (x) I) rho for a channel on the first subsystem."""
    return apply_local(ch, rho, dims, (0,))


def tensor_channels(ch1: KrausChannel, ch2: KrausChannel) -> KrausChannel:
    name = f"{ch1.name}*{ch2.name}" if ch1.name and ch2.name else None
    return KrausChannel(tuple(np.kron(a, b) for a in ch1.kraus for b in ch2.kraus), name)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),), "identity")


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=complex),), "unitary")


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel parameter p={p} outside [0, 1]")
    return float(p)


def amplitude_damping(p: float) -> KrausChannel:
    """Zero-temperature decay with decay probability ``p``."""
    p = _check_p(p)
    e0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    e1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel((e0, e1), f"AD({p:g})")


def phase_damping(p: float) -> KrausChannel:
    """Dephasing: off-diagonal elements scale by sqrt(1-p)."""
    p = _check_p(p)
    e0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    e1 = np.array([[0, 0], [0, np.sqrt(p)]], dtype=complex)
    return KrausChannel((e0, e1), f"PD({p:g})")


def rank1_channel(psi0, psi1, basis_a: ProjectiveBasis | None = None) -> KrausChannel:
    """Channel with Kraus operators |psi_i><alpha_i|: maps |alpha_i><alpha_i| to |psi_i><psi_i|."""
    basis_a = basis_a or ProjectiveBasis.computational()
    kets = [np.asarray(v, dtype=complex) for v in (psi0, psi1)]
    for v in kets:
        if abs(np.linalg.norm(v) - 1) > 1e-10:
            raise ValueError("rank-1 channel outputs must be normalised kets")
    ops = tuple(np.outer(v, basis_a.vectors[:, i].conj()) for i, v in enumerate(kets))
    return KrausChannel(ops, "rank1")


def max_qcp_channel() -> KrausChannel:
    """|0><0| -> |0><0|, |1><1| -> |+><+|: the channel reaching the largest discord-QCP."""
    ch = rank1_channel([1, 0], np.array([1, 1]) / np.sqrt(2))
    return KrausChannel(ch.kraus, "maxqcp")


def is_unital(ch: KrausChannel, tol: float = 1e-10) -> bool:
    if ch.dim_in != ch.dim_out:
        raise ValueError("unitality needs a square channel")
    total = sum(k @ k.conj().T for k in ch.kraus)
    return bool(np.abs(total - np.eye(ch.dim_out)).max() <= tol)


def output_commutator(ch: KrausChannel, a, b) -> np.ndarray:
    return commutator(apply(ch, a), apply(ch, b))


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Outcome of :func:`commutativity_probe`.

    ``witness`` is ``None`` when no sampled commuting pair was mapped to a
    non-commuting pair; that is a failure to falsify, not a proof.
    """

    trials: int
    witness: tuple | None = None
    norm: float = 0.0

    @property
    def passed(self) -> bool:
        return self.witness is None


def commutativity_probe(ch: KrausChannel, trials: int = 100, seed=0, tol: float = 1e-8) -> ProbeResult:
    """Search for commuting inputs whose channel outputs do not commute."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    d = ch.dim_in
    for n in range(1, trials + 1):
        v = random_unitary(d, rng)
        a = v @ np.diag(rng.dirichlet(np.ones(d))) @ v.conj().T
        b = v @ np.diag(rng.dirichlet(np.ones(d))) @ v.conj().T
        norm = float(np.linalg.norm(output_commutator(ch, a, b)))
        if norm > tol:
            return ProbeResult(n, (a, b), norm)
    return ProbeResult(trials)
