"""Quantum correlation measures on two-qubit states, with the measurement on A.

``discord_BA`` and ``deficit_BA`` minimise over projective qubit bases
parametrised as {cos chi|0> + e^{i phi} sin chi|1>, orthocomplement}, with
chi in [0, pi/2] and phi in [0, pi). Measuring A leaves a block-diagonal state
sum_k |k><k| (x) M_k with M_k = <k|rho|k>_A, so every objective only needs the
spectra of two 2x2 matrices; that closed form is what the optimiser calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .qcore import (
    ConsistencyError,
    PAULI_Y,
    binary_h,
    check_density_matrix,
    partial_trace,
    von_neumann_entropy,
)
from .states import ProjectiveBasis, canonical_angles, purify_rank2

MEASURES = ("discord", "deficit")
NEG_CLIP = 1e-9


@dataclass(frozen=True)
class InnerOptions:
    grid: tuple[int, int] = (64, 32)
    restarts: int = 3
    xatol: float = 1e-9
    fatol: float = 1e-12
    maxiter: int = 500


@dataclass(frozen=True, eq=False)
class MeasurementResult:
    value: float
    basis: ProjectiveBasis
    chi: float
    phi: float
    grid_best: float
    iterations: int
    converged: bool


def measure_A(rho, basis: ProjectiveBasis, dims: Sequence[int] = (2, 2)) -> np.ndarray:
    """sum_i (Pi_i (x) I) rho (Pi_i (x) I) for a projective basis on the first subsystem."""
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    if basis.dim != dims[0]:
        raise ValueError(f"basis dimension {basis.dim} does not match subsystem A ({dims[0]})")
    rest = np.eye(int(np.prod(dims[1:])))
    out = np.zeros_like(rho)
    for p in basis.projectors:
        big = np.kron(p, rest)
        out += big @ rho @ big
    return out


def conditional_entropy_BA(rho, dims: Sequence[int] = (2, 2)) -> float:
    """S(rho) - S(rho_A)."""
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, dims, [0]))


def _xlog(x: float) -> float:
    return x * math.log2(x) if x > 1e-300 else 0.0


def _ent2(a: float, d: float, b: complex) -> float:
    """-sum lam log2 lam over the spectrum of the PSD matrix [[a, b], [b*, d]]."""
    half = 0.5 * (a + d)
    gap = math.sqrt(0.25 * (a - d) ** 2 + b.real * b.real + b.imag * b.imag)
    return -_xlog(half + gap) - _xlog(max(half - gap, 0.0))


def _ent2_array(a, d, b):
    half = 0.5 * (a + d)
    gap = np.sqrt(0.25 * (a - d) ** 2 + np.abs(b) ** 2)
    lam = np.stack([half + gap, np.clip(half - gap, 0.0, None)])
    safe = np.where(lam > 1e-300, lam, 1.0)
    return -np.sum(lam * np.log2(safe), axis=0)


class MeasurementObjective:
    """Objective S(measured) - offset (deficit) or its conditional version (discord)
    as a function of the measurement angles (chi, phi) on qubit A."""

    def __init__(self, rho, kind: str):
        if kind not in MEASURES:
            raise ValueError(f"unknown measure {kind!r}; expected one of {MEASURES}")
        rho = check_density_matrix(rho, dims=[2, 2])
        r = rho.reshape(2, 2, 2, 2)
        self.kind = kind
        self.r00 = r[0, :, 0, :]
        self.r11 = r[1, :, 1, :]
        self.r01 = r[0, :, 1, :]
        self.rho_b = self.r00 + self.r11
        s_total = von_neumann_entropy(rho)
        if kind == "deficit":
            self.offset = s_total
        else:
            self.offset = s_total - von_neumann_entropy(partial_trace(rho, [2, 2], [0]))
        # python scalars for the hot path
        self._c = [complex(z) for z in (*self.r00.ravel(), *self.r11.ravel(), *self.r01.ravel())]
        self._b = [complex(z) for z in self.rho_b.ravel()]

    def __call__(self, x) -> float:
        chi, phi = float(x[0]), float(x[1])
        c, s = math.cos(chi), math.sin(chi)
        e = complex(math.cos(phi), math.sin(phi))
        a00, a01, a10, a11, b00, b01, b10, b11, x00, x01, x10, x11 = self._c
        cc, ss, cs = c * c, s * s, c * s
        # M_v for v = (c, e s); cross term is e R01 + conj(e) R01^dag
        m00 = (cc * a00 + ss * b00 + 2 * cs * (e * x00)).real
        m11 = (cc * a11 + ss * b11 + 2 * cs * (e * x11)).real
        m01 = cc * a01 + ss * b01 + cs * (e * x01 + e.conjugate() * x10.conjugate())
        n00 = self._b[0].real - m00
        n11 = self._b[3].real - m11
        n01 = self._b[1] - m01
        total = _ent2(m00, m11, m01) + _ent2(n00, n11, n01)
        if self.kind == "discord":
            pv = min(max(m00 + m11, 0.0), 1.0)
            total -= -_xlog(pv) - _xlog(1.0 - pv)
        return total - self.offset

    def grid(self, chis, phis) -> np.ndarray:
        """Objective on the outer product of ``chis`` and ``phis`` (shape len(chis) x len(phis))."""
        return batched_objective(
            self.r00[None], self.r11[None], self.r01[None], np.array([self.offset]),
            np.asarray(chis), np.asarray(phis), self.kind,
        )[0]


def batched_objective(r00, r11, r01, offsets, chis, phis, kind):
    """Objective for N states (blocks of shape (N,2,2)) on a chi x phi grid -> (N, nchi, nphi)."""
    c = np.cos(chis)[:, None]
    s = np.sin(chis)[:, None]
    e = np.exp(1j * np.asarray(phis))[None, :]
    cc, ss, cs = c * c, s * s, c * s
    sl = (slice(None), None, None)

    def blk(m, i, j):
        return m[:, i, j][sl]

    m00 = (cc * blk(r00, 0, 0) + ss * blk(r11, 0, 0) + 2 * cs * (e * blk(r01, 0, 0))).real
    m11 = (cc * blk(r00, 1, 1) + ss * blk(r11, 1, 1) + 2 * cs * (e * blk(r01, 1, 1))).real
    m01 = cc * blk(r00, 0, 1) + ss * blk(r11, 0, 1) + cs * (e * blk(r01, 0, 1) + np.conj(e) * np.conj(blk(r01, 1, 0)))
    b00 = (blk(r00, 0, 0) + blk(r11, 0, 0)).real
    b11 = (blk(r00, 1, 1) + blk(r11, 1, 1)).real
    b01 = blk(r00, 0, 1) + blk(r11, 0, 1)
    total = _ent2_array(m00, m11, m01) + _ent2_array(b00 - m00, b11 - m11, b01 - m01)
    if kind == "discord":
        pv = np.clip(m00 + m11, 0.0, 1.0)
        total = total - _ent2_array(pv, 1.0 - pv, np.zeros_like(pv))
    return total - np.asarray(offsets)[sl]


def _angle_grid(n_chi: int, n_phi: int):
    return np.linspace(0, np.pi / 2, n_chi), np.linspace(0, np.pi, n_phi, endpoint=False)


def minimize_measurement(rho, kind: str, opts: InnerOptions | None = None) -> MeasurementResult:
    """Grid search over (chi, phi) followed by Nelder-Mead from the best cells."""
    opts = opts or InnerOptions()
    obj = MeasurementObjective(rho, kind)
    chis, phis = _angle_grid(*opts.grid)
    vals = obj.grid(chis, phis)
    order = np.argsort(vals, axis=None, kind="stable")
    dchi = chis[1] - chis[0]
    dphi = phis[1] - phis[0]
    grid_best = float(vals.flat[order[0]])
    candidates = []
    iterations = 0
    converged = True
    for flat in order[: opts.restarts]:
        i, j = np.unravel_index(flat, vals.shape)
        x0 = np.array([chis[i], phis[j]])
        simplex = np.array([x0, x0 + [dchi, 0.0], x0 + [0.0, dphi]])
        res = minimize(
            obj, x0, method="Nelder-Mead",
            options=dict(xatol=opts.xatol, fatol=opts.fatol, maxiter=opts.maxiter, initial_simplex=simplex),
        )
        iterations += res.nit
        converged &= bool(res.success)
        candidates.append((float(res.fun), *canonical_angles(*res.x)))
        candidates.append((float(vals[i, j]), *canonical_angles(chis[i], phis[j])))
    best = min(c[0] for c in candidates)
    # ties: smallest chi, then smallest phi
    value, chi, phi = min((c for c in candidates if c[0] <= best + 1e-12), key=lambda c: (c[1], c[2]))
    return MeasurementResult(
        _clip(value, kind), ProjectiveBasis.from_angles(chi, phi), chi, phi, grid_best, iterations, converged
    )


def _clip(value: float, kind: str) -> float:
    if value < -NEG_CLIP:
        raise ConsistencyError(f"{kind} evaluated to {value:.3e} < 0")
    return max(value, 0.0)


def discord_BA(rho, opts: InnerOptions | None = None) -> MeasurementResult:
    """Quantum discord with projective measurement on A."""
    return minimize_measurement(rho, "discord", opts)


def deficit_BA(rho, opts: InnerOptions | None = None) -> MeasurementResult:
    """One-way quantum deficit with projective measurement on A."""
    return minimize_measurement(rho, "deficit", opts)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state."""
    rho = check_density_matrix(rho, dims=[2, 2])
    yy = np.kron(PAULI_Y, PAULI_Y)
    # with rho = X X^dag the Wootters values are the singular values of X^T yy X
    lam, vec = np.linalg.eigh(rho)
    keep = lam > 1e-14  # round-off eigenvalues would enter as their square roots
    x = vec[:, keep] * np.sqrt(lam[keep])
    mu = np.zeros(4)
    sv = np.linalg.svd(x.T @ yy @ x, compute_uv=False)
    mu[: sv.size] = sv
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def eof(rho) -> float:
    """Entanglement of formation, h(sqrt(1 - C^2))."""
    c = min(concurrence(rho), 1.0)
    return binary_h(math.sqrt(1.0 - c * c))


def discord_via_koashi_winter(rho) -> float:
    """Discord of a rank-2 two-qubit state as E_BC + S(BC) - S(C) of its purification."""
    psi = purify_rank2(rho)
    full = np.outer(psi, psi.conj())
    rho_bc = partial_trace(full, [2, 2, 2], [1, 2])
    rho_c = partial_trace(full, [2, 2, 2], [2])
    value = eof(rho_bc) + von_neumann_entropy(rho_bc) - von_neumann_entropy(rho_c)
    return _clip(value, "discord")


def rank2_discord_formula(t: float, phi: float) -> float:
    """Closed-form discord of ``rank2_qc_state(t, phi)``.

    h(sqrt(1-(1-t^2)cos^2 phi)) + h(sqrt(1-(1-t^2)sin^2 phi)) - h(t): the first
    term is the entanglement of formation between B and the purifying qubit,
    the other two are S(BC) - S(C).
    """
    if abs(t) > 1 + 1e-12:
        raise ValueError(f"|t| = {abs(t)} exceeds 1")
    t = min(max(t, -1.0), 1.0)
    w = 1 - t * t
    return (
        binary_h(math.sqrt(max(1 - w * math.cos(phi) ** 2, 0.0)))
        + binary_h(math.sqrt(max(1 - w * math.sin(phi) ** 2, 0.0)))
        - binary_h(abs(t))
    )
