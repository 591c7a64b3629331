"""Quantum-correlating power: the largest discord or deficit a local channel on A
can create from a classically correlated input.

The search runs over classical-classical inputs
q|a><a| (x) |0><0| + (1-q)|a_perp><a_perp| (x) |1><1|, with |a> = cos theta|0> +
e^{i phi} sin theta|1>. The B basis is fixed to the computational one because a
unitary on B commutes with a channel on A and leaves both measures unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from .channels import KrausChannel, apply_local_A
from .correlations import (
    MEASURES,
    InnerOptions,
    batched_objective,
    minimize_measurement,
    rank2_discord_formula,
)
from .qcore import binary_h
from .states import CCInput, ProjectiveBasis, _vector_angles, canonical_angles, cc_state, cq_state

QUARTER_PI = math.pi / 4


@dataclass(frozen=True)
class QcpOptions:
    outer_grid: tuple[int, int, int] = (21, 32, 16)  # q, theta, phi_A
    screen_grid: tuple[int, int] = (16, 8)
    candidates: int = 3
    inner: InnerOptions = field(default_factory=InnerOptions)
    # inner routine used inside the outer simplex; the reported value uses ``inner``
    refine_inner: InnerOptions = field(
        default_factory=lambda: InnerOptions(grid=(24, 12), restarts=2, xatol=1e-6, fatol=1e-11)
    )
    xatol: float = 1e-5
    fatol: float = 1e-10
    maxiter: int = 400


@dataclass(frozen=True, eq=False)
class QcpResult:
    value: float
    optimal_input: CCInput
    optimal_measurement: ProjectiveBasis
    measure: str
    diagnostics: dict

    @property
    def converged(self) -> bool:
        return bool(self.diagnostics.get("converged", False))


def _input_kets(theta, phi):
    a = np.stack([np.cos(theta) + 0j, np.exp(1j * phi) * np.sin(theta)], axis=-1)
    b = np.stack([-np.exp(-1j * phi) * np.sin(theta), np.cos(theta) + 0j], axis=-1)
    return a, b


def _batched_outputs(ch: KrausChannel, q, theta, phi):
    """Blocks (r00, r11, r01) of (Lambda (x) I)(cc input) for arrays of parameters."""
    a, b = _input_kets(np.asarray(theta, float), np.asarray(phi, float))
    pa = np.einsum("...i,...j->...ij", a, a.conj())
    pb = np.einsum("...i,...j->...ij", b, b.conj())
    la = sum(np.einsum("ij,...jk,lk->...il", k, pa, k.conj()) for k in ch.kraus)
    lb = sum(np.einsum("ij,...jk,lk->...il", k, pb, k.conj()) for k in ch.kraus)
    q = np.asarray(q, float)[..., None, None]
    # rho = q La (x) |0><0| + (1-q) Lb (x) |1><1|, indexed rho[(a,b),(c,d)]
    shape = la.shape[:-2]
    r = np.zeros(shape + (2, 2, 2, 2), dtype=complex)
    r[..., :, 0, :, 0] = q * la
    r[..., :, 1, :, 1] = (1 - q) * lb
    return r.reshape(shape + (4, 4))


def _offsets(rhos, kind):
    lam = np.clip(np.linalg.eigvalsh(rhos), 0.0, None)
    s_total = -np.sum(np.where(lam > 1e-12, lam * np.log2(np.where(lam > 1e-12, lam, 1.0)), 0.0), axis=-1)
    if kind == "deficit":
        return s_total
    r = rhos.reshape(rhos.shape[:-2] + (2, 2, 2, 2))
    rho_a = np.einsum("...ajcj->...ac", r)
    lam_a = np.clip(np.linalg.eigvalsh(rho_a), 0.0, None)
    s_a = -np.sum(np.where(lam_a > 1e-12, lam_a * np.log2(np.where(lam_a > 1e-12, lam_a, 1.0)), 0.0), axis=-1)
    return s_total - s_a


def _screen(ch, kind, opts: QcpOptions):
    nq, nt, nf = opts.outer_grid
    qs = np.linspace(0, 1, nq)
    ts = np.linspace(0, np.pi / 2, nt)
    fs = np.linspace(0, 2 * np.pi, nf, endpoint=False)
    Q, T, F = np.meshgrid(qs, ts, fs, indexing="ij")
    params = np.stack([Q.ravel(), T.ravel(), F.ravel()], axis=1)
    rhos = _batched_outputs(ch, params[:, 0], params[:, 1], params[:, 2])
    chis = np.linspace(0, np.pi / 2, opts.screen_grid[0])
    phis = np.linspace(0, np.pi, opts.screen_grid[1], endpoint=False)
    values = np.empty(len(params))
    for start in range(0, len(params), 2048):
        block = rhos[start:start + 2048]
        r = block.reshape(-1, 2, 2, 2, 2)
        vals = batched_objective(
            r[:, 0, :, 0, :], r[:, 1, :, 1, :], r[:, 0, :, 1, :], _offsets(block, kind), chis, phis, kind
        )
        values[start:start + 2048] = vals.reshape(len(block), -1).min(axis=1)
    return params, values, (qs[1] - qs[0], ts[1] - ts[0], fs[1] - fs[0])


def _output(ch, x) -> np.ndarray:
    q = min(max(x[0], 0.0), 1.0)
    return _batched_outputs(ch, q, x[1], x[2])


def _canonical_input(x) -> CCInput:
    q = min(max(float(x[0]), 0.0), 1.0)
    a, _ = _input_kets(float(x[1]), float(x[2]))
    chi, phi = _vector_angles(a)
    chi_c, phi_c = canonical_angles(chi, phi)
    basis = ProjectiveBasis.from_angles(chi_c, phi_c)
    # canonicalisation may swap the two basis elements
    if abs(np.vdot(basis.vectors[:, 0], a)) < 1 / math.sqrt(2):
        q = 1 - q
    return CCInput(np.array([q, 1 - q]), basis)


def qcp_numeric(ch: KrausChannel, measure: str = "discord", opts: QcpOptions | None = None) -> QcpResult:
    """Maximise the chosen measure of (Lambda (x) I)(cc input) over qubit cc inputs."""
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise ValueError("qcp_numeric handles single-qubit channels only")
    opts = opts or QcpOptions()
    params, screen, steps = _screen(ch, measure, opts)
    order = np.argsort(-screen, kind="stable")

    def neg_value(x):
        return -minimize_measurement(_output(ch, x), measure, opts.refine_inner).value

    best_x, best_v = params[order[0]], -np.inf
    outer_iterations = 0
    converged = True
    for idx in order[: opts.candidates]:
        x0 = params[idx]
        simplex = np.array([x0, x0 + [steps[0], 0, 0], x0 + [0, steps[1], 0], x0 + [0, 0, steps[2]]])
        res = minimize(
            neg_value, x0, method="Nelder-Mead",
            options=dict(xatol=opts.xatol, fatol=opts.fatol, maxiter=opts.maxiter, initial_simplex=simplex),
        )
        outer_iterations += res.nit
        converged &= bool(res.success)
        if -res.fun > best_v:
            best_v, best_x = -res.fun, res.x
    final = minimize_measurement(_output(ch, best_x), measure, opts.inner)
    return QcpResult(
        value=final.value,
        optimal_input=_canonical_input(best_x),
        optimal_measurement=final.basis,
        measure=measure,
        diagnostics=dict(
            screen_best=float(screen[order[0]]),
            outer_iterations=outer_iterations,
            inner_iterations=final.iterations,
            converged=converged and final.converged,
        ),
    )


# Closed forms for amplitude damping with decay probability p.

def _h_coh(p: float) -> float:
    return binary_h(math.sqrt(max(1 - p + p * p, 0.0)))


def qcp_ad_discord(p: float) -> float:
    """h(p) + h(sqrt(1-p)) - h(sqrt(1-p+p^2)) - 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    return binary_h(p) + binary_h(math.sqrt(1 - p)) - _h_coh(p) - 1


def deficit_chi_objective(p: float, chi):
    """(h(t1) + h(t2)) / 2 with t1,2 = sqrt(1-p) sin 2chi +- p cos 2chi (vectorised in chi)."""
    chi = np.asarray(chi, dtype=float)
    s = math.sqrt(1 - p) * np.sin(2 * chi)
    c = p * np.cos(2 * chi)
    return 0.5 * (_h_vec(s + c) + _h_vec(s - c))


def _h_vec(x):
    x = np.clip(np.abs(x), 0.0, 1.0)
    out = np.zeros_like(x)
    for sign in (1, -1):
        y = (1 + sign * x) / 2
        nz = y > 1e-300
        out[nz] -= y[nz] * np.log2(y[nz])
    return out


def chi_equation_residual(p: float, chi: float) -> float:
    """sqrt(1-p) L1 cos 2chi - p L2 sin 2chi, zero exactly where the deficit
    objective is stationary (it equals -2 d'(chi))."""
    s = math.sqrt(1 - p) * math.sin(2 * chi)
    c = p * math.cos(2 * chi)
    l1 = math.log2(((1 + s) ** 2 - c * c) / ((1 - s) ** 2 - c * c))
    l2 = math.log2(((1 + c) ** 2 - s * s) / ((1 - c) ** 2 - s * s))
    return math.sqrt(1 - p) * l1 * math.cos(2 * chi) - p * l2 * math.sin(2 * chi)


class ChiRootError(RuntimeError):
    """No sign change of the stationarity residual around the minimiser."""


def solve_chi(p: float, grid: int = 2001) -> float:
    """Optimal deficit measurement angle chi in [0, pi/4] for AD with decay p.

    The global minimiser of the 1-D objective is located on a grid and refined;
    an interior minimiser is then pinned down as a root of
    :func:`chi_equation_residual`.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"solve_chi needs p in (0, 1), got {p}")
    chis = np.linspace(0.0, QUARTER_PI, grid)
    vals = deficit_chi_objective(p, chis)
    i = int(np.argmin(vals))
    if i in (0, grid - 1):
        return float(chis[i])
    lo, hi = chis[i - 1], chis[i + 1]
    f_lo, f_hi = chi_equation_residual(p, lo), chi_equation_residual(p, hi)
    if f_lo * f_hi > 0:
        res = minimize_scalar(lambda x: float(deficit_chi_objective(p, x)), bounds=(lo, hi), method="bounded",
                              options=dict(xatol=1e-13))
        raise ChiRootError(f"no sign change around chi={res.x:.6f} for p={p}")
    return float(brentq(lambda x: chi_equation_residual(p, x), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class AdDeficit:
    value: float
    branch: int  # 1: chi = pi/4, 2: chi = 0, 3: interior chi
    chi: float
    branches: tuple[float, float, float]
    residual: float = 0.0


def qcp_ad_deficit(p: float) -> AdDeficit:
    """Three-branch closed form of the deficit-based QCP of amplitude damping."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    base = _h_coh(p)
    b1 = binary_h(math.sqrt(1 - p)) - base
    b2 = binary_h(p) - base
    if p in (0.0, 1.0):
        chi = QUARTER_PI if p == 0.0 else 0.0
        b3 = min(b1, b2)
    else:
        try:
            chi = solve_chi(p)
        except ChiRootError:
            res = minimize_scalar(lambda x: float(deficit_chi_objective(p, x)), bounds=(0, QUARTER_PI),
                                  method="bounded", options=dict(xatol=1e-12))
            chi = float(res.x)
        b3 = float(deficit_chi_objective(p, chi)) - base
    if b3 < min(b1, b2) - 1e-13:
        return AdDeficit(b3, 3, chi, (b1, b2, b3), abs(chi_equation_residual(p, chi)))
    if b1 <= b2:
        return AdDeficit(b1, 1, QUARTER_PI, (b1, b2, b3))
    return AdDeficit(b2, 2, 0.0, (b1, b2, b3))


@dataclass(frozen=True)
class SweepRow:
    p: float
    chi: float
    deficit: float


def deficit_basis_sweep(p_grid) -> list[SweepRow]:
    """Optimal deficit basis angle and deficit-QCP of AD along ``p_grid``."""
    rows = []
    for p in p_grid:
        r = qcp_ad_deficit(float(p))
        rows.append(SweepRow(float(p), r.chi, r.value))
    return rows


def max_qcp_search(grid: int = 81) -> tuple[float, float, float]:
    """Maximise the rank-2 discord formula over t in [-1, 1], phi in [0, pi/2]."""
    def f(x):
        t = min(max(x[0], -1.0), 1.0)
        phi = min(max(x[1], 0.0), math.pi / 2)
        return -rank2_discord_formula(t, phi)

    ts = np.linspace(-1, 1, grid)
    phis = np.linspace(0, math.pi / 2, grid)
    vals = np.array([[f((t, ph)) for ph in phis] for t in ts])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    res = minimize(f, [ts[i], phis[j]], method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-15, maxiter=2000))
    t = min(max(res.x[0], -1.0), 1.0)
    phi = min(max(res.x[1], 0.0), math.pi / 2)
    return float(t), float(phi), float(-res.fun)


def theorem1_check(weights, basis_a: ProjectiveBasis, states_b, ch: KrausChannel, measure: str = "discord",
                   opts: InnerOptions | None = None) -> tuple[float, float]:
    """Measure of the channel output for a cq input and for its cc counterpart.

    The cc counterpart keeps the weights and A basis and replaces the B states by
    computational-basis projectors; it should never carry less correlation.
    """
    cq = cq_state(weights, basis_a, states_b)
    cc = cc_state(CCInput(weights, basis_a))
    q_cq = minimize_measurement(apply_local_A(ch, cq), measure, opts).value
    q_cc = minimize_measurement(apply_local_A(ch, cc), measure, opts).value
    return q_cq, q_cc
