"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from qcpower.channels import KrausChannel, amplitude_damping, apply_local, max_qcp_channel, phase_damping
from qcpower.correlations import deficit_BA, discord_BA, discord_via_koashi_winter
from qcpower.qcore import binary_h, ket, projector, random_density_matrix, random_unitary
from qcpower.qcp import deficit_basis_sweep, max_qcp_search, qcp_ad_deficit, qcp_ad_discord, qcp_numeric, theorem1_check
from qcpower.states import ProjectiveBasis, cq_state, rank2_qc_state
from qcpower.superact import bipartite_correlation_lower_bound, build_scenario

DELTA_MAX = 2 * binary_h(1 / math.sqrt(2)) - 1
P_GRID = [round(0.1 * k, 1) for k in range(11)]
MEASURES = {"discord": discord_BA, "deficit": deficit_BA}


def report(capsys, number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


def random_b_channel(rng) -> KrausChannel:
    """Qubit channel from a Haar unitary on system (x) qubit environment."""
    u = random_unitary(4, rng)
    kraus = tuple(u.reshape(2, 2, 2, 2)[:, k, :, 0] for k in range(2))  # <e_k| U |e_0>
    return KrausChannel(kraus)


def criterion_1(capsys=None):
    start = time.perf_counter()
    t, phi, value = max_qcp_search()
    numeric = qcp_numeric(max_qcp_channel(), "discord").value
    elapsed = time.perf_counter() - start
    ok = (abs(value - DELTA_MAX) <= 1e-6 and abs(t) <= 1e-5 and abs(phi - math.pi / 4) <= 1e-5
          and abs(numeric - value) <= 1e-4 and elapsed < 30)
    return report(capsys, 1, ok,
                  f"max={value:.12f} (target {DELTA_MAX:.12f}) at t={t:.2e}, phi-pi/4={phi - math.pi / 4:.2e}; "
                  f"numeric={numeric:.10f}; {elapsed:.1f}s < 30s")


def criterion_2(capsys=None):
    start = time.perf_counter()
    worst, ends, converged = 0.0, [], True
    for p in P_GRID:
        res = qcp_numeric(amplitude_damping(p), "discord")
        converged &= res.converged
        worst = max(worst, abs(res.value - qcp_ad_discord(p)))
        if p in (0.0, 1.0):
            ends += [abs(res.value), abs(qcp_ad_discord(p))]
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and max(ends) <= 1e-9 and elapsed < 60
    return report(capsys, 2, ok,
                  f"max |numeric-analytic| = {worst:.2e} over 11 p; endpoints max {max(ends):.1e}; "
                  f"converged={converged}; {elapsed:.1f}s < 60s")


def criterion_3(capsys=None):
    start = time.perf_counter()
    worst, ends, worst_res, branch3 = 0.0, [], 0.0, []
    for p in P_GRID:
        res = qcp_numeric(amplitude_damping(p), "deficit")
        ana = qcp_ad_deficit(p)
        worst = max(worst, abs(res.value - ana.value))
        if ana.branch == 3:
            branch3.append(p)
            worst_res = max(worst_res, ana.residual)
        if p in (0.0, 1.0):
            ends += [abs(res.value), abs(ana.value)]
    fine = np.linspace(0, 1, 201)
    rows = deficit_basis_sweep(fine)
    for r in rows:
        a = qcp_ad_deficit(r.p)
        if a.branch == 3:
            worst_res = max(worst_res, a.residual)
    chis = [r.chi for r in rows]
    monotone = all(a >= b - 1e-12 for a, b in zip(chis, chis[1:]))
    trend = abs(chis[0] - math.pi / 4) < 1e-12 and chis[-1] < 1e-12
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and max(ends) <= 1e-9 and worst_res <= 1e-8 and monotone and trend and elapsed < 120
    return report(capsys, 3, ok,
                  f"max |numeric-analytic| = {worst:.2e}; branch 3 on grid at p={branch3}; "
                  f"max chi residual {worst_res:.1e}; chi monotone pi/4 -> 0: {monotone and trend}; "
                  f"{elapsed:.1f}s < 120s")


def criterion_4(capsys=None):
    start = time.perf_counter()
    fails, min_bound, max_pd = [], math.inf, 0.0
    for p in P_GRID[1:-1]:
        rep = build_scenario(p)
        pair_ok = all(ok and res <= 1e-10 for ok, res in rep.pairwise_checks.values())
        bound = bipartite_correlation_lower_bound(p, samples=2, seed=0, maxiter=800)
        pd_qcp = qcp_numeric(phase_damping(p), "discord").value
        min_bound, max_pd = min(min_bound, bound), max(max_pd, pd_qcp)
        if not (rep.commutator_match and pair_ok and bound > 1e-4 and pd_qcp <= 1e-6):
            fails.append(p)
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed < 60
    return report(capsys, 4, ok,
                  f"commutator/pairwise checks failing at p={fails}; min AA':BB' deficit bound {min_bound:.4f}; "
                  f"max single-copy PD QCP {max_pd:.1e}; {elapsed:.1f}s < 60s")


def criterion_5(capsys=None):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        t, phi = rng.uniform(-1, 1), rng.uniform(0, math.pi)
        u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        rho = u @ rank2_qc_state(t, phi) @ u.conj().T
        worst = max(worst, abs(discord_via_koashi_winter(rho) - discord_BA(rho).value))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 60
    return report(capsys, 5, ok, f"max |KW - optimiser| = {worst:.2e} over 200 states; {elapsed:.1f}s < 60s")


def criterion_6(capsys=None):
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    worst_cq = 0.0
    for _ in range(100):
        basis = ProjectiveBasis(random_unitary(2, rng))
        rho = cq_state(rng.dirichlet([1, 1]), basis, [random_density_matrix(2, rng) for _ in range(2)])
        worst_cq = max(worst_cq, *(f(rho).value for f in MEASURES.values()))
    positive = min(f(rank2_qc_state(0.0, math.pi / 4)).value for f in MEASURES.values())
    worst_lu = 0.0
    for _ in range(100):
        rho = random_density_matrix(4, rng)
        u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        rot = u @ rho @ u.conj().T
        worst_lu = max(worst_lu, *(abs(f(rot).value - f(rho).value) for f in MEASURES.values()))
    worst_mono = 0.0
    for _ in range(100):
        rho = random_density_matrix(4, rng)
        out = apply_local(random_b_channel(rng), rho, [2, 2], [1])
        worst_mono = max(worst_mono, *(f(out).value - f(rho).value for f in MEASURES.values()))
    elapsed = time.perf_counter() - start
    ok = worst_cq <= 1e-8 and positive >= 1e-4 and worst_lu <= 1e-7 and worst_mono <= 1e-6 and elapsed < 120
    return report(capsys, 6, ok,
                  f"(a) max on CQ {worst_cq:.1e}, min on delta_max state {positive:.4f}; "
                  f"(b) max LU change {worst_lu:.1e}; (c) max B-channel increase {worst_mono:.1e}; "
                  f"{elapsed:.1f}s < 120s")


def criterion_7(capsys=None):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = -math.inf
    channels = (amplitude_damping(0.5), max_qcp_channel())
    for _ in range(200):
        basis = ProjectiveBasis(random_unitary(2, rng))
        q = rng.dirichlet([1, 1])
        states = [random_density_matrix(2, rng) for _ in range(2)]
        for ch in channels:
            for measure in MEASURES:
                q_cq, q_cc = theorem1_check(q, basis, states, ch, measure)
                worst = max(worst, q_cq - q_cc)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 120
    return report(capsys, 7, ok,
                  f"max (q_cq - q_cc) = {worst:.2e} over 200 inputs x 2 channels x 2 measures; {elapsed:.1f}s < 120s")


def criterion_8(capsys=None):
    phi_plus = (ket("00") + ket("11")) / math.sqrt(2)
    psi_plus = (ket("01") + ket("10")) / math.sqrt(2)
    rho = (projector(phi_plus) + projector(psi_plus)) / 2
    value = discord_BA(rho).value
    # non-blocking: the line records the computed value against the stated 3/4
    return report(capsys, 8, True,
                  f"discrepancy report: brute-force discord of (Phi+ + Psi+)/2 = {value:.3e}, stated 0.75; "
                  f"the state equals (|++><++| + |--><--|)/2, which is classical")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 9)])
def test_acceptance(criterion, capsys):
    assert criterion(capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
