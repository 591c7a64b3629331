import math

import numpy as np
import pytest

from qcpower.qcore import I2, ket, partial_trace, projector, random_density_matrix
from qcpower.states import (
    CCInput,
    ProjectiveBasis,
    bloch_to_density,
    canonical_angles,
    cc_state,
    cq_state,
    density_to_bloch,
    lemma1_decompose,
    purify_rank2,
    rank2_qc_state,
)


def test_bloch_round_trip():
    assert np.allclose(bloch_to_density([0, 0, 0]), I2 / 2)
    assert np.allclose(bloch_to_density([0, 0, 1]), projector(ket("0")))
    assert np.allclose(bloch_to_density([1, 0, 0]), projector(ket("+")))
    assert np.allclose(density_to_bloch(I2 / 2), 0)
    assert np.allclose(density_to_bloch(projector(ket("1"))), [0, 0, -1])
    assert np.allclose(density_to_bloch(np.diag([0.8, 0.2])), [0, 0, 0.6])


def test_bloch_rejects_outside_ball():
    with pytest.raises(ValueError):
        bloch_to_density([1, 1, 0])


def test_basis_validation():
    with pytest.raises(ValueError):
        ProjectiveBasis(np.array([[1, 1], [0, 1]]))


@pytest.mark.parametrize("chi,phi", [(0.3, 0.4), (1.2, 2.9), (0.0, 1.0), (math.pi / 2, 0.5), (0.7, 3.5)])
def test_basis_angles_canonical(chi, phi):
    b = ProjectiveBasis.from_angles(chi, phi)
    c, f = b.angles
    assert 0 <= c <= math.pi / 2 and 0 <= f < math.pi
    same = ProjectiveBasis.from_angles(c, f)
    # same set of projectors, possibly in swapped order
    pa, pb = b.projectors, same.projectors
    ok = np.allclose(pa[0], pb[0], atol=1e-10) or np.allclose(pa[0], pb[1], atol=1e-10)
    assert ok


def test_canonical_angles_wraps_phi():
    chi, phi = canonical_angles(0.3, math.pi + 0.2)
    assert phi == pytest.approx(0.2)
    assert chi == pytest.approx(math.pi / 2 - 0.3)


def test_cq_state_examples(rng):
    rb = random_density_matrix(2, rng)
    out = cq_state([1.0, 0.0], ProjectiveBasis.computational(), [rb, I2 / 2])
    assert np.allclose(out, np.kron(projector(ket("0")), rb))
    seed = cq_state([0.5, 0.5], ProjectiveBasis.computational(), [projector(ket("0")), projector(ket("1"))])
    assert np.allclose(seed, (projector(ket("00")) + projector(ket("11"))) / 2)


def test_cq_state_rejects_bad_weights():
    with pytest.raises(ValueError):
        cq_state([0.7, 0.7], ProjectiveBasis.computational(), [I2 / 2, I2 / 2])


def test_cc_state():
    inp = CCInput(np.array([0.5, 0.5]), ProjectiveBasis.computational())
    assert np.allclose(cc_state(inp), (projector(ket("00")) + projector(ket("11"))) / 2)
    prod = cc_state(CCInput.from_angles(1.0, 0.4))
    assert np.linalg.matrix_rank(prod, tol=1e-10) == 1
    ad_input = cc_state(CCInput.from_angles(0.5, math.pi / 4))
    want = (np.kron(projector(ket("+")), projector(ket("0"))) + np.kron(projector(ket("-")), projector(ket("1")))) / 2
    assert np.allclose(ad_input, want)


def test_rank2_qc_state():
    assert np.allclose(rank2_qc_state(1.0, 0.3), projector(ket("00")))
    r = rank2_qc_state(0.0, math.pi / 4)
    assert np.trace(r).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rank2_qc_state(1.5, 0.0)


def test_pure_pair_decomposition_poles():
    d = lemma1_decompose(projector(ket("0")), projector(ket("1")))
    assert abs(abs(np.vdot(d.psi, ket("0"))) - 1) < 1e-12
    assert abs(abs(np.vdot(d.phi, ket("1"))) - 1) < 1e-12
    assert d.w1 == pytest.approx(1.0) and d.w2 == pytest.approx(0.0)


def test_pure_pair_decomposition_coincident_mixed():
    d = lemma1_decompose(I2 / 2, I2 / 2)
    assert d.w1 == pytest.approx(0.5) and d.w2 == pytest.approx(0.5)
    assert abs(abs(np.vdot(d.psi, ket("0"))) - 1) < 1e-12


def test_pure_pair_decomposition_reconstructs_random_pairs(rng):
    for _ in range(50):
        r1, r2 = random_density_matrix(2, rng), random_density_matrix(2, rng)
        d = lemma1_decompose(r1, r2)
        a, b = d.reconstruct()
        assert np.abs(a - r1).max() < 1e-10
        assert np.abs(b - r2).max() < 1e-10
        assert abs(np.vdot(d.psi, d.psi) - 1) < 1e-12


def test_purify_pure_input():
    v = (ket("00") + ket("11")) / math.sqrt(2)
    psi = purify_rank2(projector(v))
    full = np.outer(psi, psi.conj())
    assert np.allclose(partial_trace(full, [2, 2, 2], [0, 1]), projector(v), atol=1e-12)
    assert np.allclose(partial_trace(full, [2, 2, 2], [2]), projector(ket("0")), atol=1e-12)


def test_purify_rank2_round_trip(rng):
    for _ in range(20):
        rho = random_density_matrix(4, rng, rank=2)
        psi = purify_rank2(rho)
        full = np.outer(psi, psi.conj())
        assert np.abs(partial_trace(full, [2, 2, 2], [0, 1]) - rho).max() < 1e-12


def test_purify_rejects_rank3(rng):
    with pytest.raises(ValueError):
        purify_rank2(random_density_matrix(4, rng, rank=3))
