import numpy as np
import pytest

from hpbec import decoupling
from hpbec.couplings import CouplingFamily
from hpbec.dispersion import quadratic_dispersion
from hpbec.errors import ContractViolation
from hpbec.hubbard import build_hubbard_system
from hpbec.linalg import unitary_defect

DISP = quadratic_dispersion()
HOP = np.array([[0.0, -1.0], [-1.0, 0.0]])
COORDS = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def make_system(alpha=0.2, beta=1.0, kappa=0.5):
    cluster = build_hubbard_system(2, 2, HOP, 2.0, coupling=alpha, beta=beta)
    family = CouplingFamily(2, 3, 2.0, kappa)
    return decoupling.build_coupled_system(cluster, family, DISP, 10.0, COORDS)


def test_generator_hermitian_and_dressing_unitary():
    ops = decoupling.build_coupled_operators(make_system(), level_cap=5)
    assert np.linalg.norm(ops.s_generator - ops.s_generator.conj().T) < 1e-12
    assert unitary_defect(ops.v_dressing) < 1e-12


def test_zero_coupling_trivial_dressing():
    sys = make_system(alpha=0.0)
    ops = decoupling.build_coupled_operators(sys, level_cap=4)
    assert np.linalg.norm(ops.v_dressing - np.eye(ops.v_dressing.shape[0])) < 1e-13
    assert np.linalg.norm(ops.h_full - ops.h_free) < 1e-13
    rep = decoupling.verify_dressing_identity(sys, (3, 4))
    assert rep.final_residual < 1e-13


def test_zero_coupling_exact_factorization():
    sys = make_system(alpha=0.0)
    dim = sys.hubbard.sector.dim
    rng = np.random.default_rng(3)
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    A = 0.5 * (A + A.conj().T)
    f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    res = decoupling.verify_factorization(sys, 6, A, f)
    assert res.gap < 1e-10


def test_dressing_residual_ladder_monotone():
    rep = decoupling.verify_dressing_identity(make_system(), (4, 6, 8))
    assert rep.monotone
    assert rep.final_residual < 1e-2


def test_single_site_ground_energy_displaced_oscillator():
    """One site doubly occupied, one mode: E_0 = U - 2 alpha^2 |lambda|^2 / omega."""
    alpha = 0.25
    cluster = build_hubbard_system(1, 2, [[0.0]], repulsion=3.0, coupling=alpha)
    family = CouplingFamily(1, 3, 2.0, 0.5)
    sys = decoupling.build_coupled_system(cluster, family, DISP, 10.0, [[1.0, 0.0, 0.0]])
    ops = decoupling.build_coupled_operators(sys, level_cap=40)
    e0 = np.linalg.eigvalsh(ops.h_full)[0]
    lam2 = abs(sys.site_mode_couplings[0, 0]) ** 2
    expected = 3.0 - 2.0 * alpha**2 * lam2 / sys.frequencies[0]
    assert e0 == pytest.approx(expected, abs=1e-10)


def test_spectral_equivalence_small_gap():
    rep = decoupling.verify_spectral_equivalence(make_system(), level_cap=10)
    assert rep.max_gap < 1e-3
    assert np.all(np.diff(rep.coupled) >= -1e-12)


def test_discrete_overlap_symmetric_psd():
    sys = make_system()
    R = sys.discrete_overlap(-0.5)
    assert np.allclose(R, R.T)
    assert np.linalg.eigvalsh(R).min() > -1e-12 * np.abs(R).max()


def test_time_invariance_of_coupled_gibbs_state():
    sys = make_system()
    dim = sys.hubbard.sector.dim
    ops = decoupling.build_coupled_operators(sys, level_cap=5)
    rng = np.random.default_rng(11)
    X = rng.standard_normal(ops.h_full.shape) + 1j * rng.standard_normal(ops.h_full.shape)
    X = 0.5 * (X + X.conj().T)
    assert decoupling.time_invariance_gap(sys, 5, X, t=0.7) < 1e-9 * np.linalg.norm(X)


def test_phase_matrix_unimodular_diagonal():
    sys = make_system()
    f = np.array([0.3 + 0.2j, -0.1 + 0.4j])
    P = decoupling.density_phase_matrix(sys, f)
    assert np.allclose(P, np.diag(np.diag(P)))
    assert np.allclose(np.abs(np.diag(P)), 1.0)


def test_phase_weight_shape_contract():
    sys = make_system()
    with pytest.raises(ContractViolation):
        decoupling.discrete_phase_weights(sys, np.zeros(3))


def test_dimension_cap_enforced():
    with pytest.raises(ContractViolation):
        decoupling.build_coupled_operators(make_system(), level_cap=60)


def test_invalid_coupled_system_inputs():
    cluster = build_hubbard_system(2, 2, HOP, 2.0)
    with pytest.raises(ValueError):
        decoupling.CoupledSystem(cluster, np.array([1.0, -0.5]), np.zeros((2, 2)))
    with pytest.raises(ContractViolation):
        decoupling.CoupledSystem(cluster, np.array([1.0, 2.0]), np.zeros((3, 2)))
