import numpy as np
import pytest

from jcmagnus.hilbert import HilbertSpec, annihilation, commutator, creation, spectral_norm, tensor
from jcmagnus.jc_model import ModelParams, frame_phases, h_rotated, h_rwa
from jcmagnus.propagator import (
    _midpoint_product,
    _midpoint_product_reference,
    error_report,
    phase_aligned_distance,
    project_buffer,
    u_exact,
    u_magnus,
    u_rwa,
    unitarity_defect,
)

PARAMS = ModelParams(1.0, 0.8, 0.05)


def test_project_buffer_properties():
    spec = HilbertSpec(8)
    assert np.array_equal(project_buffer(spec, 0), np.eye(16))
    p = project_buffer(spec, 3)
    assert np.trace(p).real == pytest.approx(2 * (8 - 3))
    assert spectral_norm(p @ p - p) == 0.0
    assert spectral_norm(p - p.conj().T) == 0.0
    with pytest.raises(ValueError):
        project_buffer(spec, 7)
    with pytest.raises(ValueError):
        project_buffer(spec, -1)


def test_projected_ladder_commutator_is_identity():
    spec = HilbertSpec(8)
    lifted = tensor(commutator(annihilation(spec), creation(spec)), np.eye(2, dtype=complex))
    for buffer in (1, 2, 3):
        p = project_buffer(spec, buffer)
        assert spectral_norm(p @ lifted @ p - p) <= 1e-14


def test_trivial_propagators():
    spec = HilbertSpec(6)
    u, steps = u_exact(ModelParams(1.0, 0.8, 0.0), spec, 3.0)
    assert steps == 0 and np.array_equal(u, np.eye(12))
    u, steps = u_exact(PARAMS, spec, 0.0)
    assert steps == 0 and np.array_equal(u, np.eye(12))
    u, steps = u_rwa(ModelParams(1.0, 0.8, 0.0), spec, 2.0)
    assert steps == 0
    assert np.array_equal(u_magnus(ModelParams(1.0, 0.8, 0.0), spec, 1.0, 1), np.eye(12))


def test_stepping_validation():
    spec = HilbertSpec(6)
    with pytest.raises(ValueError):
        u_exact(PARAMS, spec, 1.0, tol=1e-13)
    with pytest.raises(ValueError):
        u_exact(PARAMS, spec, -1.0)
    with pytest.raises(ValueError):
        u_magnus(PARAMS, spec, 1.0, 3)


@pytest.mark.parametrize("steps", [1, 5, 64, 129])
@pytest.mark.parametrize("rwa", [False, True])
def test_fast_product_matches_reference(steps, rwa):
    spec = HilbertSpec(8)
    h0 = h_rwa(PARAMS, spec, 0.0) if rwa else h_rotated(PARAMS, spec, 0.0)
    fast = _midpoint_product(h0, frame_phases(PARAMS, spec), 1.3, steps)
    ref = _midpoint_product_reference(PARAMS, spec, 1.3, steps, rwa=rwa)
    assert spectral_norm(fast - ref) <= 1e-11
    assert unitarity_defect(fast) <= 1e-12


def test_second_order_self_convergence():
    spec = HilbertSpec(10)
    h0 = h_rotated(PARAMS, spec, 0.0)
    phases = frame_phases(PARAMS, spec)
    u1 = _midpoint_product(h0, phases, 1.0, 256)
    u2 = _midpoint_product(h0, phases, 1.0, 512)
    u3 = _midpoint_product(h0, phases, 1.0, 1024)
    ratio = spectral_norm(u1 - u2) / spectral_norm(u2 - u3)
    assert 3.5 <= ratio <= 4.5


def test_u_rwa_constant_hamiltonian_on_resonance():
    # at delta = 0 the RWA Hamiltonian is time independent, so one exponential
    # of -i t H matches the stepped result
    from jcmagnus.hilbert import expm_antiherm

    spec = HilbertSpec(8)
    p = ModelParams(1.0, 1.0, 0.05)
    t = 1.7
    tol = 1e-10
    stepped, _ = u_rwa(p, spec, t, tol)
    direct = expm_antiherm(-1j * t * h_rwa(p, spec, 0.0))
    assert phase_aligned_distance(stepped, direct) <= tol


def test_rwa_error_decreases_with_sum_frequency():
    # fixed detuning, growing sigma: the counter-rotating error dies off
    spec = HilbertSpec(8)
    proj = project_buffer(spec, 2)
    errs = []
    for omega in (1.0, 2.0, 4.0):
        p = ModelParams(omega, omega - 0.2, 0.05)
        ue, _ = u_exact(p, spec, 1.0, 1e-10)
        ur, _ = u_rwa(p, spec, 1.0, 1e-10)
        errs.append(phase_aligned_distance(ue, ur, proj))
    assert errs[0] > errs[1] > errs[2]


def test_magnus_errors_and_halving():
    spec = HilbertSpec(10)
    proj = project_buffer(spec, 2)

    def errors(g):
        p = ModelParams(1.0, 0.8, g)
        ue, _ = u_exact(p, spec, 1.0, 1e-10)
        e1 = phase_aligned_distance(ue, u_magnus(p, spec, 1.0, 1), proj)
        e2 = phase_aligned_distance(ue, u_magnus(p, spec, 1.0, 2), proj)
        return e1, e2

    e1_hi, e2_hi = errors(0.04)
    e1_lo, e2_lo = errors(0.02)
    assert e2_hi < e1_hi and e2_lo < e1_lo
    assert 3.0 <= e1_hi / e1_lo <= 5.5
    assert 6.0 <= e2_hi / e2_lo <= 10.0


def test_error_report_zero_coupling():
    spec = HilbertSpec(6)
    _, table = error_report(ModelParams(1.0, 0.8, 0.0), spec, 1.0)
    for key in ("err_rwa", "err_magnus1", "err_magnus2"):
        assert table[key] <= 1e-12
    assert table["convergence_margin"] == 0.0


def test_phase_alignment_invariance():
    spec = HilbertSpec(8)
    ue, _ = u_exact(PARAMS, spec, 1.0, 1e-10)
    assert phase_aligned_distance(ue, np.exp(0.83j) * ue) <= 1e-9
    um = u_magnus(PARAMS, spec, 1.0, 2)
    d1 = phase_aligned_distance(ue, um)
    d2 = phase_aligned_distance(ue, np.exp(-1.2j) * um)
    assert d1 == pytest.approx(d2, abs=1e-9)


def test_error_report_truncation_independence():
    # same physical window: N with buffer 3 against N+4 with buffer 7
    _, small = error_report(PARAMS, HilbertSpec(10), 1.0, tol=1e-10, buffer=3)
    _, large = error_report(PARAMS, HilbertSpec(14), 1.0, tol=1e-10, buffer=7)
    for key in ("err_rwa", "err_magnus1", "err_magnus2"):
        assert abs(small[key] - large[key]) <= 1e-6


def test_bundle_unitarity_and_norm_preservation(rng):
    spec = HilbertSpec(10)
    bundle, _ = error_report(PARAMS, spec, 1.0, tol=1e-10)
    psi = rng.standard_normal(spec.dim) + 1j * rng.standard_normal(spec.dim)
    psi /= np.linalg.norm(psi)
    for u in (bundle.u_exact, bundle.u_rwa, bundle.u_magnus1, bundle.u_magnus2):
        assert unitarity_defect(u) <= 1e-10
        assert abs(np.linalg.norm(u @ psi) - 1.0) <= 1e-10
    assert bundle.steps_exact > 0
    assert bundle.resid_exact <= 1e-10


def test_u_magnus2_is_single_exponential_of_sum():
    # exp(O1 + O2) differs from exp(O1) exp(O2) at the commutator order; the
    # implementation must produce the former
    from jcmagnus.hilbert import expm_antiherm
    from jcmagnus.magnus import omega1_closed, omega2_closed

    spec = HilbertSpec(8)
    p = ModelParams(1.0, 0.8, 0.2)
    om1 = omega1_closed(p, spec, 1.0).omega1
    om2 = omega2_closed(p, spec, 1.0).omega2
    expected = expm_antiherm(om1 + om2)
    assert spectral_norm(u_magnus(p, spec, 1.0, 2) - expected) <= 1e-13
    product = expm_antiherm(om1) @ expm_antiherm(om2)
    assert spectral_norm(u_magnus(p, spec, 1.0, 2) - product) > 1e-6
