"""Propagators for the rotated Jaynes-Cummings dynamics and their comparison.

Four unitaries are produced for a given (params, t):

  * u_exact    -- midpoint-exponential stepping of h_rotated with step
                  doubling until self-consistency (the numerical oracle),
  * u_rwa      -- the same stepping applied to h_rwa,
  * u_magnus1  -- exp(Omega_1),
  * u_magnus2  -- exp(Omega_1 + Omega_2), one exponential of the sum.

Each stepping factor exp(-i dt H(t_mid)) is exactly unitary (Hermitian
eigendecomposition), so unitarity of every propagator holds by construction
rather than by accuracy.  The stepped product is evaluated through the
identity H(t) = D(t) H(0) D(t)^dag with the diagonal frame phase D, which
collapses the M-step product to one small exponential plus a matrix power;
the literal factor-by-factor product is kept as a reference implementation
and the two are tested against each other.

Error comparisons are phase-aligned spectral-norm distances taken after
projecting onto a buffered Fock subspace, because ladder truncation corrupts
the top levels and the Magnus/exact pair may differ by a physically
irrelevant global phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertSpec, adjoint, expm_antiherm, spectral_norm
from .jc_model import ModelParams, frame_phases, h_rotated, h_rotated_stack, h_rwa, h_rwa_stack
from .magnus import convergence_margin, omega1_closed, omega2_closed

__all__ = [
    "DEFAULT_BUFFER",
    "DEFAULT_STEP_TOL",
    "MAX_STEPS",
    "PropagatorBundle",
    "error_report",
    "phase_aligned_distance",
    "project_buffer",
    "u_exact",
    "u_magnus",
    "u_rwa",
    "unitarity_defect",
]

MAX_STEPS = 2**20
START_STEPS = 64
DEFAULT_STEP_TOL = 1e-10
# Each application of h_rotated moves the photon number by one and the
# second-order objects by up to two, so two guard levels quarantine the
# truncation edge.
DEFAULT_BUFFER = 2


@dataclass(frozen=True)
class PropagatorBundle:
    """The four propagators at one parameter point plus stepping metadata."""

    u_exact: np.ndarray
    u_rwa: np.ndarray
    u_magnus1: np.ndarray
    u_magnus2: np.ndarray
    params: ModelParams
    t: float
    steps_exact: int
    steps_rwa: int
    resid_exact: float
    resid_rwa: float


def unitarity_defect(u: np.ndarray) -> float:
    """Spectral norm of U^dag U - I."""
    u = np.asarray(u)
    return spectral_norm(adjoint(u) @ u - np.eye(u.shape[0]))


def project_buffer(spec: HilbertSpec, buffer: int) -> np.ndarray:
    """Orthogonal projector onto Fock levels 0 .. N-1-buffer (both atom states)."""
    if not 0 <= buffer <= spec.fock_dim - 2:
        raise ValueError(
            f"buffer must lie in 0..{spec.fock_dim - 2} for fock_dim={spec.fock_dim}, got {buffer}"
        )
    keep = np.arange(spec.fock_dim) <= spec.fock_dim - 1 - buffer
    return np.diag(np.repeat(keep, 2).astype(complex))


def _nearest_unitary(m: np.ndarray) -> np.ndarray:
    """Polar projection onto the unitary group (drops the rounding-level stretch)."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def _unitary_power(m: np.ndarray, k: int) -> np.ndarray:
    """m**k for unitary m and k >= 0 by binary powering.

    Every squaring doubles the inherited unitarity defect, which for large
    step counts would accumulate to ~k * eps; re-projecting after each
    squaring keeps the defect bounded independently of k.
    """
    result = np.eye(m.shape[0], dtype=complex)
    base = m
    while k > 0:
        if k & 1:
            result = base @ result
        k >>= 1
        if k:
            base = _nearest_unitary(base @ base)
    return _nearest_unitary(result)


def _midpoint_product(h0: np.ndarray, phases: np.ndarray, t: float, steps: int) -> np.ndarray:
    """Ordered product of exp(-i dt H(t_mid)) over all midpoints.

    With H(t) = D(t) H(0) D(t)^dag and D(t) = exp(i t phases) diagonal, the
    product telescopes to

        D(t - dt/2) (E D(-dt))^{M-1} E D(dt/2)^dag,   E = exp(-i dt H(0)),

    evaluated here as left-phase * (E R^{M-1}) * right-phase with
    R = D(-dt) E.  Exact restructuring, not an approximation.
    """
    dt = t / steps
    e = expm_antiherm(-1j * dt * h0)
    r = np.exp(-1j * phases * dt)[:, None] * e
    rm = _unitary_power(r, steps - 1)
    left = np.exp(1j * phases * (t - 0.5 * dt))
    right = np.exp(-1j * phases * 0.5 * dt)
    return left[:, None] * (e @ rm) * right[None, :]


def _midpoint_product_reference(
    params: ModelParams, spec: HilbertSpec, t: float, steps: int, rwa: bool
) -> np.ndarray:
    """Literal factor-by-factor midpoint product (reference for the fast path)."""
    dt = t / steps
    mids = (np.arange(steps) + 0.5) * dt
    stack = h_rwa_stack(params, spec, mids) if rwa else h_rotated_stack(params, spec, mids)
    lam, q = np.linalg.eigh(stack)  # batched Hermitian eigendecompositions
    factors = np.einsum("kij,kj,klj->kil", q, np.exp(-1j * dt * lam), q.conj())
    while factors.shape[0] > 1:
        m = factors.shape[0]
        paired = factors[1 : 2 * (m // 2) : 2] @ factors[0 : 2 * (m // 2) : 2]
        if m % 2:
            paired = np.concatenate([paired, factors[-1:]], axis=0)
        factors = paired
    return factors[0]


def _stepped_propagator(
    params: ModelParams, spec: HilbertSpec, t: float, tol: float, rwa: bool
) -> tuple[np.ndarray, int, float]:
    """Step-doubled midpoint propagator; returns (U, steps, last residual)."""
    if tol < 1e-12:
        raise ValueError(f"stepping tolerance must be >= 1e-12, got {tol}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    eye = np.eye(spec.dim, dtype=complex)
    if t == 0.0 or params.g == 0.0:
        return eye, 0, 0.0
    h0 = h_rwa(params, spec, 0.0) if rwa else h_rotated(params, spec, 0.0)
    phases = frame_phases(params, spec)
    steps = START_STEPS
    u_prev = None
    resid = np.inf
    while steps <= MAX_STEPS:
        u = _midpoint_product(h0, phases, t, steps)
        if u_prev is not None:
            resid = spectral_norm(u - u_prev)
            if resid <= tol:
                return u, steps, resid
        u_prev = u
        steps *= 2
    raise RuntimeError(
        f"midpoint stepping did not reach tol={tol:.1e} within {MAX_STEPS} steps "
        f"(last residual {resid:.3e})"
    )


def u_exact(
    params: ModelParams, spec: HilbertSpec, t: float, tol: float = DEFAULT_STEP_TOL
) -> tuple[np.ndarray, int]:
    """Numerically exact propagator of h_rotated; returns (U, steps used)."""
    u, steps, _ = _stepped_propagator(params, spec, t, tol, rwa=False)
    return u, steps


def u_rwa(
    params: ModelParams, spec: HilbertSpec, t: float, tol: float = DEFAULT_STEP_TOL
) -> tuple[np.ndarray, int]:
    """Stepped propagator of the RWA Hamiltonian; returns (U, steps used)."""
    u, steps, _ = _stepped_propagator(params, spec, t, tol, rwa=True)
    return u, steps


def u_magnus(params: ModelParams, spec: HilbertSpec, t: float, order: int) -> np.ndarray:
    """exp(Omega_1) or exp(Omega_1 + Omega_2); a single exponential of the sum."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    om1 = omega1_closed(params, spec, t).omega1
    if order == 1:
        return expm_antiherm(om1)
    om2 = omega2_closed(params, spec, t).omega2
    return expm_antiherm(om1 + om2)


def phase_aligned_distance(
    u1: np.ndarray, u2: np.ndarray, projector: np.ndarray | None = None
) -> float:
    """min over phi of ||P U1 P - e^{i phi} P U2 P|| in spectral norm.

    Coarse scan over the circle followed by golden-section refinement; the
    distance is insensitive to a global phase of either argument.
    """
    a = np.asarray(u1, dtype=complex)
    b = np.asarray(u2, dtype=complex)
    if projector is not None:
        a = projector @ a @ projector
        b = projector @ b @ projector

    def dist(phi: float) -> float:
        return float(np.linalg.svd(a - np.exp(1j * phi) * b, compute_uv=False)[0])

    coarse = np.linspace(-np.pi, np.pi, 97)[:-1]
    values = [dist(p) for p in coarse]
    k = int(np.argmin(values))
    step = coarse[1] - coarse[0]
    lo, hi = coarse[k] - step, coarse[k] + step

    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = dist(x1), dist(x2)
    while hi - lo > 1e-10:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = dist(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = dist(x2)
    return min(min(values), f1, f2)


def error_report(
    params: ModelParams,
    spec: HilbertSpec,
    t: float,
    tol: float = DEFAULT_STEP_TOL,
    buffer: int = DEFAULT_BUFFER,
) -> tuple[PropagatorBundle, dict[str, float]]:
    """All four propagators plus their pairwise phase-aligned distances.

    Distances are computed on the buffered subspace (Fock 0 .. N-1-buffer).
    The table also carries the convergence margin g t / pi.
    """
    proj = project_buffer(spec, buffer)
    ue, steps_e, resid_e = _stepped_propagator(params, spec, t, tol, rwa=False)
    ur, steps_r, resid_r = _stepped_propagator(params, spec, t, tol, rwa=True)
    m1 = u_magnus(params, spec, t, order=1)
    m2 = u_magnus(params, spec, t, order=2)
    bundle = PropagatorBundle(
        u_exact=ue,
        u_rwa=ur,
        u_magnus1=m1,
        u_magnus2=m2,
        params=params,
        t=t,
        steps_exact=steps_e,
        steps_rwa=steps_r,
        resid_exact=resid_e,
        resid_rwa=resid_r,
    )
    table = {
        "err_rwa": phase_aligned_distance(ue, ur, proj),
        "err_magnus1": phase_aligned_distance(ue, m1, proj),
        "err_magnus2": phase_aligned_distance(ue, m2, proj),
        "rwa_vs_magnus1": phase_aligned_distance(ur, m1, proj),
        "rwa_vs_magnus2": phase_aligned_distance(ur, m2, proj),
        "magnus1_vs_magnus2": phase_aligned_distance(m1, m2, proj),
        "convergence_margin": convergence_margin(params, t),
    }
    return bundle, table
