"""Gaussian wavepacket oracle for the probe's conditional evolutions.

Planck units throughout (hbar = 1).  States are pure one-dimensional
Gaussians tracked by mean position/momentum, a 2x2 covariance matrix
(x^2, x*p, p^2 blocks) and an accumulated action phase.  Constant-force
evolution is exact for this family, so the oracle has no integrator error;
the source is held static during the probe's measurement and each branch
feels the full 1/r^2 force of its path.

Sign convention: positive x points from the probe toward the source, so
both branch forces are positive and the nearer path pulls harder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import ConvergenceError, InvalidInputError
from .scenario import ScenarioParams

# Relative tolerance on det(cov) = 1/4 when a pure-state wavefunction is needed.
_PURITY_RTOL = 1e-6

# Determinant checks on a matrix with entries of magnitude s carry an
# irreducible representation noise of order eps*s^2; this factor converts
# the noise scale into validation slack.
_DET_NOISE_RTOL = 1e-13

# Bracketing for orthogonalization_time gives up at t = 1e6 * r.
_BRACKET_CAP_FACTOR = 1e6

_DEKKER_SPLIT = 134217729.0  # 2^27 + 1


def _two_product(a: float, b: float) -> tuple[float, float]:
    # Dekker: exact product a*b = x + y with x = fl(a*b).
    x = a * b
    c = _DEKKER_SPLIT * a
    a_hi = c - (c - a)
    a_lo = a - a_hi
    c = _DEKKER_SPLIT * b
    b_hi = c - (c - b)
    b_lo = b - b_hi
    y = a_lo * b_lo - (((x - a_hi * b_hi) - a_lo * b_hi) - a_hi * b_lo)
    return x, y


def _cov_det(cov: np.ndarray) -> float:
    # Compensated 2x2 determinant: accurate even when the two products
    # nearly cancel (long free spreading makes them huge).
    p, pe = _two_product(float(cov[0, 0]), float(cov[1, 1]))
    q, qe = _two_product(float(cov[0, 1]), float(cov[1, 0]))
    return (p - q) + (pe - qe)


def _det_noise_scale(cov: np.ndarray) -> float:
    return _DET_NOISE_RTOL * float(
        abs(cov[0, 0] * cov[1, 1]) + abs(cov[0, 1] * cov[1, 0])
    )


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Pure Gaussian state: means, covariance, accumulated phase.

    The covariance must be symmetric, positive definite, and respect the
    uncertainty floor det(cov) >= 1/4, all up to the representation noise
    of its entries.  Treated as immutable; the stored array is read-only.
    """

    mean_x: float
    mean_p: float
    cov: np.ndarray
    phase: float = 0.0

    def __post_init__(self) -> None:
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (2, 2):
            raise InvalidInputError(f"covariance must be 2x2, got shape {cov.shape}")
        if not (
            np.isfinite(cov).all()
            and math.isfinite(self.mean_x)
            and math.isfinite(self.mean_p)
            and math.isfinite(self.phase)
        ):
            raise InvalidInputError("state fields must be finite")
        scale = max(1.0, abs(cov[0, 1]), abs(cov[1, 0]))
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * scale:
            raise InvalidInputError("covariance must be symmetric")
        det = _cov_det(cov)
        slack = _det_noise_scale(cov)
        if cov[0, 0] <= 0.0 or det <= -slack:
            raise InvalidInputError("covariance must be positive definite")
        if det < 0.25 * (1.0 - 1e-9) - slack:
            raise InvalidInputError(
                f"covariance violates the uncertainty floor: det = {det!r} < 1/4"
            )
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    @property
    def sigma_x(self) -> float:
        return math.sqrt(self.cov[0, 0])

    @property
    def sigma_p(self) -> float:
        return math.sqrt(self.cov[1, 1])


def ground_state(m: float, omega: float) -> GaussianState:
    """Trap ground state: minimum uncertainty, sigma_x = sqrt(1/(2*m*omega))."""
    if m <= 0.0:
        raise InvalidInputError(f"nonpositive mass m = {m!r}")
    if omega <= 0.0:
        raise InvalidInputError(f"nonpositive frequency omega = {omega!r}")
    sx2 = 1.0 / (2.0 * m * omega)
    sp2 = 0.5 * m * omega
    return GaussianState(0.0, 0.0, np.diag([sx2, sp2]), 0.0)


def ground_state_with_width(m: float, sigma_x: float) -> GaussianState:
    """Trap ground state with a chosen position width (omega = 1/(2*m*sigma_x^2))."""
    if sigma_x <= 0.0:
        raise InvalidInputError(f"nonpositive width sigma_x = {sigma_x!r}")
    return ground_state(m, 1.0 / (2.0 * m * sigma_x * sigma_x))


def evolve_constant_force(
    state: GaussianState, force: float, m: float, t: float
) -> GaussianState:
    """Exact evolution under H = p^2/(2m) - F*x for a time t >= 0.

    Means follow the classical trajectory; the covariance is propagated by
    the free symplectic map (a uniform force displaces but never reshapes a
    Gaussian); the phase advances by the classical action of the mean path.
    """
    if t < 0.0 or not math.isfinite(t):
        raise InvalidInputError(f"time must be finite and nonnegative, got {t!r}")
    if m <= 0.0:
        raise InvalidInputError(f"nonpositive mass m = {m!r}")
    if not math.isfinite(force):
        raise InvalidInputError(f"force must be finite, got {force!r}")
    tau = t / m
    sxx, sxp, spp = state.cov[0, 0], state.cov[0, 1], state.cov[1, 1]
    new_cov = np.array(
        [
            [sxx + 2.0 * tau * sxp + tau * tau * spp, sxp + tau * spp],
            [sxp + tau * spp, spp],
        ]
    )
    x0, p0 = state.mean_x, state.mean_p
    mean_x = x0 + p0 * tau + 0.5 * force * t * tau
    mean_p = p0 + force * t
    action = (
        (p0 * p0 / (2.0 * m) + force * x0) * t
        + p0 * force * t * t / m
        + force * force * t ** 3 / (3.0 * m)
    )
    return GaussianState(mean_x, mean_p, new_cov, state.phase + action)


def _complex_width(s: GaussianState) -> complex:
    # Wavefunction exp(-a*(x - mean_x)^2/2 + ...) with a fixed by the
    # covariance of a pure state.
    sxx = s.cov[0, 0]
    return 1.0 / (2.0 * sxx) - 1j * s.cov[0, 1] / sxx


def overlap(a: GaussianState, b: GaussianState) -> complex:
    """Inner product <a|b> of two pure Gaussian states, relative phase included.

    For equal covariances with no x-p correlation the magnitude is
    exp(-dx^2/(8*sx^2) - dp^2/(8*sp^2)).
    """
    for s in (a, b):
        det = _cov_det(s.cov)
        if abs(det - 0.25) > _PURITY_RTOL * 0.25 + _det_noise_scale(s.cov):
            raise InvalidInputError(
                f"overlap is defined for pure states (det cov = 1/4), got det = {det!r}"
            )
    wa = np.conjugate(_complex_width(a))
    wb = _complex_width(b)
    big_a = (wa + wb) / 2.0
    big_b = wa * a.mean_x + wb * b.mean_x + 1j * (b.mean_p - a.mean_p)
    big_c = (
        -wa * a.mean_x ** 2 / 2.0
        - wb * b.mean_x ** 2 / 2.0
        + 1j * (a.mean_p * a.mean_x - b.mean_p * b.mean_x)
        + 1j * (b.phase - a.phase)
    )
    norm = (2.0 * math.pi * a.cov[0, 0]) ** -0.25 * (2.0 * math.pi * b.cov[0, 0]) ** -0.25
    return complex(norm * np.sqrt(np.pi / big_a) * np.exp(big_b * big_b / (4.0 * big_a) + big_c))


@dataclass(frozen=True)
class BranchPair:
    """Probe state conditioned on each source path, plus their overlap."""

    left: GaussianState
    right: GaussianState
    overlap: complex

    @property
    def overlap_magnitude(self) -> float:
        return abs(self.overlap)


def displacement_branches(p: ScenarioParams, sigma0: float, t: float) -> BranchPair:
    """Evolve the trap ground state for time t under each path's full
    1/r^2 pull (left: distance r, right: distance r+d)."""
    if sigma0 <= 0.0:
        raise InvalidInputError(f"nonpositive width sigma0 = {sigma0!r}")
    k = p.pair_coupling
    f_left = k / (p.r * p.r)
    f_right = k / ((p.r + p.d) * (p.r + p.d))
    s0 = ground_state_with_width(p.m_b, sigma0)
    left = evolve_constant_force(s0, f_left, p.m_b, t)
    right = evolve_constant_force(s0, f_right, p.m_b, t)
    return BranchPair(left, right, overlap(left, right))


def orthogonalization_time(
    p: ScenarioParams, sigma0: float = 1.0, eps: float = 0.01
) -> float:
    """Smallest t at which the conditional probe states satisfy |<L|R>| <= eps.

    Brackets by doubling from t = 1e-9*r, then bisects to 1e-9 relative
    width.  Raises ConvergenceError if no crossing exists below t = 1e6*r.
    """
    if not 0.0 < eps < 1.0:
        raise InvalidInputError(f"eps must lie in (0, 1), got {eps!r}")

    def magnitude(t: float) -> float:
        return displacement_branches(p, sigma0, t).overlap_magnitude

    cap = _BRACKET_CAP_FACTOR * p.r
    lo, hi = 0.0, 1e-9 * p.r
    while magnitude(hi) > eps:
        if hi >= cap:
            raise ConvergenceError(
                f"branch overlap stayed above eps = {eps!r} up to t = 1e6*R/c"
            )
        lo, hi = hi, min(2.0 * hi, cap)
    while hi - lo > 1e-9 * hi:
        mid = 0.5 * (lo + hi)
        if magnitude(mid) > eps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PhaseBranchPair:
    """Two-branch interferometric record: common phase on the near beam,
    differential phase, and the conditional-state overlap |cos(dphi/2)|."""

    phi_l: float
    delta_phi: float
    overlap_magnitude: float


def phase_evolution(p: ScenarioParams, t: float) -> PhaseBranchPair:
    """Interferometric probe record after time t, using the exact
    differential phase."""
    if t < 0.0 or not math.isfinite(t):
        raise InvalidInputError(f"time must be finite and nonnegative, got {t!r}")
    delta_phi = bounds.phase_difference(p, t, "exact")
    phi_l = p.pair_coupling * t / p.r
    return PhaseBranchPair(phi_l, delta_phi, abs(math.cos(0.5 * delta_phi)))
