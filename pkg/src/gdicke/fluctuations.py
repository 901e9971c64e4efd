"""Quadratic fluctuations around a mean-field minimum.

Bosonizing the two spins and expanding to leading order in 1/N leaves three
coupled harmonic oscillators,

    H2 = sum_i eps_i/2 (x_i^2 + p_i^2 - 1) + sum_{i<j} tau_ij x_i x_j,

i.e. a quadratic form H = H_x (+) H_p over r = (x1, x2, x3, p1, p2, p3) with
H_x carrying the couplings and H_p = diag(eps).  Williamson normal form gives
the excitation energies Delta_i (symplectic eigenvalues), the transformation
S with S^T H S = diag(Delta, Delta), and the ground-state covariance matrix
sigma = S S^T / 2, from which quadrature fluctuations and per-mode
entanglement entropies follow.

Production path: Delta_i^2 are the eigenvalues of M = H_p^(1/2) H_x H_p^(1/2)
and S is assembled from the eigenbasis of M.  `williamson_by_steps` builds the
same normal form by explicit squeeze / rotate / squeeze composition and exists
purely as a cross-check.

At an exactly gapless point (some Delta_i = 0) the position-sector entries of
S and sigma diverge; they are reported as +/-inf sentinels on the coordinates
the soft mode touches, never as an error -- the divergence is the physics of
the critical point.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidExpansionPoint, UncertaintyViolation, UnstableMode
from .meanfield import MeanFieldSolution, MinimizeOptions, minimize
from .model import SQRT2, ModelParams

# Mean-field residual above which the linear term of the expansion is not negligible.
EXPANSION_GRADIENT_TOL = 1e-8

# H_x eigenvalues below -STABILITY_TOL signal a non-minimum; in [-STABILITY_TOL, 0]
# they are clamped to zero (gapless mode).
STABILITY_TOL = 1e-10

# Relative support threshold deciding which coordinates a zero mode touches.
_SUPPORT_RTOL = 1e-12


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Coefficients of the three-oscillator fluctuation Hamiltonian."""

    eps1: float
    eps2: float
    eps3: float
    tau12: float
    tau13: float
    tau23: float

    def eps(self) -> np.ndarray:
        return np.array([self.eps1, self.eps2, self.eps3])

    def x_block(self) -> np.ndarray:
        return np.array(
            [
                [self.eps1, self.tau12, self.tau13],
                [self.tau12, self.eps2, self.tau23],
                [self.tau13, self.tau23, self.eps3],
            ]
        )

    def p_block(self) -> np.ndarray:
        return np.diag(self.eps())

    def hamiltonian_matrix(self) -> np.ndarray:
        h = np.zeros((6, 6))
        h[:3, :3] = self.x_block()
        h[3:, 3:] = self.p_block()
        return h


@dataclass(frozen=True, eq=False)
class GaussianSpectrum:
    """Williamson normal form of the fluctuation Hamiltonian.

    deltas : the three symplectic eigenvalues (excitation energies), ascending
    S      : 6x6 symplectic matrix with S^T H S = diag(deltas, deltas)
    sigma  : ground-state covariance matrix S S^T / 2
    ground_energy_correction : (sum Delta_i - sum eps_i) / 2, the O(1) shift
        of the ground energy below the mean-field value
    """

    deltas: np.ndarray
    S: np.ndarray
    sigma: np.ndarray
    ground_energy_correction: float


def symplectic_form(n_modes: int = 3) -> np.ndarray:
    """Canonical form Gamma = [[0, I], [-I, 0]] in (x..., p...) ordering."""
    gamma = np.zeros((2 * n_modes, 2 * n_modes))
    gamma[:n_modes, n_modes:] = np.eye(n_modes)
    gamma[n_modes:, :n_modes] = -np.eye(n_modes)
    return gamma


def build_quadratic(params: ModelParams, solution: MeanFieldSolution) -> QuadraticCoefficients:
    """Fluctuation coefficients at a mean-field solution.

    Valid only where the linear term of the 1/N expansion vanishes, i.e. at a
    stationary point; enforced through the solution's gradient norm.
    """
    if not solution.gradient_norm < EXPANSION_GRADIENT_TOL:
        raise InvalidExpansionPoint(
            f"gradient norm {solution.gradient_norm:.3e} exceeds {EXPANSION_GRADIENT_TOL}; "
            "the expansion point must be stationary"
        )
    t1, t2, a = solution.config.theta1, solution.config.theta2, solution.config.alpha
    s1, c1 = math.sin(t1), math.cos(t1)
    s2, c2 = math.sin(t2), math.cos(t2)
    Om, chi, lam = params.Omega, params.chi, params.lam
    return QuadraticCoefficients(
        eps1=Om * c1 - chi * s1 * s2 + 2 * SQRT2 * lam * a * s1,
        eps2=Om * c2 - chi * s1 * s2 + 2 * SQRT2 * lam * a * s2,
        eps3=params.omega,
        tau12=chi * c1 * c2,
        tau13=SQRT2 * lam * c1,
        tau23=SQRT2 * lam * c2,
    )


def _check_stability(coeffs: QuadraticCoefficients) -> np.ndarray:
    eps = coeffs.eps()
    if np.any(eps <= 0):
        raise UnstableMode(f"momentum block not positive: eps = {eps}")
    wx = np.linalg.eigvalsh(coeffs.x_block())
    if wx[0] < -STABILITY_TOL:
        raise UnstableMode(
            f"position block has eigenvalue {wx[0]:.3e} < -{STABILITY_TOL}; "
            "the expansion point is not a minimum"
        )
    return eps


def williamson(coeffs: QuadraticCoefficients) -> GaussianSpectrum:
    """Symplectic normal form of the quadratic Hamiltonian.

    Diagonalizes M = H_p^(1/2) H_x H_p^(1/2) = O diag(Delta^2) O^T and builds

        S_x = H_p^(1/2) O diag(Delta^(-1/2)),   S_p = H_p^(-1/2) O diag(Delta^(1/2)),

    so that S = S_x (+) S_p satisfies S^T Gamma S = Gamma and
    S^T H S = diag(Delta, Delta).  A vanishing Delta (gapless mode) yields inf
    entries in S_x and sigma on the coordinates the soft mode touches.
    """
    eps = _check_stability(coeffs)
    sq = np.sqrt(eps)
    m = sq[:, None] * coeffs.x_block() * sq[None, :]
    w, vecs = np.linalg.eigh(m)  # ascending; stable for repeated runs
    deltas = np.sqrt(np.clip(w, 0.0, None))

    wx_cols = sq[:, None] * vecs  # H_p^(1/2) O
    sx = np.empty((3, 3))
    sp = np.empty((3, 3))
    zero_modes = []
    for k in range(3):
        if deltas[k] > 0.0:
            rd = math.sqrt(deltas[k])
            sx[:, k] = wx_cols[:, k] / rd
            sp[:, k] = vecs[:, k] / sq * rd
        else:
            zero_modes.append(k)
            col = wx_cols[:, k]
            supp = np.abs(col) > _SUPPORT_RTOL * np.abs(col).max()
            sx[:, k] = np.where(supp, np.copysign(np.inf, col), 0.0)
            sp[:, k] = 0.0

    if zero_modes:
        finite = deltas > 0.0
        sigma_xx = sx[:, finite] @ sx[:, finite].T / 2
        for k in zero_modes:
            col = wx_cols[:, k]
            supp = np.flatnonzero(np.abs(col) > _SUPPORT_RTOL * np.abs(col).max())
            for i in supp:
                for j in supp:
                    sigma_xx[i, j] = np.sign(col[i] * col[j]) * np.inf
    else:
        sigma_xx = sx @ sx.T / 2
    sigma_pp = sp @ sp.T / 2

    s_full = np.zeros((6, 6))
    s_full[:3, :3] = sx
    s_full[3:, 3:] = sp
    sigma = np.zeros((6, 6))
    sigma[:3, :3] = sigma_xx
    sigma[3:, 3:] = sigma_pp
    return GaussianSpectrum(
        deltas=deltas,
        S=s_full,
        sigma=sigma,
        ground_energy_correction=float((deltas.sum() - eps.sum()) / 2),
    )


def williamson_by_steps(coeffs: QuadraticCoefficients) -> tuple[np.ndarray, np.ndarray]:
    """Cross-check construction of (deltas, S) by explicit composition.

    Step 1 squeezes each momentum so the p-block becomes the identity, step 2
    rotates the position block to its eigenbasis, step 3 squeezes each mode to
    equalize the two blocks.  Requires a strictly positive spectrum.
    """
    eps = _check_stability(coeffs)
    sq = np.sqrt(eps)
    s1 = np.diag(np.concatenate([sq, 1 / sq]))
    hx1 = sq[:, None] * coeffs.x_block() * sq[None, :]
    w, o = np.linalg.eigh(hx1)
    if w[0] <= 0:
        raise UnstableMode("stepwise construction requires a strictly positive spectrum")
    s2 = np.zeros((6, 6))
    s2[:3, :3] = o
    s2[3:, 3:] = o
    deltas = np.sqrt(w)
    s3 = np.diag(np.concatenate([deltas**-0.5, deltas**0.5]))
    return deltas, s1 @ s2 @ s3


@dataclass(frozen=True, eq=False)
class QuadratureFluctuations:
    """Variances (Delta x_i)^2 and (Delta p_i)^2 of the Gaussian ground state."""

    dx2: np.ndarray
    dp2: np.ndarray


def covariance_observables(spec: GaussianSpectrum) -> QuadratureFluctuations:
    d = np.diag(spec.sigma)
    return QuadratureFluctuations(dx2=d[:3].copy(), dp2=d[3:].copy())


def entanglement_entropy(dx: float, dp: float) -> float:
    """Von Neumann entropy (nats) of one mode from its quadrature spreads.

    With nu = dx*dp: S = (nu + 1/2) log(nu + 1/2) - (nu - 1/2) log(nu - 1/2),
    and S = 0 at the vacuum value nu = 1/2 (0 log 0 := 0).  Products within
    1e-12 of 1/2 are treated as exactly 1/2 (this absorbs the rounding of
    sqrt(1/2)*sqrt(1/2)); genuine violations below the band raise.
    """
    nu = dx * dp
    if math.isinf(nu):
        return math.inf
    if nu < 0.5 - 1e-12:
        raise UncertaintyViolation(f"dx*dp = {nu} < 1/2: covariance is not a valid quantum state")
    if nu <= 0.5 + 1e-12:
        return 0.0
    return (nu + 0.5) * math.log(nu + 0.5) - (nu - 0.5) * math.log(nu - 0.5)


def mode_entropies(spec: GaussianSpectrum) -> np.ndarray:
    """Entanglement entropy of each mode with the rest of the system."""
    flucts = covariance_observables(spec)
    return np.array(
        [
            entanglement_entropy(math.sqrt(flucts.dx2[i]), math.sqrt(flucts.dp2[i]))
            for i in range(3)
        ]
    )


def energy_gap(params: ModelParams, options: MinimizeOptions = MinimizeOptions()) -> float:
    """Lowest excitation energy above the ground state at the given couplings."""
    solution = minimize(params, options)
    spec = williamson(build_quadratic(params, solution))
    return float(spec.deltas[0])
