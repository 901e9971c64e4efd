"""Couplings, variational energy surface and analytic phase structure.

Two spin ensembles (frequency Omega, mutual coupling chi) share a bosonic
mode (frequency omega, coupling lam).  Everything here is intensive: energies
are per spin, displacements are scaled by sqrt(N), so no system size appears.
All functions are pure.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SQRT2 = math.sqrt(2.0)

# Points within this chi-distance of a boundary are assigned the lower-chi phase.
BOUNDARY_TOL = 1e-12


def _wrap_angle(a: float) -> float:
    """Map an angle into [-pi, pi], leaving already-canonical values untouched."""
    if -math.pi <= a <= math.pi:
        return a
    return math.atan2(math.sin(a), math.cos(a))


@dataclass(frozen=True)
class ModelParams:
    """The four couplings, in units of the boson frequency.

    Omega : spin frequency (> 0)
    omega : boson frequency (> 0, default 1 sets the energy scale)
    chi   : spin-spin coupling (any sign; > 0 antiferromagnetic)
    lam   : spin-boson coupling (>= 0)
    """

    Omega: float = 1.0
    omega: float = 1.0
    chi: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.lam >= 0:
            raise ValueError(f"lam must be non-negative, got {self.lam}")


@dataclass(frozen=True)
class MeanFieldConfiguration:
    """Variational state: two spin rotation angles and a scaled boson displacement."""

    theta1: float
    theta2: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", _wrap_angle(self.theta1))
        object.__setattr__(self, "theta2", _wrap_angle(self.theta2))

    def negated(self) -> "MeanFieldConfiguration":
        """The degenerate partner under the global Z2 (parity) symmetry."""
        return MeanFieldConfiguration(-self.theta1, -self.theta2, -self.alpha)


class Phase(Enum):
    PARAMAGNETIC_NORMAL = "I"
    FERROMAGNETIC_SUPERRADIANT = "II"
    ANTIFERROMAGNETIC_NORMAL = "III"


@dataclass(frozen=True)
class BoundaryDistances:
    """Signed chi-distances to the three analytic boundaries (chi minus boundary chi)."""

    i_ii: float
    i_iii: float
    ii_iii: float


@dataclass(frozen=True)
class PhaseLabel:
    variant: Phase
    boundary_distances: BoundaryDistances


def mean_field_energy(params: ModelParams, config: MeanFieldConfiguration) -> float:
    """Energy per spin of the product trial state."""
    t1, t2, a = config.theta1, config.theta2, config.alpha
    return (
        -(params.Omega / 2) * (math.cos(t1) + math.cos(t2))
        + (params.chi / 2) * math.sin(t1) * math.sin(t2)
        + params.omega * a * a
        - SQRT2 * params.lam * a * (math.sin(t1) + math.sin(t2))
    )


def mean_field_gradient(params: ModelParams, config: MeanFieldConfiguration) -> np.ndarray:
    """Partial derivatives (dE/dtheta1, dE/dtheta2, dE/dalpha) of the per-spin energy."""
    t1, t2, a = config.theta1, config.theta2, config.alpha
    s1, c1 = math.sin(t1), math.cos(t1)
    s2, c2 = math.sin(t2), math.cos(t2)
    g1 = (params.Omega / 2) * s1 + (params.chi / 2) * s2 * c1 - SQRT2 * params.lam * a * c1
    g2 = (params.Omega / 2) * s2 + (params.chi / 2) * s1 * c2 - SQRT2 * params.lam * a * c2
    g3 = 2.0 * (params.omega * a - (params.lam / SQRT2) * (s1 + s2))
    return np.array([g1, g2, g3])


def boundary_chis(params: ModelParams) -> tuple[float, float, float]:
    """chi values of the three analytic boundaries at the given Omega, omega, lam.

    Returned in the order (I-II, I-III, II-III):
    (4 lam^2 - Omega omega)/omega, Omega, 2 lam^2/omega.
    """
    b_i_ii = (4 * params.lam**2 - params.Omega * params.omega) / params.omega
    b_i_iii = params.Omega
    b_ii_iii = 2 * params.lam**2 / params.omega
    return b_i_ii, b_i_iii, b_ii_iii


def classify_phase(params: ModelParams) -> PhaseLabel:
    """Assign the ground-state phase from the analytic boundary inequalities.

    Phase I   (paramagnetic-normal):       chi > (4 lam^2 - Omega omega)/omega and chi < Omega
    Phase II  (ferromagnetic-superradiant): chi < (4 lam^2 - Omega omega)/omega and chi < 2 lam^2/omega
    Phase III (antiferromagnetic-normal):   chi > Omega and chi > 2 lam^2/omega

    Ties within BOUNDARY_TOL of a boundary go to the phase on the lower-chi side.
    """
    b12, b13, b23 = boundary_chis(params)
    chi = params.chi
    dist = BoundaryDistances(chi - b12, chi - b13, chi - b23)
    if chi <= b12 + BOUNDARY_TOL and chi <= b23 + BOUNDARY_TOL:
        variant = Phase.FERROMAGNETIC_SUPERRADIANT
    elif chi <= b13 + BOUNDARY_TOL:
        variant = Phase.PARAMAGNETIC_NORMAL
    else:
        variant = Phase.ANTIFERROMAGNETIC_NORMAL
    return PhaseLabel(variant, dist)


def analytic_branches(params: ModelParams) -> list[MeanFieldConfiguration]:
    """Closed-form stationary points of the energy surface.

    Always contains the trivial branch (0, 0, 0).  When they exist, the
    symmetric branch theta1 = theta2 = +/- arccos(Omega omega / (4 lam^2 - chi omega))
    with alpha = sqrt(2) lam sin(theta)/omega, and the antisymmetric branch
    theta1 = -theta2 = +/- arccos(Omega/chi) with alpha = 0, are appended as
    degenerate pairs (positive-theta1 member first).
    """
    branches = [MeanFieldConfiguration(0.0, 0.0, 0.0)]
    mu = 4 * params.lam**2 - params.chi * params.omega
    if mu >= params.Omega * params.omega:
        theta = math.acos(params.Omega * params.omega / mu)
        if theta > 0.0:
            alpha = SQRT2 * params.lam * math.sin(theta) / params.omega
            branches.append(MeanFieldConfiguration(theta, theta, alpha))
            branches.append(MeanFieldConfiguration(-theta, -theta, -alpha))
    if params.chi != 0.0 and abs(params.Omega / params.chi) <= 1.0:
        theta = math.acos(params.Omega / params.chi)
        if theta > 0.0:
            branches.append(MeanFieldConfiguration(theta, -theta, 0.0))
            branches.append(MeanFieldConfiguration(-theta, theta, 0.0))
    return branches


@dataclass(frozen=True)
class OrderParameters:
    """Intensive order parameters and excitation numbers of a configuration.

    jx1, jx2 : transverse spin projections per spin, <Jx_i>/J = -sin(theta_i)
    b        : scaled field amplitude, <b>/sqrt(N) = alpha
    ns1, ns2 : spin excitation numbers per spin, 1 - cos(theta_i)
    nb       : boson number per spin, alpha^2
    """

    jx1: float
    jx2: float
    b: float
    ns1: float
    ns2: float
    nb: float


def order_parameters(params: ModelParams, config: MeanFieldConfiguration) -> OrderParameters:
    t1, t2, a = config.theta1, config.theta2, config.alpha
    return OrderParameters(
        jx1=-math.sin(t1),
        jx2=-math.sin(t2),
        b=a,
        ns1=1.0 - math.cos(t1),
        ns2=1.0 - math.cos(t2),
        nb=a * a,
    )
