"""Joint-measurement noise accounting for approximate cloning.

Measuring one generator on each clone and rescaling by the gains gives
unbiased estimates of both means at once. The price is extra variance:
the product of the two measured variances obeys a floor strictly above
the intrinsic uncertainty product, attained when the gains are balanced
against the intrinsic spreads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classes import ClassKind
from .linalg import QubitState, partial_trace
from .machines import CloningMachine, output_state
from .pauli import Observable

UNIVERSAL_SHRINK = 2.0 / 3.0

# Optimum commonly quoted for joint measurement via universal cloning.
# The unbiased-estimator convention used here gives 81/16 instead of 9/2
# on sigma3 eigenstates; compare reports carry both, asserting neither.
REFERENCE_UNIVERSAL_PRODUCT = 4.5


@dataclass(frozen=True)
class UncertaintyReport:
    """Intrinsic and measured variances for one joint-measurement run."""

    delta_i1: float
    delta_i2: float
    delta_m1: float
    delta_m2: float
    product: float
    lower_bound: float
    theta: float
    optimal_theta: float

    def __post_init__(self):
        vals = [
            self.delta_i1,
            self.delta_i2,
            self.delta_m1,
            self.delta_m2,
            self.product,
            self.lower_bound,
            self.theta,
            self.optimal_theta,
        ]
        if not np.isfinite(vals).all():
            raise ValueError("report entries must be finite")
        if min(self.delta_i1, self.delta_i2) < -1e-12 or max(self.delta_i1, self.delta_i2) > 1.0 + 1e-12:
            raise ValueError("intrinsic variances of unit Pauli observables lie in [0, 1]")
        if abs(self.product - self.delta_m1 * self.delta_m2) > 1e-12:
            raise ValueError("product must equal delta_m1 * delta_m2")
        if self.product < self.lower_bound - 1e-10:
            raise ValueError("measured product violates the joint-measurement bound")


def intrinsic_variance(state: QubitState, x: Observable) -> float:
    """Tr[rho X^2] - Tr[rho X]^2 on the bare input state."""
    rho = state.density
    m = x.matrix
    mean = float(np.trace(rho @ m).real)
    second = float(np.trace(rho @ m @ m).real)
    return second - mean * mean


def measured_variance(m: CloningMachine, state: QubitState, x: Observable, branch: int) -> float:
    """Variance of the gain-rescaled estimator read from one output branch.

    The estimator multiplies the raw branch outcome by the branch gain so
    its expectation matches the input mean; its variance is
    g^2 Tr[rho_out X^2] - (g Tr[rho_out X])^2.
    """
    if m.gains is None:
        raise ValueError("measured variance needs a machine with gains")
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    g = m.gains[branch - 1]
    rho = partial_trace(output_state(m, state), branch).density
    xm = x.matrix
    mean = float(np.trace(rho @ xm).real)
    second = float(np.trace(rho @ xm @ xm).real)
    return g * g * second - (g * mean) ** 2


def _check_unit_traceless(x: Observable) -> None:
    if abs(x.coeffs[0]) > 1e-12 or abs(np.linalg.norm(x.bloch) - 1.0) > 1e-12:
        raise ValueError("generators must be unit-norm traceless observables")


def uncertainty_product(m: CloningMachine, state: QubitState) -> UncertaintyReport:
    """Joint-measurement noise report for a noncommuting-pair machine.

    Generator 1 is measured on branch 1, generator 2 on branch 2. The
    lower bound (sqrt(di1*di2) + 1)^2 is attained when tan(theta)^4
    equals di1/di2, so the report also carries the balancing angle.
    """
    if m.gains is None:
        raise ValueError("uncertainty products are defined for machines with gains")
    if m.observables.kind is not ClassKind.TWO_PARAM_NONCOMMUTING:
        raise ValueError("uncertainty products need a two-param-noncommuting class")
    g1, g2 = m.observables.generators
    _check_unit_traceless(g1)
    _check_unit_traceless(g2)
    di1 = intrinsic_variance(state, g1)
    di2 = intrinsic_variance(state, g2)
    dm1 = measured_variance(m, state, g1, 1)
    dm2 = measured_variance(m, state, g2, 2)
    bound = (np.sqrt(max(di1, 0.0) * max(di2, 0.0)) + 1.0) ** 2
    with np.errstate(divide="ignore"):
        ratio = np.divide(max(di1, 0.0), max(di2, 0.0))
    return UncertaintyReport(
        delta_i1=di1,
        delta_i2=di2,
        delta_m1=dm1,
        delta_m2=dm2,
        product=dm1 * dm2,
        lower_bound=float(bound),
        theta=float(np.arctan2(m.gains[0], m.gains[1])),
        optimal_theta=float(np.arctan(ratio**0.25)),
    )


def universal_clone_state(state: QubitState) -> QubitState:
    """Each output clone of the optimal universal cloner: Bloch vector shrunk by 2/3."""
    return QubitState(UNIVERSAL_SHRINK * state.bloch)


def universal_clone_product(state: QubitState) -> UncertaintyReport:
    """Joint-measurement noise when the clones come from the universal machine.

    Both branches carry the input shrunk by 2/3, so the unbiased gain is
    3/2 per branch and each measured variance is 9/4 - s_h^2. On sigma3
    eigenstates the product is 81/16, above the optimum 4 reachable with
    machines tailored to the sigma1/sigma2 pair.
    """
    s = state.bloch
    g = 1.0 / UNIVERSAL_SHRINK
    di1 = 1.0 - s[0] ** 2
    di2 = 1.0 - s[1] ** 2
    dm1 = g * g - s[0] ** 2
    dm2 = g * g - s[1] ** 2
    bound = (np.sqrt(di1 * di2) + 1.0) ** 2
    with np.errstate(divide="ignore"):
        ratio = np.divide(di1, di2)
    return UncertaintyReport(
        delta_i1=di1,
        delta_i2=di2,
        delta_m1=dm1,
        delta_m2=dm2,
        product=dm1 * dm2,
        lower_bound=float(bound),
        theta=float(np.arctan2(g, g)),
        optimal_theta=float(np.arctan(ratio**0.25)),
    )


def uncertainty_to_dict(r: UncertaintyReport) -> dict:
    return {
        "delta_i1": r.delta_i1,
        "delta_i2": r.delta_i2,
        "delta_m1": r.delta_m1,
        "delta_m2": r.delta_m2,
        "product": r.product,
        "lower_bound": r.lower_bound,
        "theta": r.theta,
        "optimal_theta": r.optimal_theta,
    }
