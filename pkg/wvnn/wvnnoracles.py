"""Closed-form relations for qubit weak values and their Henrici departures.

The formulas are written out term by term, with no algebraic simplification,
so they can serve as independent checks on the generic matrix path in
``wvnnweak``. Nothing in this module calls into ``wvnnweak``.

The ``*_values`` functions accept numpy arrays and broadcast; the scenario
based wrappers validate a single point and apply the overlap floor.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from wvnn.wvnnerrors import (
    BranchSingularityError,
    ExcludedParameterError,
    NearOrthogonalPostselectionError,
    NoRealSolutionError,
)
from wvnn.wvnnsettings import get_log_level, settings
from wvnn.wvnnstates import HALF_PI, TWO_PI, _check_range

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

SQRT2 = np.sqrt(2.0)
QUARTER_PI = np.pi / 4
FAMILY_PHI = np.pi / 4
# distance from pi/4 at which the argmax switches to the limiting branch
BRANCH_SWITCH = 1e-9
DISCRIMINANT_SLACK = 1e-12


@dataclass(frozen=True)
class QubitScenario:
    theta_i: float
    theta_f: float
    xi_i: float = 0.0
    xi_f: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta_i", _check_range("theta_i", self.theta_i, 0.0, HALF_PI))
        object.__setattr__(self, "theta_f", _check_range("theta_f", self.theta_f, 0.0, HALF_PI))
        object.__setattr__(self, "xi_i", _check_range("xi_i", self.xi_i, 0.0, TWO_PI))
        object.__setattr__(self, "xi_f", _check_range("xi_f", self.xi_f, 0.0, TWO_PI))

    def overlap_sq(self) -> float:
        return float(sx_overlap_sq_values(self.theta_i, self.theta_f, self.xi_i, self.xi_f))


@dataclass(frozen=True)
class AppendixCScenario:
    """psi_f = (1, 0), real pre-selection, observable at phi = pi/4."""

    theta_i: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta_i", _check_range("theta_i", self.theta_i, 0.0, HALF_PI))
        object.__setattr__(self, "theta", _check_range("theta", self.theta, 0.0, HALF_PI))

    @property
    def phi(self) -> float:
        return FAMILY_PHI


def _require_overlap(overlap_sq: float, floor: Optional[float]):
    floor = settings.overlap_floor if floor is None else floor
    if overlap_sq < floor:
        raise NearOrthogonalPostselectionError(float(overlap_sq), floor)


# sigma_x with general phases


def sx_overlap_sq_values(theta_i, theta_f, xi_i=0.0, xi_f=0.0):
    return (
        np.cos(theta_f) ** 2 * np.cos(theta_i) ** 2
        + np.sin(theta_f) ** 2 * np.sin(theta_i) ** 2
        + 2 * np.cos(xi_i - xi_f) * np.cos(theta_f) * np.cos(theta_i) * np.sin(theta_f) * np.sin(theta_i)
    )


def sx_df_values(theta_i, theta_f, xi_i=0.0, xi_f=0.0):
    numerator = np.sqrt(1 - np.sin(2 * theta_i) ** 2 * np.cos(xi_i) ** 2)
    return numerator / sx_overlap_sq_values(theta_i, theta_f, xi_i, xi_f)


def sx_wv_sq_values(theta_i, theta_f, xi_i=0.0, xi_f=0.0):
    numerator = (
        np.sin(theta_f) ** 2 * np.cos(theta_i) ** 2
        + np.cos(theta_f) ** 2 * np.sin(theta_i) ** 2
        + 2 * np.cos(xi_i + xi_f) * np.cos(theta_f) * np.cos(theta_i) * np.sin(theta_f) * np.sin(theta_i)
    )
    return numerator / sx_overlap_sq_values(theta_i, theta_f, xi_i, xi_f)


def sx_df(s: QubitScenario, floor: float = None) -> float:
    _require_overlap(s.overlap_sq(), floor)
    return float(sx_df_values(s.theta_i, s.theta_f, s.xi_i, s.xi_f))


def sx_wv_sq(s: QubitScenario, floor: float = None) -> float:
    _require_overlap(s.overlap_sq(), floor)
    return float(sx_wv_sq_values(s.theta_i, s.theta_f, s.xi_i, s.xi_f))


def sx_df_reduced(theta_i, theta_f):
    """Zero-phase forms: |cos 2theta_i| / cos^2(theta_f - theta_i)."""
    return np.abs(np.cos(2 * theta_i)) / np.cos(theta_f - theta_i) ** 2


def sx_wv_sq_reduced(theta_i, theta_f):
    return np.sin(theta_f + theta_i) ** 2 / np.cos(theta_f - theta_i) ** 2


def sx_theta_tilde_f(theta_i: float, xi_i: float = 0.0, xi_f: float = 0.0) -> float:
    """Post-selection angle in [0, pi/2] where |sigma_x,w|^2 = 1.

    The two tangent roots multiply to -1, the positive one is the root in range.
    """
    if abs(np.tan(theta_i) ** 2 - 1) < 1e-9:
        raise ExcludedParameterError(f"theta_i={theta_i} makes tan^2(theta_i) = 1")
    t2 = np.tan(2 * theta_i)
    s = np.sin(xi_i) * np.sin(xi_f)
    tan_tilde = t2 * s + np.sqrt(t2**2 * s**2 + 1)
    return float(np.arctan(tan_tilde))


def sx_theta_hat_f(theta_i: float, xi_i: float = 0.0, xi_f: float = 0.0) -> float:
    """Stationary point of d_f(theta_f) in [0, pi/2], independent of theta_f.

    It is the maximum of d_f when the overlap has its minimum there, see
    ``sx_theta_hat_is_maximum``; for xi_i == xi_f it is theta_i itself.
    """
    if abs(np.cos(2 * theta_i)) < 1e-15:
        return QUARTER_PI
    tan_hat = np.tan(2 * theta_i) * np.cos(xi_i - xi_f)
    return float(0.5 * np.mod(np.arctan(tan_hat), np.pi))


def sx_theta_hat_is_maximum(theta_i: float, xi_i: float = 0.0, xi_f: float = 0.0) -> bool:
    theta_hat = sx_theta_hat_f(theta_i, xi_i, xi_f)
    curvature = np.cos(2 * theta_hat) * np.cos(2 * theta_i) + np.cos(xi_i - xi_f) * np.sin(2 * theta_hat) * np.sin(
        2 * theta_i
    )
    return bool(curvature < 0)


def sx_df_range(theta_i: float, xi_i: float = 0.0, xi_f: float = 0.0) -> Tuple[float, float]:
    """Smallest and largest d_f reachable by any real theta_f."""
    numerator = np.sqrt(1 - np.sin(2 * theta_i) ** 2 * np.cos(xi_i) ** 2)
    r = np.sqrt(np.cos(2 * theta_i) ** 2 + np.cos(xi_i - xi_f) ** 2 * np.sin(2 * theta_i) ** 2)
    low_overlap = (1 - r) / 2
    high = numerator / low_overlap if low_overlap > 0 else np.inf
    return float(numerator / ((1 + r) / 2)), float(high)


def sx_tan_thetaf_of_df(d_f: float, theta_i: float, xi_i: float = 0.0, xi_f: float = 0.0, branch: str = "plus") -> float:
    """tan(theta_f) giving the Henrici departure d_f, one of two branches.

    Solves (d a^2 - K) t^2 + 2 d c a t + (d - K) = 0 with a = tan(theta_i),
    c = cos(xi_i - xi_f) and K = S (1 + a^2).
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    a = np.tan(theta_i)
    c = np.cos(xi_i - xi_f)
    s = np.sqrt(1 - np.sin(2 * theta_i) ** 2 * np.cos(xi_i) ** 2)
    k = s * (1 + a**2)
    denominator = d_f * a**2 - k
    if abs(denominator) <= 1e-14 * max(1.0, abs(d_f * a**2), k):
        raise BranchSingularityError(f"d_f={d_f} makes the leading coefficient vanish")
    discriminant = d_f**2 * c**2 * a**2 - denominator * (d_f - k)
    if discriminant < -DISCRIMINANT_SLACK * max(1.0, (d_f * c * a) ** 2):
        raise NoRealSolutionError(
            f"d_f={d_f} is not reachable at theta_i={theta_i}, xi_i={xi_i}, xi_f={xi_f}", float(discriminant)
        )
    root = np.sqrt(max(discriminant, 0.0))
    sign = 1.0 if branch == "plus" else -1.0
    return float((-d_f * c * a + sign * root) / denominator)


def sx_wv_sq_of_tan(tan_thetaf, theta_i, xi_i, xi_f, d_f):
    """|sigma_x,w|^2 written through tan(theta_f) and d_f."""
    a = np.tan(theta_i)
    s = np.sqrt(1 - np.sin(2 * theta_i) ** 2 * np.cos(xi_i) ** 2)
    t = tan_thetaf
    return (
        (1 / (1 + a**2))
        * (1 / (1 + t**2))
        * (t**2 + a**2 + 2 * np.cos(xi_i + xi_f) * t * a)
        / s
        * d_f
    )


# sigma_y and sigma_z with null phases


def sy_relations(theta_i: float, theta_f: float, floor: float = None) -> Tuple[complex, float]:
    d = theta_f - theta_i
    _require_overlap(np.cos(d) ** 2, floor)
    df = 1 / np.cos(d) ** 2
    wv = 1j * np.tan(d)
    return complex(wv), float(df)


def sz_relations(theta_i: float, theta_f: float, floor: float = None) -> Tuple[float, float]:
    """|sigma_z,w| and d_f; the uncertainty of sigma_z is |sin 2theta_i|."""
    d = theta_f - theta_i
    _require_overlap(np.cos(d) ** 2, floor)
    wv_abs = abs(np.cos(2 * theta_i) - np.tan(d) * np.sin(2 * theta_i))
    df = abs(np.sin(2 * theta_i)) * (1 + np.tan(d) ** 2)
    return float(wv_abs), float(df)


def sz_wv_sq_of_df(theta_i: float, d_f: float, branch: str = "plus") -> float:
    """|sigma_z,w|^2 from d_f, the branch picks the sign of tan(theta_f - theta_i)."""
    s2 = np.sin(2 * theta_i)
    if abs(s2) < 1e-15:
        raise ExcludedParameterError(f"theta_i={theta_i} is a sigma_z eigenstate")
    radicand = -1 + d_f / abs(s2)
    if radicand < -DISCRIMINANT_SLACK:
        raise NoRealSolutionError(f"d_f={d_f} below the minimum {abs(s2)}", float(radicand))
    sign = 1.0 if branch == "plus" else -1.0
    return float((np.cos(2 * theta_i) - sign * s2 * np.sqrt(max(radicand, 0.0))) ** 2)


# varying observable at phi = pi/4 with psi_f = (1, 0)


class FamilyQuantities(NamedTuple):
    alpha_A: float
    alpha_Aprime: float
    df_A: float
    df_Aprime: float
    wv_abs: float


def appc_values(theta_i, theta):
    """Denominator-free quantities of the phi = pi/4 family (arrays allowed)."""
    alpha_a = np.cos(theta)
    alpha_aprime = np.cos(theta) * np.cos(2 * theta_i) + SQRT2 * np.cos(theta_i) * np.sin(theta) * np.sin(theta_i)
    df_a = np.abs(np.sin(theta))
    radicand = (
        5
        - np.cos(4 * theta_i)
        - np.cos(2 * theta) * (1 + 3 * np.cos(4 * theta_i))
        - 2 * SQRT2 * np.sin(2 * theta) * np.sin(4 * theta_i)
    )
    df_aprime = np.sqrt(np.maximum(radicand, 0.0)) / np.sqrt(8)
    tan_i = np.tan(theta_i)
    wv_abs = np.sqrt(
        np.cos(theta) ** 2 + SQRT2 * np.cos(theta) * np.sin(theta) * tan_i + np.sin(theta) ** 2 * tan_i**2
    )
    return FamilyQuantities(alpha_a, alpha_aprime, df_a, df_aprime, wv_abs)


def appc_quantities(s: AppendixCScenario) -> FamilyQuantities:
    return FamilyQuantities(*(float(x) for x in appc_values(s.theta_i, s.theta)))


def appc_argmax_theta(theta_i: float) -> float:
    """theta maximising |O_w| for the phi = pi/4 family.

    Below pi/4 this is half the upper edge of the amplification window.
    From pi/4 on it is the midpoint of the two nilpotency angles pi/2 and
    arctan(-sqrt(2) cot 2theta_i), which joins the lower branch
    continuously at pi/4.
    """
    if theta_i < QUARTER_PI - BRANCH_SWITCH:
        tan_i = np.tan(theta_i)
        return float(0.5 * np.arctan(SQRT2 * tan_i / (1 - tan_i**2)))
    return float(QUARTER_PI + 0.5 * np.arctan(-SQRT2 / np.tan(2 * theta_i)))


def appc_window(theta_i: float) -> Tuple[float, float]:
    """theta interval where |O_w| >= 1 for the phi = pi/4 family."""
    if theta_i < QUARTER_PI - BRANCH_SWITCH:
        tan_i = np.tan(theta_i)
        return 0.0, float(np.arctan(SQRT2 * tan_i / (1 - tan_i**2)))
    return 0.0, float(HALF_PI)


def appc_nilpotent_angles(theta_i: float) -> Tuple[float, float]:
    """Zeros of the psi_f based and psi_i based eigenvalues in [0, pi/2].

    The second one exists only for theta_i in (pi/4, pi/2], NaN otherwise.
    """
    if theta_i <= QUARTER_PI:
        return float(HALF_PI), float("nan")
    return float(HALF_PI), float(np.arctan(-SQRT2 / np.tan(2 * theta_i)))


# free phi, null phases: numerator, normalized departures and derivatives


class DerivativeValues(NamedTuple):
    numerator: float
    dfn_1: float
    dfn_2: float
    d_numerator: float
    d_dfn_1: float
    d_dfn_2: float


def _dfn_closed(theta, theta_s, phi):
    radicand = (
        (3 + 2 * np.cos(4 * theta_s) * np.cos(phi) ** 2 - np.cos(2 * phi)) * np.sin(theta) ** 2
        + 4 * np.cos(theta) ** 2 * np.sin(2 * theta_s) ** 2
        - 2 * np.cos(phi) * np.sin(2 * theta) * np.sin(4 * theta_s)
    )
    root = np.sqrt(np.maximum(radicand, 0.0))
    value = 0.5 * root
    derivative = (
        -4 * np.cos(2 * theta) * np.cos(phi) * np.sin(4 * theta_s)
        + np.sin(2 * theta) * (np.cos(4 * theta_s) * (3 + np.cos(2 * phi)) + 2 * np.sin(phi) ** 2)
    ) / (4 * root)
    return value, derivative


def appd_values(theta, theta_i, theta_f, phi) -> DerivativeValues:
    """All six closed forms; dfn_1 is the theta_f form, dfn_2 the theta_i form."""
    with np.errstate(divide="ignore", invalid="ignore"):
        radicand = (
            np.cos(theta) * np.cos(theta_f + theta_i) + np.cos(phi) * np.sin(theta) * np.sin(theta_f + theta_i)
        ) ** 2 + np.sin(theta) ** 2 * np.sin(theta_f - theta_i) ** 2 * np.sin(phi) ** 2
        root = np.sqrt(radicand)
        d_numerator = (
            -np.sin(2 * theta)
            * (
                np.cos(2 * (theta_f - theta_i))
                + 3 * np.cos(2 * (theta_f + theta_i))
                - 2 * np.cos(2 * phi) * np.sin(2 * theta_f) * np.sin(2 * theta_i)
            )
            + 4 * np.cos(2 * theta) * np.cos(phi) * np.sin(2 * (theta_f + theta_i))
        ) / (8 * root)
        dfn_1, d_dfn_1 = _dfn_closed(theta, theta_f, phi)
        dfn_2, d_dfn_2 = _dfn_closed(theta, theta_i, phi)
    return DerivativeValues(root, dfn_1, dfn_2, d_numerator, d_dfn_1, d_dfn_2)


def appd_values_and_derivatives(theta: float, theta_i: float, theta_f: float, phi: float) -> DerivativeValues:
    return DerivativeValues(*(float(x) for x in appd_values(theta, theta_i, theta_f, phi)))


def central_difference(func, x: float, h: float = 1e-5) -> float:
    return float((func(x + h) - func(x - h)) / (2 * h))
