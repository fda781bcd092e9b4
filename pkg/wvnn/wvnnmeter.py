"""Von Neumann pointer measurement with post-selection on a discrete grid.

The meter is a real Gaussian in position. Each eigen-component of the
system drags its own copy of the meter by gamma * lambda; the translation
is a phase ramp in momentum space, so it is unitary on the periodic grid.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence

import numpy as np

from wvnn.wvnnerrors import DomainError, GridOverflowError, OutsideWeakRegimeError
from wvnn.wvnnlinalg import as_cvector
from wvnn.wvnnperformance_monitor import performance_monitor
from wvnn.wvnnsettings import get_log_level, settings
from wvnn.wvnnstates import Observable
from wvnn.wvnnweak import weak_value_trace

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

MIN_GRID_POINTS = 128
# pointer ratios carry rounding noise of roughly eps * x_extent / gamma
CONVERGENCE_SLACK = 1e-9


@dataclass(frozen=True)
class MeterConfig:
    grid_points: int = 1024
    x_extent: float = 20.0
    sigma_x: float = 1.0

    def __post_init__(self):
        n = self.grid_points
        if n < MIN_GRID_POINTS or n & (n - 1):
            raise DomainError(f"grid_points must be a power of two >= {MIN_GRID_POINTS}, got {n}")
        if self.sigma_x <= 0:
            raise DomainError(f"sigma_x must be positive, got {self.sigma_x}")
        if self.x_extent < 8 * self.sigma_x:
            raise DomainError(f"x_extent {self.x_extent} is below 8 * sigma_x = {8 * self.sigma_x}")

    @property
    def dx(self) -> float:
        return 2 * self.x_extent / self.grid_points

    @property
    def x(self) -> np.ndarray:
        return -self.x_extent + self.dx * np.arange(self.grid_points)

    @property
    def p(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.grid_points, self.dx)

    @property
    def sigma_p_sq(self) -> float:
        return 1.0 / (4 * self.sigma_x**2)

    def initial_wave(self) -> np.ndarray:
        wave = np.exp(-self.x**2 / (4 * self.sigma_x**2)).astype(np.complex128)
        return wave / np.linalg.norm(wave)


@dataclass(frozen=True)
class ProtocolConfig:
    observable: Observable
    psi_i: np.ndarray
    psi_f: np.ndarray
    gamma: float
    meter: MeterConfig = field(default_factory=MeterConfig)
    # -1 is exp(-i gamma O P), a shift of +gamma * lambda
    coupling_sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "psi_i", as_cvector(self.psi_i))
        object.__setattr__(self, "psi_f", as_cvector(self.psi_f))
        if self.gamma <= 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if self.coupling_sign not in (-1, 1):
            raise DomainError(f"coupling_sign must be -1 or +1, got {self.coupling_sign}")
        check_on_grid(self.observable, self.gamma, self.meter)

    def with_gamma(self, gamma: float) -> "ProtocolConfig":
        return ProtocolConfig(self.observable, self.psi_i, self.psi_f, gamma, self.meter, self.coupling_sign)


def check_on_grid(o: Observable, gamma: float, meter: MeterConfig):
    shift = gamma * o.max_abs_eigenvalue
    limit = meter.x_extent / 4
    if shift >= limit:
        raise GridOverflowError(shift, limit)


@dataclass
class ProtocolResult:
    gamma: float
    mean_x: float
    mean_p: float
    success_prob: float
    conditioned_meter: np.ndarray
    joint_norm: float


def translate(wave: np.ndarray, p: np.ndarray, shift: float) -> np.ndarray:
    """wave(x - shift) on the periodic grid."""
    return np.fft.ifft(np.fft.fft(wave) * np.exp(-1j * p * shift))


def run_protocol(c: ProtocolConfig) -> ProtocolResult:
    # raises on near-orthogonal post-selection before any meter work
    weak_value_trace(c.observable, c.psi_i, c.psi_f)

    meter = c.meter
    p = meter.p
    phi0 = meter.initial_wave()
    eigenvalues, vectors = np.linalg.eigh(c.observable.matrix)
    amp_i = vectors.conj().T @ c.psi_i
    amp_f = vectors.conj().T @ c.psi_f

    chi = np.zeros_like(phi0)
    joint_norm_sq = 0.0
    for k, lam in enumerate(eigenvalues):
        shifted = translate(phi0, p, -c.coupling_sign * c.gamma * lam)
        joint_norm_sq += abs(amp_i[k]) ** 2 * float(np.vdot(shifted, shifted).real)
        chi += np.conj(amp_f[k]) * amp_i[k] * shifted

    success_prob = float(np.vdot(chi, chi).real)
    conditioned = chi / np.sqrt(success_prob)
    density = np.abs(conditioned) ** 2
    mean_x = float(np.sum(meter.x * density))
    momentum = np.fft.fft(conditioned, norm="ortho")
    mean_p = float(np.sum(p * np.abs(momentum) ** 2))
    return ProtocolResult(c.gamma, mean_x, mean_p, success_prob, conditioned, float(np.sqrt(joint_norm_sq)))


def neville_at_zero(h: Sequence[float], y: Sequence[float]) -> float:
    """Polynomial extrapolation of y(h) to h = 0."""
    h = np.asarray(h, dtype=float)
    table = np.asarray(y, dtype=float).copy()
    n = len(h)
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (h[i + level] * table[i] - h[i] * table[i + 1]) / (h[i + level] - h[i])
    return float(table[0])


class ShiftEstimate(NamedTuple):
    re_est: float
    im_est: float


@dataclass
class LadderRun:
    gammas: List[float]
    results: List[ProtocolResult]
    re_ratios: List[float]
    im_ratios: List[float]
    estimate: ShiftEstimate


def _check_ladder(gamma_ladder: Sequence[float]) -> List[float]:
    gammas = [float(g) for g in gamma_ladder]
    if len(gammas) < 3:
        raise DomainError(f"gamma ladder needs at least 3 values, got {len(gammas)}")
    if any(b >= a for a, b in zip(gammas, gammas[1:])) or gammas[-1] <= 0:
        raise DomainError(f"gamma ladder must be positive and strictly decreasing, got {gammas}")
    return gammas


def _check_convergence(name: str, gammas: List[float], ratios: List[float]):
    differences = [abs(b - a) for a, b in zip(ratios, ratios[1:])]
    for earlier, later in zip(differences, differences[1:]):
        if later > earlier + CONVERGENCE_SLACK * max(1.0, max(abs(r) for r in ratios)):
            raise OutsideWeakRegimeError(
                f"{name} ratios do not settle along the gamma ladder: differences {differences}",
                gammas,
                ratios,
                differences,
            )


@performance_monitor
def run_ladder(c: ProtocolConfig, gamma_ladder: Sequence[float]) -> LadderRun:
    """Protocol runs along the ladder and their extrapolation to gamma -> 0.

    Both pointer ratios are even in gamma, so the extrapolation runs in gamma^2.
    """
    gammas = _check_ladder(gamma_ladder)
    check_on_grid(c.observable, gammas[0], c.meter)
    with ThreadPoolExecutor(max_workers=min(settings.threads, len(gammas))) as executor:
        results = list(executor.map(lambda g: run_protocol(c.with_gamma(g)), gammas))

    sigma_p_sq = c.meter.sigma_p_sq
    # a +1 coupling flips both pointer readings
    orientation = -c.coupling_sign
    re_ratios = [orientation * r.mean_x / r.gamma for r in results]
    im_ratios = [orientation * r.mean_p / (2 * r.gamma * sigma_p_sq) for r in results]
    _check_convergence("position", gammas, re_ratios)
    _check_convergence("momentum", gammas, im_ratios)

    h = [g * g for g in gammas]
    estimate = ShiftEstimate(neville_at_zero(h, re_ratios), neville_at_zero(h, im_ratios))
    logger.debug(f"Richardson over {gammas}: re {re_ratios} -> {estimate.re_est}, im {im_ratios} -> {estimate.im_est}")
    return LadderRun(gammas, results, re_ratios, im_ratios, estimate)


def weak_shift_estimate(c: ProtocolConfig, gamma_ladder: Sequence[float]) -> ShiftEstimate:
    return run_ladder(c, gamma_ladder).estimate


def ladder_records(c: ProtocolConfig, gamma_ladder: Sequence[float]) -> List[Dict[str, float]]:
    run = run_ladder(c, gamma_ladder)
    return [
        {
            "gamma": r.gamma,
            "mean_x": r.mean_x,
            "mean_p": r.mean_p,
            "success_prob": r.success_prob,
            "re_est": run.estimate.re_est,
            "im_est": run.estimate.im_est,
        }
        for r in run.results
    ]
