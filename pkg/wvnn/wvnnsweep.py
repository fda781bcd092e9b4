"""Parameter sweeps over state angles and over the observable family.

State grids evaluate the weak value and both Henrici departures on every
(theta_i, theta_f) pair. Observable sweeps vary the Bloch observable angle
theta at fixed states. Points whose post-selection overlap falls below
the floor become gaps: NaN fields, class code -1 and gap_reason 1.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from wvnn import wvnnoracles
from wvnn.wvnnerrors import DomainError, NearOrthogonalPostselectionError, NotFoundError, WVNNError
from wvnn.wvnnperformance_monitor import performance_monitor
from wvnn.wvnnsettings import get_log_level, settings
from wvnn.wvnnstates import HALF_PI, PAULI, RANGE_SLACK, TWO_PI, Observable, bloch_matrix, observable_from_matrix
from wvnn.wvnntable import SweepTable
from wvnn.wvnnweak import (
    CLASS_BITS,
    TAG_AMPLIFYING,
    TAG_COMPLEX,
    TAG_OUTSIDE,
    build_weak_operator,
    eigenstructure,
    eigvec_angle_batch,
    structural_moments_batch,
    weak_values_batch,
)

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

GAP_NONE = 0
GAP_NEAR_ORTHOGONAL = 1
CLASS_GAP = -1
CAUTION_LEVEL = 1.001
WINDOW_SLACK = 1e-12
ROOT_XTOL = 1e-13
ZERO_TOUCH = 1e-12
DEFAULT_STATE_STEPS = 400
DEFAULT_THETA_STEPS = 2000
DEFAULT_SCAN_POINTS = 2001
QUTRIT_KEYS = ("alpha_i", "chi1_i", "chi2_i", "alpha_f", "chi1_f", "chi2_f")

# the five phase sets of the general-phase sigma_x maps
PHASE_SETS = (
    (0.0, 0.0),
    (np.pi / 5, 0.0),
    (4 * np.pi / 5, 0.0),
    (4 * np.pi / 5, np.pi / 5),
    (4 * np.pi / 5, 3 * np.pi / 5),
)


def _check_axis(name: str, axis: Tuple[float, float, int], lo: float, hi: float) -> Tuple[float, float, int]:
    start, stop, steps = axis
    if int(steps) != steps or steps < 2:
        raise DomainError(f"{name} needs at least 2 integer steps, got {steps}")
    for value in (start, stop):
        if value < lo - RANGE_SLACK or value > hi + RANGE_SLACK:
            raise DomainError(f"{name} bound {value} outside [{lo}, {hi}]")
    return float(start), float(stop), int(steps)


@dataclass
class GridSpec:
    observable: Observable
    theta_i_range: Tuple[float, float, int] = (0.0, HALF_PI, DEFAULT_STATE_STEPS)
    theta_f_range: Tuple[float, float, int] = (0.0, HALF_PI, DEFAULT_STATE_STEPS)
    fixed_phases: Tuple[float, float] = (0.0, 0.0)
    extra_params: Dict[str, float] = field(default_factory=dict)
    sweep_id: str = "state-grid"

    def __post_init__(self):
        self.theta_i_range = _check_axis("theta_i", self.theta_i_range, 0.0, HALF_PI)
        self.theta_f_range = _check_axis("theta_f", self.theta_f_range, 0.0, HALF_PI)
        for name, value in zip(("xi_i", "xi_f"), self.fixed_phases):
            if value < -RANGE_SLACK or value > TWO_PI + RANGE_SLACK:
                raise DomainError(f"{name}={value} outside [0, 2pi]")
        if self.observable.dim not in (2, 3):
            raise DomainError(f"State grids exist for dim 2 and 3, got {self.observable.dim}")
        unknown = set(self.extra_params) - set(QUTRIT_KEYS)
        if unknown:
            raise DomainError(f"Unknown extra parameters {sorted(unknown)}")
        for name in ("alpha_i", "alpha_f"):
            if not 0.0 - RANGE_SLACK <= self.extra_params.get(name, 0.0) <= HALF_PI + RANGE_SLACK:
                raise DomainError(f"{name} outside [0, pi/2]")

    def theta_i_axis(self) -> np.ndarray:
        return np.linspace(*self.theta_i_range)

    def theta_f_axis(self) -> np.ndarray:
        return np.linspace(*self.theta_f_range)

    def to_dict(self) -> Dict:
        return {
            "kind": "state-grid",
            "observable": self.observable.name,
            "matrix": [[[z.real, z.imag] for z in row] for row in self.observable.matrix],
            "theta_i_range": list(self.theta_i_range),
            "theta_f_range": list(self.theta_f_range),
            "fixed_phases": list(self.fixed_phases),
            "extra_params": dict(sorted(self.extra_params.items())),
        }


def parametrized_states(theta: np.ndarray, xi: float, dim: int, alpha: float = 0.0, chi1: float = 0.0, chi2: float = 0.0):
    """Stack of qubit or qutrit states, one row per theta."""
    theta = np.asarray(theta, dtype=float)
    if dim == 2:
        return np.stack([np.cos(theta) + 0j, np.exp(1j * xi) * np.sin(theta)], axis=-1)
    s = np.sin(theta)
    return np.stack(
        [np.cos(theta) + 0j, np.exp(1j * chi1) * np.cos(alpha) * s, np.exp(1j * chi2) * np.sin(alpha) * s],
        axis=-1,
    )


def classification_codes(value: np.ndarray, lambda_min: float, lambda_max: float, tol: float) -> np.ndarray:
    """Vectorised class-code bitmask, same tags as the single-point classifier."""
    code = np.zeros(value.shape, dtype=np.int64)
    code |= np.where(np.abs(value.imag) > tol, CLASS_BITS[TAG_COMPLEX], 0)
    code |= np.where((value.real < lambda_min - tol) | (value.real > lambda_max + tol), CLASS_BITS[TAG_OUTSIDE], 0)
    code |= np.where(np.abs(value) > max(abs(lambda_min), abs(lambda_max)) + tol, CLASS_BITS[TAG_AMPLIFYING], 0)
    return code


def point_fields(o: Observable, psi_i: np.ndarray, psi_f: np.ndarray, floor: float, tol: float) -> Dict[str, np.ndarray]:
    """All per-point table fields for broadcast-compatible state stacks."""
    wq = weak_values_batch(o.matrix, psi_i, psi_f)
    mi = structural_moments_batch(o.matrix, psi_i)
    mf = structural_moments_batch(o.matrix, psi_f)
    ov_sq = wq["overlap_sq"]
    shape = ov_sq.shape
    gap = ov_sq < floor
    value = wq["value"]
    dfn_a = np.broadcast_to(np.sqrt(mi["variance"]), shape)
    dfn_aprime = np.broadcast_to(np.sqrt(mf["variance"]), shape)
    max_abs = o.max_abs_eigenvalue

    with np.errstate(divide="ignore", invalid="ignore"):
        fields = {
            "wv_abs": np.abs(value),
            "wv_re": value.real.copy(),
            "wv_im": value.imag.copy(),
            "df_A": dfn_a / ov_sq,
            "df_Aprime": dfn_aprime / ov_sq,
            "dfn_A": dfn_a.copy(),
            "dfn_Aprime": dfn_aprime.copy(),
            "numerator": np.abs(wq["numerator"]),
            "alpha2_A": np.broadcast_to(np.abs(mi["mean"]), shape) / ov_sq,
            "alpha2_Aprime": np.broadcast_to(np.abs(mf["mean"]), shape) / ov_sq,
            "overlap_sq": ov_sq.copy(),
        }
    for values in fields.values():
        values[gap] = np.nan
    codes = classification_codes(value, o.lambda_min, o.lambda_max, tol)
    codes[gap] = CLASS_GAP
    fields["class_code"] = codes
    fields["amp_1"] = np.where(gap, 0, fields["wv_abs"] > max_abs + tol).astype(np.int64)
    fields["amp_1001"] = np.where(gap, 0, fields["wv_abs"] > CAUTION_LEVEL * max_abs).astype(np.int64)
    fields["gap_reason"] = np.where(gap, GAP_NEAR_ORTHOGONAL, GAP_NONE).astype(np.int64)
    return fields


def _chunks(n: int, parts: int) -> List[Tuple[int, int]]:
    bounds = np.linspace(0, n, min(parts, n) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]


@performance_monitor
def state_grid_sweep(g: GridSpec) -> SweepTable:
    o = g.observable
    theta_i = g.theta_i_axis()
    theta_f = g.theta_f_axis()
    xi_i, xi_f = g.fixed_phases
    extra = g.extra_params
    psi_i = parametrized_states(
        theta_i, xi_i, o.dim, extra.get("alpha_i", 0.0), extra.get("chi1_i", 0.0), extra.get("chi2_i", 0.0)
    )
    psi_f = parametrized_states(
        theta_f, xi_f, o.dim, extra.get("alpha_f", 0.0), extra.get("chi1_f", 0.0), extra.get("chi2_f", 0.0)
    )
    floor = settings.overlap_floor
    tol = settings.classify_tol

    def evaluate(bounds):
        a, b = bounds
        return point_fields(o, psi_i[a:b, None, :], psi_f[None, :, :], floor, tol)

    chunks = _chunks(len(theta_i), settings.threads)
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        parts = list(executor.map(evaluate, chunks))

    table = SweepTable(g.sweep_id, o.name, {"theta_i": theta_i, "theta_f": theta_f})
    for name in parts[0]:
        table.add_field(name, np.concatenate([p[name] for p in parts], axis=0))

    gaps = int(np.sum(table.field("gap_reason") != GAP_NONE))
    amplifying = int(np.sum(table.field("amp_1")))
    table.meta.update(
        {
            "spec": g.to_dict(),
            "gap_count": gaps,
            "amplifying_count": amplifying,
            "spectrum": list(o.spectrum),
            "overlap_floor": floor,
            "classify_tol": tol,
        }
    )
    logger.info(f"{g.sweep_id}: {table.shape[0]}x{table.shape[1]} points, {amplifying} amplifying, {gaps} gaps")
    if gaps:
        logger.warning(f"{g.sweep_id}: {gaps} points below the overlap floor {floor:.1e} marked as gaps")
    return table


# observable family sweeps: O(theta) = sin(theta)(cos(phi) X + sin(phi) Y) + cos(theta) Z


def bloch_matrices(theta, phi: float) -> np.ndarray:
    """Stack of Bloch observables, one 2x2 matrix per theta."""
    t = np.asarray(theta, dtype=float)[..., None, None]
    return (
        np.sin(t) * np.cos(phi) * PAULI["x"]
        + np.sin(t) * np.sin(phi) * PAULI["y"]
        + np.cos(t) * PAULI["z"]
    )


def _real_qubit(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128)


def _family_wv_abs(theta, theta_i: float, phi: float, theta_f: float):
    wq = weak_values_batch(bloch_matrices(theta, phi), _real_qubit(theta_i), _real_qubit(theta_f))
    return np.abs(wq["value"])


def amplification_window(
    theta_i: float,
    phi: float,
    theta_f: float = 0.0,
    bounds: Tuple[float, float] = (0.0, HALF_PI),
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> Tuple[float, float]:
    """Interval of theta around the largest |O_w| on which |O_w| >= 1.

    :raises NotFoundError: when |O_w| stays below 1 on ``bounds``
    """

    def excess(theta):
        return float(_family_wv_abs(np.array(theta), theta_i, phi, theta_f)) - 1.0

    grid = np.linspace(bounds[0], bounds[1], scan_points)
    values = _family_wv_abs(grid, theta_i, phi, theta_f) - 1.0
    inside = values >= -WINDOW_SLACK
    if not inside.any():
        raise NotFoundError(f"No amplification for theta_i={theta_i}, phi={phi}, theta_f={theta_f}")
    peak = int(np.nanargmax(values))
    start = peak
    while start > 0 and inside[start - 1]:
        start -= 1
    stop = peak
    while stop < scan_points - 1 and inside[stop + 1]:
        stop += 1

    lo = float(grid[0]) if start == 0 else brentq(excess, grid[start - 1], grid[start], xtol=ROOT_XTOL)
    hi = float(grid[-1]) if stop == scan_points - 1 else brentq(excess, grid[stop], grid[stop + 1], xtol=ROOT_XTOL)
    logger.debug(f"Amplification window for theta_i={theta_i:.6g}: [{lo:.12g}, {hi:.12g}]")
    return float(lo), float(hi)


def _check_postselection(theta_i_values: Sequence[float], theta_f: float):
    floor = settings.overlap_floor
    for theta_i in theta_i_values:
        overlap_sq = np.cos(theta_i - theta_f) ** 2
        if overlap_sq < floor:
            raise NearOrthogonalPostselectionError(float(overlap_sq), floor)


def _observable_row(theta: np.ndarray, theta_i: float, phi: float, theta_f: float) -> Dict[str, np.ndarray]:
    matrices = bloch_matrices(theta, phi)
    psi_i = _real_qubit(theta_i)
    psi_f = _real_qubit(theta_f)
    wq = weak_values_batch(matrices, psi_i, psi_f)
    mi = structural_moments_batch(matrices, psi_i)
    mf = structural_moments_batch(matrices, psi_f)
    ov_sq = float(wq["overlap_sq"])
    dfn_a = np.sqrt(mi["variance"])
    dfn_aprime = np.sqrt(mf["variance"])
    numerator = np.abs(wq["numerator"])
    # the denominator-free quantities stay defined at orthogonal selection
    gap = ov_sq < settings.overlap_floor
    scale = np.nan if gap else 1.0 / ov_sq
    wv_abs = np.full_like(theta, np.nan) if gap else np.abs(wq["value"])
    return {
        "theta": theta,
        "wv_abs": wv_abs,
        "numerator": numerator,
        "dfn_A": dfn_a,
        "dfn_Aprime": dfn_aprime,
        "d_numerator": np.gradient(numerator, theta, edge_order=2),
        "d_dfn_A": np.gradient(dfn_a, theta, edge_order=2),
        "d_dfn_Aprime": np.gradient(dfn_aprime, theta, edge_order=2),
        "alpha_A": mi["mean"] * scale,
        "alpha_Aprime": mf["mean"] * scale,
        "alpha2_A": np.abs(mi["mean"]) * scale,
        "alpha2_Aprime": np.abs(mf["mean"]) * scale,
        "eigvec_angle_A": eigvec_angle_batch(matrices, psi_i),
        "eigvec_angle_Aprime": eigvec_angle_batch(matrices, psi_f),
        "in_window": np.zeros(theta.shape, dtype=np.int64) if gap else (wv_abs >= 1.0 - WINDOW_SLACK).astype(np.int64),
        "gap_reason": np.full(theta.shape, GAP_NEAR_ORTHOGONAL if gap else GAP_NONE, dtype=np.int64),
    }


@performance_monitor
def observable_sweep(
    theta_i_values: Sequence[float],
    phi: float,
    theta_f: float = 0.0,
    theta_range: Optional[Tuple[float, float]] = None,
    steps: int = DEFAULT_THETA_STEPS,
    sweep_id: str = "observable",
) -> SweepTable:
    """One row of ``steps`` theta samples per theta_i.

    Without ``theta_range`` every row spans its own amplification window,
    so the theta values live in the ``theta`` field, not on an axis.
    With an explicit range a theta_i orthogonal to theta_f is kept: its row
    has the numerator and both departures, and gaps where a value divides
    by the overlap.
    """
    if steps < 3:
        raise DomainError(f"Observable sweeps need at least 3 steps, got {steps}")
    theta_i_values = [float(v) for v in theta_i_values]
    if theta_range is None:
        _check_postselection(theta_i_values, theta_f)

    rows = []
    windows = []
    for theta_i in theta_i_values:
        lo, hi = theta_range if theta_range is not None else amplification_window(theta_i, phi, theta_f)
        windows.append([lo, hi])
        rows.append(_observable_row(np.linspace(lo, hi, steps), theta_i, phi, theta_f))

    table = SweepTable(
        sweep_id,
        f"bloch-phi-{phi:.6g}",
        {"theta_i": theta_i_values, "point": np.arange(steps, dtype=float)},
    )
    for name in rows[0]:
        table.add_field(name, np.stack([r[name] for r in rows]))
    table.meta.update(
        {
            "spec": {
                "kind": "observable",
                "theta_i_values": theta_i_values,
                "phi": phi,
                "theta_f": theta_f,
                "theta_range": list(theta_range) if theta_range is not None else None,
                "steps": steps,
            },
            "windows": windows,
        }
    )
    logger.info(f"{sweep_id}: {len(theta_i_values)} curves of {steps} points at phi={phi:.6g}")
    return table


@performance_monitor
def eigen_sweep(
    theta_i_values: Sequence[float],
    phi: float,
    theta_f: float = 0.0,
    theta_range: Tuple[float, float] = (0.0, HALF_PI),
    steps: int = DEFAULT_THETA_STEPS,
    sweep_id: str = "eigen",
) -> SweepTable:
    """Nonzero eigenvalues and eigenvector angles of both weak operators on a shared theta axis."""
    _check_postselection(theta_i_values, theta_f)
    theta = np.linspace(theta_range[0], theta_range[1], steps)
    rows = [_observable_row(theta, float(t), phi, theta_f) for t in theta_i_values]
    table = SweepTable(sweep_id, f"bloch-phi-{phi:.6g}", {"theta_i": list(theta_i_values), "theta": theta})
    for name in ("alpha_A", "alpha_Aprime", "eigvec_angle_A", "eigvec_angle_Aprime", "wv_abs"):
        table.add_field(name, np.stack([r[name] for r in rows]))
    table.meta["spec"] = {
        "kind": "eigen",
        "theta_i_values": [float(t) for t in theta_i_values],
        "phi": phi,
        "theta_f": theta_f,
        "theta_range": list(theta_range),
        "steps": steps,
    }
    return table


def _family_alpha(theta, theta_i: float, phi: float, theta_f: float, variant: str):
    psi = _real_qubit(theta_i if variant == "A" else theta_f)
    return structural_moments_batch(bloch_matrices(theta, phi), psi)["mean"]


def locate_degeneracy(
    theta_i: float,
    phi: float,
    variant: str = "A",
    theta_f: float = 0.0,
    theta_range: Tuple[float, float] = (0.0, HALF_PI),
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> Tuple[float, float]:
    """First theta in range where the weak operator turns nilpotent.

    Scans the sign of <psi|O(theta)|psi> (psi_i for ``A``, psi_f for
    ``A-prime``), then refines with brentq.

    :return: (theta_star, eigenvector Fubini angle at theta_star)
    :raises NotFoundError: without a zero in range
    """

    def alpha(theta):
        return float(_family_alpha(np.array(theta), theta_i, phi, theta_f, variant))

    grid = np.linspace(theta_range[0], theta_range[1], scan_points)
    values = _family_alpha(grid, theta_i, phi, theta_f, variant)
    theta_star = None
    for k in range(scan_points):
        if abs(values[k]) <= ZERO_TOUCH:
            theta_star = float(grid[k])
            break
        if k + 1 < scan_points and np.sign(values[k]) != np.sign(values[k + 1]) and abs(values[k + 1]) > ZERO_TOUCH:
            theta_star = float(brentq(alpha, grid[k], grid[k + 1], xtol=ROOT_XTOL))
            break
    if theta_star is None:
        raise NotFoundError(
            f"Variant {variant} has no nilpotent point for theta_i={theta_i}, phi={phi} in {theta_range}"
        )

    o = observable_from_matrix(bloch_matrix(theta_star, phi), name="bloch")
    w = build_weak_operator(o, _real_qubit(theta_i), _real_qubit(theta_f), variant)
    report = eigenstructure(w)
    logger.debug(f"Nilpotent point of {variant} at theta={theta_star:.15g}, angle {report.eigvec_angle:.3e}")
    return theta_star, float(report.eigvec_angle)


class ExtremaReport(NamedTuple):
    argmax_wv: float
    argmax_dfn_A: float
    argmax_dfn_Aprime: float
    mean_check: float


def refined_argmax(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Grid argmax (first on ties) refined by a parabola through its neighbours."""
    k = int(np.nanargmax(y))
    if k == 0 or k == len(y) - 1:
        return float(x[k]), float(y[k])
    y0, y1, y2 = y[k - 1], y[k], y[k + 1]
    curvature = y0 - 2 * y1 + y2
    if curvature >= 0:
        return float(x[k]), float(y1)
    offset = 0.5 * (y0 - y2) / curvature
    h = x[k + 1] - x[k]
    peak = y1 - 0.25 * (y0 - y2) * offset
    return float(x[k] + offset * h), float(peak)


def extrema_report(t: SweepTable, row: int = 0) -> ExtremaReport:
    theta = t.field("theta")[row]
    argmax_wv = refined_argmax(theta, t.field("wv_abs")[row])[0]
    argmax_a = refined_argmax(theta, t.field("dfn_A")[row])[0]
    argmax_aprime = refined_argmax(theta, t.field("dfn_Aprime")[row])[0]
    return ExtremaReport(argmax_wv, argmax_a, argmax_aprime, abs(argmax_wv - (argmax_a + argmax_aprime) / 2))


def _nilpotent_or_nan(theta_i: float, phi: float, variant: str, theta_f: float, theta_range) -> float:
    try:
        return locate_degeneracy(theta_i, phi, variant, theta_f, theta_range)[0]
    except NotFoundError:
        return float("nan")


@performance_monitor
def family_sweep(
    theta_i_values: Sequence[float],
    phi: float = np.pi / 4,
    theta_f: float = 0.0,
    steps: int = DEFAULT_THETA_STEPS,
    sweep_id: str = "family",
) -> SweepTable:
    """Extremal angles and values of the observable family as functions of theta_i."""
    theta_i_values = [float(v) for v in theta_i_values]
    sweep = observable_sweep(theta_i_values, phi, theta_f, steps=steps, sweep_id=sweep_id)
    closed_form = np.isclose(phi, np.pi / 4) and theta_f == 0.0

    columns: Dict[str, List[float]] = {
        name: []
        for name in (
            "argmax_wv",
            "max_wv_abs",
            "argmax_dfn_A",
            "argmax_dfn_Aprime",
            "dfn_mean",
            "argmin_alpha2_A",
            "argmin_alpha2_Aprime",
            "nilpotent_mean",
            "nilpotent_gap",
            "min_alpha2_A",
            "min_alpha2_Aprime",
            "theta_star",
        )
    }
    for row, theta_i in enumerate(theta_i_values):
        theta = sweep.field("theta")[row]
        argmax_wv, max_wv = refined_argmax(theta, sweep.field("wv_abs")[row])
        extrema = extrema_report(sweep, row)
        window = (float(theta[0]), float(theta[-1]))
        nil_a = _nilpotent_or_nan(theta_i, phi, "A", theta_f, window)
        nil_aprime = _nilpotent_or_nan(theta_i, phi, "A-prime", theta_f, window)
        columns["argmax_wv"].append(argmax_wv)
        columns["max_wv_abs"].append(max_wv)
        columns["argmax_dfn_A"].append(extrema.argmax_dfn_A)
        columns["argmax_dfn_Aprime"].append(extrema.argmax_dfn_Aprime)
        columns["dfn_mean"].append((extrema.argmax_dfn_A + extrema.argmax_dfn_Aprime) / 2)
        columns["argmin_alpha2_A"].append(nil_a)
        columns["argmin_alpha2_Aprime"].append(nil_aprime)
        columns["nilpotent_mean"].append((nil_a + nil_aprime) / 2)
        columns["nilpotent_gap"].append(abs(nil_a - nil_aprime))
        columns["min_alpha2_A"].append(float(np.min(sweep.field("alpha2_A")[row])))
        columns["min_alpha2_Aprime"].append(float(np.min(sweep.field("alpha2_Aprime")[row])))
        columns["theta_star"].append(wvnnoracles.appc_argmax_theta(theta_i) if closed_form else float("nan"))

    table = SweepTable(sweep_id, f"bloch-phi-{phi:.6g}", {"theta_i": theta_i_values})
    for name, values in columns.items():
        table.add_field(name, np.array(values))
    table.meta["spec"] = {"kind": "family", "theta_i_values": theta_i_values, "phi": phi, "theta_f": theta_f, "steps": steps}
    return table


def _safe(func, *args) -> float:
    try:
        return float(func(*args))
    except WVNNError:
        return float("nan")


@performance_monitor
def phase_curve_sweep(
    theta_i: float, xi_i: float, xi_f: float = 0.0, steps: int = 200, sweep_id: str = "phase-curve"
) -> SweepTable:
    """sigma_x departure and weak value along theta_f in [0, theta_tilde_f].

    The tan(theta_f) columns invert d_f on both branches.
    """
    theta_tilde = wvnnoracles.sx_theta_tilde_f(theta_i, xi_i, xi_f)
    theta_f = np.linspace(0.0, theta_tilde, steps)
    d_f = wvnnoracles.sx_df_values(theta_i, theta_f, xi_i, xi_f)
    wv_sq = wvnnoracles.sx_wv_sq_values(theta_i, theta_f, xi_i, xi_f)
    columns = {"d_f": d_f, "wv_sq": wv_sq}
    for branch in ("plus", "minus"):
        tangents = np.array([_safe(wvnnoracles.sx_tan_thetaf_of_df, d, theta_i, xi_i, xi_f, branch) for d in d_f])
        columns[f"tan_{branch}"] = tangents
        columns[f"wv_sq_{branch}"] = wvnnoracles.sx_wv_sq_of_tan(tangents, theta_i, xi_i, xi_f, d_f)
    columns["tan_theta_f"] = np.tan(theta_f)

    table = SweepTable(sweep_id, "pauli-x", {"theta_f": theta_f})
    for name, values in columns.items():
        table.add_field(name, np.asarray(values, dtype=float))
    theta_hat = wvnnoracles.sx_theta_hat_f(theta_i, xi_i, xi_f)
    table.meta.update(
        {
            "spec": {"kind": "phase-curve", "theta_i": theta_i, "xi_i": xi_i, "xi_f": xi_f, "steps": steps},
            "markers": {"theta_f_zero": 0.0, "theta_hat_f": theta_hat, "theta_tilde_f": theta_tilde},
            "theta_hat_is_maximum": wvnnoracles.sx_theta_hat_is_maximum(theta_i, xi_i, xi_f),
        }
    )
    return table


class LinearFit(NamedTuple):
    slope: float
    intercept: float
    points: int


def wv_df_regression(t: SweepTable, df_field: str = "df_A") -> LinearFit:
    """Least-squares fit of wv_abs^2 against a departure field over anomalous points."""
    codes = t.field("class_code")
    mask = (codes > 0) & np.isfinite(t.field("wv_abs"))
    x = t.field(df_field)[mask]
    y = t.field("wv_abs")[mask] ** 2
    if x.size < 2:
        raise NotFoundError(f"{t.sweep_id} has fewer than 2 anomalous points")
    slope, intercept = np.polyfit(x, y, 1)
    return LinearFit(float(slope), float(intercept), int(x.size))


def summarize(t: SweepTable) -> Dict:
    """Amplifying fraction and the site of the largest |O_w| of a state grid."""
    wv = t.field("wv_abs")
    valid = np.isfinite(wv)
    summary = {"points": int(wv.size), "gaps": int(wv.size - valid.sum())}
    if "amp_1" in t.fields and valid.any():
        summary["amplifying_fraction"] = float(t.field("amp_1")[valid].mean())
    if valid.any():
        k = np.unravel_index(int(np.nanargmax(wv)), wv.shape)
        summary["max_wv_abs"] = float(wv[k])
        summary["max_site"] = {name: float(values[i]) for (name, values), i in zip(t.axes.items(), k)}
    return summary
