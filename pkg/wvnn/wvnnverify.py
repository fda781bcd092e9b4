"""Property suite behind ``wvnn verify``.

Every check compares a closed form or an identity against the generic
matrix computation on seeded random instances or on reduced figure sweeps,
and reports the worst error relative to its tolerance together with the
parameters of the worst case, so a failure can be replayed.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from wvnn import wvnnoracles, wvnnpresets, wvnnsweep
from wvnn.wvnncontour import boundary_curves
from wvnn.wvnnerrors import UsageError
from wvnn.wvnnlinalg import EPS, frobenius_norm, normality_defect
from wvnn.wvnnmeter import MeterConfig, ProtocolConfig, run_ladder, run_protocol
from wvnn.wvnnperformance_monitor import performance_monitor
from wvnn.wvnnsettings import get_log_level
from wvnn.wvnnstates import (
    HALF_PI,
    Observable,
    QubitParams,
    bloch_matrix,
    pauli,
    qubit_state,
    state_from_angles,
    uncertainty_sq,
)
from wvnn.wvnnweak import (
    VARIANTS,
    analyze,
    build_weak_operator,
    eigenstructure,
    frobenius_identity_residual,
    henrici_spectral,
    henrici_structural,
    quasi_idempotence_defect,
    resolve_closed_form_labels,
    weak_value_trace,
)

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

DEFAULT_SEED = 20240917
RANDOM_DIMS = (2, 3, 5)
MIN_RANDOM_OVERLAP_SQ = 1e-3
GAMMA_LADDER = (1e-2, 5e-3, 2.5e-3)
ARGMAX_THETA_I = (0.3, 0.5, 0.7, 0.9, 1.1)
# theta_i ladder of the fig8 and fig9 presets
LADDER_THETA_I = tuple(k * np.pi / 120 for k in range(59, 50, -1))
ORDERING_POINTS = 200
NILPOTENT_THETA_I = (0.9, 1.0, 1.1, 1.2, 1.3)
FIGURE_PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6")
SPOT_CHECKS = 100


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""
    failing_case: Optional[Dict] = None
    seconds: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "detail": self.detail,
            "failing_case": self.failing_case,
            "seconds": round(self.seconds, 3),
        }


class Worst:
    """Keeps the sample with the largest error-to-tolerance ratio."""

    def __init__(self):
        self.ratio = -np.inf
        self.error = 0.0
        self.tolerance = 0.0
        self.case: Optional[Dict] = None
        self.samples = 0

    def update(self, error: float, tolerance: float, case: Dict):
        self.samples += 1
        error = float(error)
        ratio = np.inf if np.isnan(error) else error / tolerance
        if ratio > self.ratio:
            self.ratio, self.error, self.tolerance, self.case = ratio, error, float(tolerance), case

    @property
    def passed(self) -> bool:
        return self.samples > 0 and self.ratio <= 1.0


@dataclass
class VerifyContext:
    rng: np.random.Generator
    scale: float = 1.0
    fault: Optional[str] = None

    def count(self, n: int, minimum: int = 1) -> int:
        return max(minimum, int(round(n * self.scale)))

    def finish(self, name: str, worst: Worst, detail: str = "") -> CheckResult:
        error = worst.error
        if self.fault == name:
            error = worst.tolerance + 1.0
            detail = f"{detail}; injected fault".lstrip("; ")
        passed = worst.passed and error <= worst.tolerance
        return CheckResult(name, passed, error, worst.tolerance, detail, None if passed else worst.case)


CHECKS: Dict[str, Callable[[VerifyContext], CheckResult]] = {}


def check(name: str):
    def register(func):
        CHECKS[name] = func
        return func

    return register


def random_observable(rng: np.random.Generator, dim: int) -> Observable:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable((a + a.conj().T) / (2 * np.sqrt(dim)), name=f"random-{dim}")


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_instance(rng: np.random.Generator, dim: int, min_overlap_sq: float = MIN_RANDOM_OVERLAP_SQ):
    """Observable and a pair of states; pairs below ``min_overlap_sq`` are redrawn."""
    o = random_observable(rng, dim)
    while True:
        psi_i = random_state(rng, dim)
        psi_f = random_state(rng, dim)
        if abs(np.vdot(psi_f, psi_i)) ** 2 >= min_overlap_sq:
            return o, psi_i, psi_f


def _case(o: Observable, psi_i, psi_f, **extra) -> Dict:
    case = {
        "observable": [[[z.real, z.imag] for z in row] for row in o.matrix],
        "psi_i": [[z.real, z.imag] for z in psi_i],
        "psi_f": [[z.real, z.imag] for z in psi_f],
    }
    case.update(extra)
    return case


def _sqrt_slack(numerator: float, overlap_sq: float = 1.0) -> float:
    # sqrt of a variance near zero loses digits
    return 8 * EPS / max(numerator, np.sqrt(EPS)) / overlap_sq


def _real_qubit(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128)


@check("route_equivalence")
def check_route_equivalence(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for dim in RANDOM_DIMS:
        for _ in range(ctx.count(1000)):
            o, psi_i, psi_f = random_instance(ctx.rng, dim)
            value = weak_value_trace(o, psi_i, psi_f)
            via_a = build_weak_operator(o, psi_i, psi_f, "A").expectation_in(psi_f)
            via_aprime = build_weak_operator(o, psi_i, psi_f, "A-prime").expectation_in(psi_i)
            error = max(abs(value - via_a), abs(value - via_aprime))
            worst.update(error, 1e-12 * (1 + abs(value)), _case(o, psi_i, psi_f))
    return ctx.finish("route_equivalence", worst, f"{worst.samples} instances in dims {RANDOM_DIMS}")


@check("henrici_identity")
def check_henrici_identity(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for dim in RANDOM_DIMS:
        for _ in range(ctx.count(300)):
            o, psi_i, psi_f = random_instance(ctx.rng, dim)
            for variant in VARIANTS:
                w = build_weak_operator(o, psi_i, psi_f, variant)
                spectral = henrici_spectral(w.matrix)
                structural = henrici_structural(o, w.governing_state, w.overlap_sq)
                tol = 1e-10 * max(1.0, frobenius_norm(w.matrix))
                worst.update(abs(spectral - structural), tol, _case(o, psi_i, psi_f, variant=variant))
            # psi_f = psi_i: the departure is the uncertainty itself
            spectral = henrici_spectral(build_weak_operator(o, psi_i, psi_i, "A").matrix)
            uncertainty = np.sqrt(max(uncertainty_sq(o, psi_i), 0.0))
            worst.update(abs(spectral - uncertainty), 1e-10 * max(1.0, o.max_abs_eigenvalue), _case(o, psi_i, psi_i))
    return ctx.finish("henrici_identity", worst, "spectral against structural route, both variants")


@check("normality_theorem")
def check_normality_theorem(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    n = ctx.count(200)
    for k in range(n):
        dim = RANDOM_DIMS[k % len(RANDOM_DIMS)]
        o = random_observable(ctx.rng, dim)
        lam, vectors = np.linalg.eigh(o.matrix)
        j = int(ctx.rng.integers(dim))
        psi_i = vectors[:, j] / np.linalg.norm(vectors[:, j])
        psi_f = random_state(ctx.rng, dim)
        while abs(np.vdot(psi_f, psi_i)) ** 2 < 0.1:
            psi_f = random_state(ctx.rng, dim)
        w = build_weak_operator(o, psi_i, psi_f, "A")
        norm = frobenius_norm(w.matrix)
        case = _case(o, psi_i, psi_f, eigenvalue=float(lam[j]))
        worst.update(normality_defect(w.matrix), 1e-12 * max(1.0, norm**2), case)
        worst.update(abs(weak_value_trace(o, psi_i, psi_f) - lam[j]), 1e-10, case)

    for k in range(n):
        dim = RANDOM_DIMS[k % len(RANDOM_DIMS)]
        o, psi_i, psi_f = random_instance(ctx.rng, dim)
        w = build_weak_operator(o, psi_i, psi_f, "A")
        expected = henrici_structural(o, psi_i, w.overlap_sq)
        shortfall = max(0.0, expected - henrici_spectral(w.matrix))
        case = _case(o, psi_i, psi_f)
        worst.update(shortfall, 1e-10 * max(1.0, frobenius_norm(w.matrix)), case)
        # a non-eigenvector pre-selection leaves a non-normal operator
        worst.update(0.0 if expected > 0 else 1.0, 0.5, case)
    return ctx.finish("normality_theorem", worst, f"{n} eigenvector and {n} generic pre-selections")


@check("rank_one_structure")
def check_rank_one_structure(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for dim in RANDOM_DIMS:
        for _ in range(ctx.count(100)):
            o, psi_i, psi_f = random_instance(ctx.rng, dim)
            for variant in VARIANTS:
                w = build_weak_operator(o, psi_i, psi_f, variant)
                norm = frobenius_norm(w.matrix)
                case = _case(o, psi_i, psi_f, variant=variant)
                worst.update(frobenius_identity_residual(w), 1e-12 * max(1.0, norm**2), case)
                worst.update(eigenstructure(w).solver_deviation, 1e-10 * max(1.0, norm), case)
    return ctx.finish("rank_one_structure", worst, "Frobenius identity and {trace, 0, ...} spectrum")


@check("quasi_idempotence")
def check_quasi_idempotence(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for dim in RANDOM_DIMS:
        for _ in range(ctx.count(300)):
            o, psi_i, psi_f = random_instance(ctx.rng, dim)
            for variant in VARIANTS:
                w = build_weak_operator(o, psi_i, psi_f, variant)
                norm = frobenius_norm(w.matrix)
                worst.update(
                    quasi_idempotence_defect(w), 1e-12 * max(1.0, norm**2), _case(o, psi_i, psi_f, variant=variant)
                )
    return ctx.finish("quasi_idempotence", worst, "||W^2 - tr(W) W||_F")


@check("sigma_x_closed_forms")
def check_sigma_x_closed_forms(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    sx = pauli("x")
    axis = np.linspace(0.0, HALF_PI, 100)
    for theta_i in axis:
        for theta_f in axis:
            psi_i, psi_f = _real_qubit(theta_i), _real_qubit(theta_f)
            ov_sq = abs(np.vdot(psi_f, psi_i)) ** 2
            if ov_sq < 1e-4:
                continue
            case = {"theta_i": float(theta_i), "theta_f": float(theta_f)}
            df = float(wvnnoracles.sx_df_reduced(theta_i, theta_f))
            slack = _sqrt_slack(abs(np.cos(2 * theta_i)), ov_sq)
            worst.update(abs(henrici_structural(sx, psi_i, ov_sq) - df), 1e-12 * max(1.0, df) + slack, case)
            wv_sq = float(wvnnoracles.sx_wv_sq_reduced(theta_i, theta_f))
            worst.update(abs(abs(weak_value_trace(sx, psi_i, psi_f)) ** 2 - wv_sq), 1e-12 * max(1.0, wv_sq), case)

    for _ in range(ctx.count(10000)):
        theta_i, theta_f = ctx.rng.uniform(0.0, HALF_PI, size=2)
        xi_i, xi_f = ctx.rng.uniform(0.0, 2 * np.pi, size=2)
        s = wvnnoracles.QubitScenario(theta_i, theta_f, xi_i, xi_f)
        ov_sq = s.overlap_sq()
        if ov_sq < 1e-4:
            continue
        psi_i = qubit_state(QubitParams(theta_i, xi_i))
        psi_f = qubit_state(QubitParams(theta_f, xi_f))
        case = {"theta_i": theta_i, "theta_f": theta_f, "xi_i": xi_i, "xi_f": xi_f}
        df = wvnnoracles.sx_df(s)
        numerator = np.sqrt(max(uncertainty_sq(sx, psi_i), 0.0))
        worst.update(
            abs(henrici_structural(sx, psi_i, ov_sq) - df), 1e-10 * max(1.0, df) + _sqrt_slack(numerator, ov_sq), case
        )
        wv_sq = wvnnoracles.sx_wv_sq(s)
        worst.update(abs(abs(weak_value_trace(sx, psi_i, psi_f)) ** 2 - wv_sq), 1e-10 * max(1.0, wv_sq), case)
        worst.update(abs(ov_sq - abs(np.vdot(psi_f, psi_i)) ** 2), 1e-12, case)
    return ctx.finish("sigma_x_closed_forms", worst, "null-phase grid and general phases")


@check("sigma_y_identity")
def check_sigma_y_identity(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    sy = pauli("y")
    for _ in range(ctx.count(10000)):
        theta_i, theta_f = ctx.rng.uniform(0.0, HALF_PI, size=2)
        if np.cos(theta_f - theta_i) ** 2 < 1e-4:
            continue
        psi_i, psi_f = _real_qubit(theta_i), _real_qubit(theta_f)
        ov_sq = abs(np.vdot(psi_f, psi_i)) ** 2
        wv = weak_value_trace(sy, psi_i, psi_f)
        df = henrici_structural(sy, psi_i, ov_sq)
        case = {"theta_i": theta_i, "theta_f": theta_f}
        worst.update(abs(abs(wv) ** 2 - (df - 1)), 1e-12 * max(1.0, df), case)
        closed_wv, closed_df = wvnnoracles.sy_relations(theta_i, theta_f)
        worst.update(abs(wv - closed_wv), 1e-10 * max(1.0, abs(wv)), case)
        worst.update(abs(df - closed_df), 1e-10 * max(1.0, df), case)
    return ctx.finish("sigma_y_identity", worst, "|sigma_y,w|^2 = d_f - 1")


@check("sigma_z_no_amplification")
def check_sigma_z_no_amplification(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    steps = max(50, int(400 * np.sqrt(ctx.scale)))
    grid = wvnnsweep.GridSpec(pauli("z"), (0.0, HALF_PI, steps), (0.0, HALF_PI, steps), sweep_id="verify-sigma-z")
    t = wvnnsweep.state_grid_sweep(grid)
    wv = t.field("wv_abs")
    k = np.unravel_index(int(np.nanargmax(wv)), wv.shape)
    site = {"theta_i": float(t.axis("theta_i")[k[0]]), "theta_f": float(t.axis("theta_f")[k[1]])}
    worst.update(max(0.0, float(wv[k]) - 1.0), 1e-9, site)

    sz = pauli("z")
    for _ in range(ctx.count(2000)):
        theta_i, theta_f = ctx.rng.uniform(0.0, HALF_PI, size=2)
        if np.cos(theta_f - theta_i) ** 2 < 1e-4:
            continue
        psi_i, psi_f = _real_qubit(theta_i), _real_qubit(theta_f)
        ov_sq = abs(np.vdot(psi_f, psi_i)) ** 2
        wv_abs, df = wvnnoracles.sz_relations(theta_i, theta_f)
        case = {"theta_i": theta_i, "theta_f": theta_f}
        worst.update(abs(abs(weak_value_trace(sz, psi_i, psi_f)) - wv_abs), 1e-10 * max(1.0, wv_abs), case)
        numerator = np.sqrt(max(uncertainty_sq(sz, psi_i), 0.0))
        worst.update(
            abs(henrici_structural(sz, psi_i, ov_sq) - df), 1e-10 * max(1.0, df) + _sqrt_slack(numerator, ov_sq), case
        )
    return ctx.finish("sigma_z_no_amplification", worst, f"{steps}x{steps} grid, max |O_w| = {float(wv[k]):.12g}")


@check("phase_oracles")
def check_phase_oracles(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for xi_i in (0.0, np.pi / 5, 4 * np.pi / 5):
        for theta_i in (np.pi / 12, np.pi / 6, 5 * np.pi / 12):
            case = {"theta_i": theta_i, "xi_i": xi_i, "xi_f": 0.0}
            tilde = wvnnoracles.sx_theta_tilde_f(theta_i, xi_i, 0.0)
            at_tilde = float(wvnnoracles.sx_wv_sq_values(theta_i, tilde, xi_i, 0.0))
            worst.update(abs(at_tilde - 1.0), 1e-9, dict(case, theta_tilde_f=tilde))
            for theta_f in np.linspace(0.0, tilde, 25):
                d_f = float(wvnnoracles.sx_df_values(theta_i, theta_f, xi_i, 0.0))
                tangent = wvnnoracles.sx_tan_thetaf_of_df(d_f, theta_i, xi_i, 0.0, "plus")
                back = float(wvnnoracles.sx_df_values(theta_i, np.arctan(tangent), xi_i, 0.0))
                worst.update(abs(back - d_f), 1e-9 * max(1.0, d_f), dict(case, theta_f=float(theta_f)))
    return ctx.finish("phase_oracles", worst, "theta~_f and the tan(theta_f) round trip")


@check("argmax_at_average")
def check_argmax_at_average(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    for theta_i in ARGMAX_THETA_I:
        t = wvnnsweep.observable_sweep([theta_i], np.pi / 4, 0.0, steps=2000, sweep_id="verify-argmax")
        extrema = wvnnsweep.extrema_report(t, 0)
        closed = wvnnoracles.appc_argmax_theta(theta_i)
        case = {"theta_i": theta_i, **extrema._asdict(), "theta_star": closed}
        worst.update(extrema.mean_check, 1e-4, case)
        worst.update(abs(extrema.argmax_wv - closed), 1e-5, case)
    return ctx.finish("argmax_at_average", worst, f"theta_i in {ARGMAX_THETA_I}, 2000-point grids")


@check("derivative_closed_forms")
def check_derivative_closed_forms(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    skipped = 0
    for _ in range(ctx.count(1000)):
        theta, theta_i, theta_f = ctx.rng.uniform(0.05, HALF_PI - 0.05, size=3)
        phi = ctx.rng.uniform(0.0, 2 * np.pi)
        values = wvnnoracles.appd_values_and_derivatives(theta, theta_i, theta_f, phi)
        case = {"theta": theta, "theta_i": theta_i, "theta_f": theta_f, "phi": phi}

        o = Observable(bloch_matrix(theta, phi))
        numerator = abs(np.vdot(_real_qubit(theta_f), o.matrix @ _real_qubit(theta_i)))
        worst.update(abs(values.numerator - numerator), 1e-10, case)

        if min(values.numerator, values.dfn_1, values.dfn_2) < 1e-2:
            # finite differences are meaningless next to a square-root cusp
            skipped += 1
            continue
        for index, name in enumerate(("numerator", "dfn_1", "dfn_2")):
            fd = wvnnoracles.central_difference(
                lambda x: wvnnoracles.appd_values(x, theta_i, theta_f, phi)[index], theta
            )
            derivative = values[3 + index]
            worst.update(abs(fd - derivative), 1e-6 * max(1.0, abs(derivative)), dict(case, quantity=name))

    labels = resolve_closed_form_labels(samples=ctx.count(200), rng=ctx.rng)
    mapping = ", ".join(f"{k} -> {v}" for k, v in sorted(labels.mapping["derivatives"].items()))
    return ctx.finish("derivative_closed_forms", worst, f"labels {mapping}; {skipped} points near a cusp skipped")


def derivative_ordering_excess(theta_i: float, phi: float, points: int = ORDERING_POINTS) -> np.ndarray:
    """How far d|numerator|/dtheta leaves the band of the two dfn derivatives.

    Sampled on the interior of the amplification window with theta_f = 0,
    zero wherever the ordering holds.
    """
    lo, hi = wvnnsweep.amplification_window(theta_i, phi, 0.0)
    theta = np.linspace(lo, hi, points)[1:-1]
    values = wvnnoracles.appd_values(theta, theta_i, 0.0, phi)
    lower = np.minimum(values.d_dfn_1, values.d_dfn_2)
    upper = np.maximum(values.d_dfn_1, values.d_dfn_2)
    return np.maximum.reduce([lower - values.d_numerator, values.d_numerator - upper, np.zeros_like(theta)])


@check("derivative_ordering")
def check_derivative_ordering(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    phi = np.pi / 12
    for theta_i in LADDER_THETA_I:
        excess = derivative_ordering_excess(theta_i, phi)
        k = int(np.argmax(excess))
        worst.update(excess[k], 1e-12, {"theta_i": theta_i, "phi": phi, "point": k})
    return ctx.finish("derivative_ordering", worst, f"phi = pi/12, {len(LADDER_THETA_I)} theta_i values")


@check("label_resolution")
def check_label_resolution(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    labels = resolve_closed_form_labels(samples=ctx.count(200), rng=ctx.rng)
    for group, chosen in labels.mapping.items():
        for name, variant in chosen.items():
            worst.update(labels.deviations[group][name][variant], 1e-10, {"group": group, "label": name})
    parts = [f"{k} -> {v}" for chosen in labels.mapping.values() for k, v in sorted(chosen.items())]
    return ctx.finish("label_resolution", worst, "; ".join(parts))


def _amplifying_sigma_x_theta_f(theta_i: float, target: float) -> float:
    return brentq(
        lambda t: float(wvnnoracles.sx_wv_sq_reduced(theta_i, t)) - target**2, np.pi / 4, HALF_PI - 1e-6, xtol=1e-14
    )


@check("meter_shift")
def check_meter_shift(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    meter = MeterConfig()
    theta_f_amp = _amplifying_sigma_x_theta_f(0.05, 5.0)
    theta_f_far = _amplifying_sigma_x_theta_f(0.05, 10.0)
    scenarios = (
        ("sigma_y", pauli("y"), 0.3, 0.5),
        ("sigma_x amplifying", pauli("x"), 0.05, theta_f_amp),
        ("sigma_x near-orthogonal", pauli("x"), 0.05, theta_f_far),
    )
    for label, o, theta_i, theta_f in scenarios:
        psi_i, psi_f = _real_qubit(theta_i), _real_qubit(theta_f)
        reference = weak_value_trace(o, psi_i, psi_f)
        c = ProtocolConfig(o, psi_i, psi_f, GAMMA_LADDER[0], meter)
        run = run_ladder(c, GAMMA_LADDER)
        case = {"scenario": label, "theta_i": theta_i, "theta_f": theta_f, "weak_value": [reference.real, reference.imag]}
        worst.update(abs(run.estimate.re_est - reference.real), 1e-4, dict(case, channel="re"))
        worst.update(abs(run.estimate.im_est - reference.imag), 1e-4, dict(case, channel="im"))
        for r in run.results:
            worst.update(abs(r.joint_norm - 1.0), 1e-12, dict(case, gamma=r.gamma, channel="norm"))

    sz = pauli("z")
    up = np.array([1.0, 0.0], dtype=np.complex128)
    gamma = GAMMA_LADDER[0]
    result = run_protocol(ProtocolConfig(sz, up, up, gamma, meter))
    case = {"scenario": "eigenvector", "gamma": gamma}
    worst.update(abs(result.mean_x - gamma), 1e-10, case)
    worst.update(abs(result.success_prob - 1.0), 1e-10, case)
    detail = f"ladder {GAMMA_LADDER}, |sigma_x,w| = 5 and 10 at theta_f = {theta_f_amp:.6g}, {theta_f_far:.6g}"
    return ctx.finish("meter_shift", worst, detail)


@check("nilpotency")
def check_nilpotency(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    phi = np.pi / 4
    for theta_i in NILPOTENT_THETA_I:
        expected_aprime, expected_a = wvnnoracles.appc_nilpotent_angles(theta_i)
        for variant, expected in (("A-prime", expected_aprime), ("A", expected_a)):
            theta_star, angle = wvnnsweep.locate_degeneracy(theta_i, phi, variant)
            case = {"theta_i": theta_i, "variant": variant, "theta_star": theta_star, "expected": expected}
            worst.update(abs(theta_star - expected), 1e-10, case)
            worst.update(angle, 1e-6, dict(case, quantity="eigvec_angle"))
            o = Observable(bloch_matrix(theta_star, phi))
            w = build_weak_operator(o, _real_qubit(theta_i), _real_qubit(0.0), variant)
            report = eigenstructure(w)
            worst.update(max(abs(z) for z in report.eigenvalues), 1e-10, dict(case, quantity="eigenvalues"))
    return ctx.finish("nilpotency", worst, f"theta_i in {NILPOTENT_THETA_I}")


def _spot_check(t, g: wvnnsweep.GridSpec, rng: np.random.Generator, worst: Worst):
    o = g.observable
    theta_i_axis, theta_f_axis = t.axis("theta_i"), t.axis("theta_f")
    xi_i, xi_f = g.fixed_phases
    extra = g.extra_params
    extra_i = {k[:-2]: v for k, v in extra.items() if k.endswith("_i")}
    extra_f = {k[:-2]: v for k, v in extra.items() if k.endswith("_f")}
    for _ in range(SPOT_CHECKS):
        i = int(rng.integers(1, len(theta_i_axis) - 1))
        j = int(rng.integers(1, len(theta_f_axis) - 1))
        if t.field("gap_reason")[i, j]:
            continue
        psi_i = state_from_angles(theta_i_axis[i], xi_i, extra_i, o.dim)
        psi_f = state_from_angles(theta_f_axis[j], xi_f, extra_f, o.dim)
        report = analyze(o, psi_i, psi_f)
        case = {"sweep": t.sweep_id, "theta_i": float(theta_i_axis[i]), "theta_f": float(theta_f_axis[j])}
        for name, single in (
            ("wv_re", report.value.real),
            ("wv_im", report.value.imag),
            ("alpha2_A", report.alpha2_A),
            ("alpha2_Aprime", report.alpha2_Aprime),
            ("overlap_sq", report.overlap_sq),
        ):
            worst.update(abs(t.field(name)[i, j] - single), 1e-12 * max(1.0, abs(single)), dict(case, field=name))
        for name, single, psi in (("df_A", report.henrici_A, psi_i), ("df_Aprime", report.henrici_Aprime, psi_f)):
            numerator = single * report.overlap_sq
            tol = 1e-12 * max(1.0, single) + _sqrt_slack(numerator, report.overlap_sq)
            worst.update(abs(t.field(name)[i, j] - single), tol, dict(case, field=name))


@check("figure_regeneration")
def check_figure_regeneration(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    steps = max(40, int(120 * np.sqrt(ctx.scale)))
    axis = f"0, pi/2, {steps}"
    curves = {}
    for name in FIGURE_PRESETS:
        config = wvnnpresets.RunConfig.from_preset(name).merged({"theta_i": axis, "theta_f": axis})
        g = wvnnpresets.grid_spec(config)
        t = wvnnsweep.state_grid_sweep(g)
        _spot_check(t, g, ctx.rng, worst)
        max_abs = g.observable.max_abs_eigenvalue
        curves[name] = {level: len(boundary_curves(t, level * max_abs)) for level in (1, 2)}
        if name == "fig3":
            fit = wvnnsweep.wv_df_regression(t, "df_A")
            worst.update(abs(fit.slope - 1.0), 1e-9, {"sweep": name, "fit": fit._asdict()})
            worst.update(abs(fit.intercept + 1.0), 1e-9, {"sweep": name, "fit": fit._asdict()})

    # level-1 borders exist for sigma_x and sigma_y, nothing reaches level 2 for sigma_z
    for name, level, present in (("fig2", 1, True), ("fig3", 1, True), ("fig4", 2, False)):
        ok = (curves[name][level] > 0) == present
        worst.update(0.0 if ok else 1.0, 0.5, {"sweep": name, "level": level, "curves": curves[name][level]})
    summary = ", ".join(f"{k}: {v[1]}/{v[2]}" for k, v in curves.items())
    return ctx.finish("figure_regeneration", worst, f"{steps}x{steps} grids, level 1/2 curves {summary}")


@check("divergence_trend")
def check_divergence_trend(ctx: VerifyContext) -> CheckResult:
    worst = Worst()
    theta_i = np.linspace(np.pi / 4 + 0.02, HALF_PI - 0.05, ctx.count(50, minimum=10))
    t = wvnnsweep.family_sweep(theta_i, np.pi / 4, 0.0, steps=2000, sweep_id="verify-divergence")
    gap = t.field("nilpotent_gap")
    peak = t.field("max_wv_abs")
    order = np.argsort(-gap)
    steps = np.diff(peak[order])
    k = int(np.argmin(steps))
    case = {"theta_i": float(theta_i[order][k]), "gap": float(gap[order][k]), "step": float(steps[k])}
    worst.update(0.0 if steps[k] > 0 else abs(steps[k]) + 1e-300, 1e-300, case)

    # max |O_w| per curve falls as theta_i walks down the ladder
    curves = wvnnsweep.observable_sweep(list(LADDER_THETA_I), np.pi / 12, 0.0, steps=2000, sweep_id="verify-ladder")
    maxima = np.max(curves.field("wv_abs"), axis=1)
    rises = np.diff(maxima)
    worst.update(max(0.0, float(rises.max())), 1e-12, {"maxima": maxima.tolist()})
    return ctx.finish("divergence_trend", worst, f"{len(theta_i)} theta_i values, smallest step {steps[k]:.3e}")


@dataclass
class VerifyReport:
    seed: int
    scale: float
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "scale": self.scale,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }

    def to_text(self) -> str:
        lines = [f"wvnn verify seed={self.seed} scale={self.scale}"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{status} {r.name:<28} max_error={r.max_error:.3e} tol={r.tolerance:.1e} ({r.seconds:.2f}s) {r.detail}"
            )
            if not r.passed and r.failing_case is not None:
                lines.append(f"     failing case: {r.failing_case}")
        lines.append(f"{sum(r.passed for r in self.results)}/{len(self.results)} checks passed")
        return "\n".join(lines)


@performance_monitor(threshold=60.0)
def run_checks(
    seed: int = DEFAULT_SEED, scale: float = 1.0, only: Optional[List[str]] = None, inject_fault: Optional[str] = None
) -> VerifyReport:
    """Run the registered checks, each on its own generator derived from ``seed``."""
    if scale <= 0:
        raise UsageError(f"scale must be positive, got {scale}")
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names + ([inject_fault] if inject_fault else []) if n not in CHECKS]
    if unknown:
        raise UsageError(f"Unknown checks {unknown}, known: {', '.join(CHECKS)}")

    report = VerifyReport(seed, scale)
    for index, name in enumerate(CHECKS):
        if name not in names:
            continue
        ctx = VerifyContext(np.random.default_rng([seed, index]), scale, inject_fault)
        start = time.perf_counter()
        result = CHECKS[name](ctx)
        result.seconds = time.perf_counter() - start
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{name}: {'passed' if result.passed else 'FAILED'} (max error {result.max_error:.3e})")
        report.results.append(result)
    return report
