import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from wvnn import wvnnoracles
from wvnn.wvnnerrors import (
    DegenerateInputError,
    NearOrthogonalPostselectionError,
    NumericalInconsistencyError,
)
from wvnn.wvnnlinalg import (
    EPS,
    as_cmatrix,
    as_cvector,
    eigvals,
    eigvals_qr,
    frobenius_norm,
    match_spectra,
    sort_spectrum,
    trace,
)
from wvnn.wvnnsettings import get_log_level, settings
from wvnn.wvnnstates import (
    Observable,
    bloch_matrix,
    expectation,
    fubini_angle,
    overlap,
    projector,
    uncertainty_sq,
)

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

VARIANTS = ("A", "A-prime")
VARIANCE_SLACK = 1e-12
DEGENERACY_ANGLE_TOL = 1e-6
NILPOTENT_TOL = 1e-10
SOLVER_TOL = 1e-10

TAG_IN_RANGE = "in-range"
TAG_COMPLEX = "anomalous-complex"
TAG_OUTSIDE = "anomalous-outside-range"
TAG_AMPLIFYING = "amplifying"

# bit per tag, OR-ed into the sweep class code
CLASS_BITS = {TAG_IN_RANGE: 0, TAG_COMPLEX: 1, TAG_OUTSIDE: 2, TAG_AMPLIFYING: 4}


def _checked_overlap(psi_i, psi_f, floor: Optional[float]):
    floor = settings.overlap_floor if floor is None else floor
    ov = overlap(psi_f, psi_i)
    ov_sq = abs(ov) ** 2
    if ov_sq < floor:
        raise NearOrthogonalPostselectionError(ov_sq, floor)
    return ov, ov_sq


def _check_dims(o: Observable, *states):
    for psi in states:
        if psi.shape[0] != o.dim:
            raise DegenerateInputError(f"State of dim {psi.shape[0]} for a dim {o.dim} observable")


class WeakOperator:
    """The rank-1 operator whose expectation value is the weak value.

    Variant ``A`` is O Pi_i / |<psi_f|psi_i>|^2, taken in psi_f.
    Variant ``A-prime`` is Pi_f O / |<psi_f|psi_i>|^2, taken in psi_i.
    """

    def __init__(self, o: Observable, psi_i, psi_f, variant: str = "A", floor: float = None):
        if variant not in VARIANTS:
            raise ValueError(f"Unknown weak operator variant {variant!r}, expected one of {VARIANTS}")
        psi_i = as_cvector(psi_i)
        psi_f = as_cvector(psi_f)
        _check_dims(o, psi_i, psi_f)
        ov, ov_sq = _checked_overlap(psi_i, psi_f, floor)

        if variant == "A":
            m = o.matrix @ projector(psi_i) / ov_sq
        else:
            m = projector(psi_f) @ o.matrix / ov_sq
        m.flags.writeable = False

        self.matrix = m
        self.variant = variant
        self.observable = o
        self.psi_i = psi_i
        self.psi_f = psi_f
        self.overlap = ov
        self.overlap_sq = ov_sq
        self.nonzero_eig = trace(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def governing_state(self) -> np.ndarray:
        """The state whose uncertainty sets the Henrici departure."""
        return self.psi_i if self.variant == "A" else self.psi_f

    @property
    def readout_state(self) -> np.ndarray:
        """The state in which the expectation value equals the weak value."""
        return self.psi_f if self.variant == "A" else self.psi_i

    def expectation_in(self, psi) -> complex:
        psi = as_cvector(psi)
        return complex(np.vdot(psi, self.matrix @ psi))

    def __repr__(self):
        return f"WeakOperator({self.variant}, {self.observable.name}, overlap_sq={self.overlap_sq:.6g})"


def build_weak_operator(o: Observable, psi_i, psi_f, variant: str = "A", floor: float = None) -> WeakOperator:
    return WeakOperator(o, psi_i, psi_f, variant, floor)


def weak_value_trace(o: Observable, psi_i, psi_f, floor: float = None) -> complex:
    """<psi_f|O|psi_i> / <psi_f|psi_i>."""
    psi_i = as_cvector(psi_i)
    psi_f = as_cvector(psi_f)
    _check_dims(o, psi_i, psi_f)
    ov, _ = _checked_overlap(psi_i, psi_f, floor)
    return complex(np.vdot(psi_f, o.matrix @ psi_i) / ov)


def henrici_spectral(m) -> float:
    """sqrt(||M||_F^2 - sum |lambda|^2), clamped at zero."""
    m = as_cmatrix(m)
    lam = np.asarray(eigvals(m))
    radicand = frobenius_norm(m) ** 2 - float(np.sum(np.abs(lam) ** 2))
    return float(np.sqrt(max(0.0, radicand)))


def _checked_variance(o: Observable, psi) -> float:
    var = uncertainty_sq(o, psi)
    slack = VARIANCE_SLACK * max(1.0, o.max_abs_eigenvalue**2)
    if var < -slack:
        raise NumericalInconsistencyError(f"Negative variance {var:.3e} for {o.name}", var, slack)
    return max(var, 0.0)


def henrici_structural(o: Observable, psi, overlap_sq: float) -> float:
    """Delta_psi O / overlap_sq; psi is psi_i for A and psi_f for A-prime."""
    if overlap_sq <= 0:
        raise DegenerateInputError(f"overlap_sq must be positive, got {overlap_sq}")
    psi = as_cvector(psi)
    _check_dims(o, psi)
    return float(np.sqrt(_checked_variance(o, psi)) / overlap_sq)


def normalized_henrici(o: Observable, psi) -> float:
    """The structural numerator alone, the departure with the overlap removed."""
    return henrici_structural(o, psi, 1.0)


@dataclass
class WeakValueReport:
    value: complex
    spectrum_min: float
    spectrum_max: float
    classification: frozenset
    henrici_A: float = float("nan")
    henrici_Aprime: float = float("nan")
    overlap_sq: float = float("nan")
    numerator: complex = complex("nan")
    alpha2_A: float = float("nan")
    alpha2_Aprime: float = float("nan")

    @property
    def class_code(self) -> int:
        code = 0
        for tag in self.classification:
            code |= CLASS_BITS[tag]
        return code

    @property
    def is_amplifying(self) -> bool:
        return TAG_AMPLIFYING in self.classification

    def to_dict(self) -> Dict:
        return {
            "value": [self.value.real, self.value.imag],
            "abs": abs(self.value),
            "spectrum_min": self.spectrum_min,
            "spectrum_max": self.spectrum_max,
            "classification": sorted(self.classification),
            "class_code": self.class_code,
            "henrici_A": self.henrici_A,
            "henrici_Aprime": self.henrici_Aprime,
            "overlap_sq": self.overlap_sq,
            "alpha2_A": self.alpha2_A,
            "alpha2_Aprime": self.alpha2_Aprime,
        }


def classification_tags(value: complex, lambda_min: float, lambda_max: float, tol: float) -> frozenset:
    tags = set()
    if abs(value.imag) > tol:
        tags.add(TAG_COMPLEX)
    if value.real < lambda_min - tol or value.real > lambda_max + tol:
        tags.add(TAG_OUTSIDE)
    if not tags:
        tags.add(TAG_IN_RANGE)
    if abs(value) > max(abs(lambda_min), abs(lambda_max)) + tol:
        tags.add(TAG_AMPLIFYING)
    return frozenset(tags)


def classify(value: complex, o: Observable, tol: float = None) -> WeakValueReport:
    tol = settings.classify_tol if tol is None else tol
    value = complex(value)
    return WeakValueReport(
        value=value,
        spectrum_min=o.lambda_min,
        spectrum_max=o.lambda_max,
        classification=classification_tags(value, o.lambda_min, o.lambda_max, tol),
    )


def analyze(o: Observable, psi_i, psi_f, tol: float = None, floor: float = None) -> WeakValueReport:
    """Weak value, its classification and both Henrici departures at one point."""
    psi_i = as_cvector(psi_i)
    psi_f = as_cvector(psi_f)
    _check_dims(o, psi_i, psi_f)
    ov, ov_sq = _checked_overlap(psi_i, psi_f, floor)
    numerator = complex(np.vdot(psi_f, o.matrix @ psi_i))
    report = classify(numerator / ov, o, tol)
    report.overlap_sq = ov_sq
    report.numerator = numerator
    report.henrici_A = henrici_structural(o, psi_i, ov_sq)
    report.henrici_Aprime = henrici_structural(o, psi_f, ov_sq)
    report.alpha2_A = abs(expectation(o, psi_i)) / ov_sq
    report.alpha2_Aprime = abs(expectation(o, psi_f)) / ov_sq
    return report


@dataclass
class EigenstructureReport:
    eigenvalues: List[complex]
    largest_abs_eig: float
    eigvec_angle: Optional[float]
    nilpotent: bool
    degenerate: bool
    solver_deviation: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "largest_abs_eig": self.largest_abs_eig,
            "eigvec_angle": self.eigvec_angle,
            "nilpotent": self.nilpotent,
            "degenerate": self.degenerate,
            "solver_deviation": self.solver_deviation,
        }


def solver_tolerance(nonzero_eig: complex, norm: float) -> float:
    """Allowed distance between the solver's spectrum and {trace, 0, ...}.

    A rank-1 matrix has eigenvalue condition number ||W||_F / |trace|, so
    the bound widens as trace goes to zero and stops at the square root of
    the machine precision that a 2x2 Jordan block costs.
    """
    scale = max(1.0, norm)
    base = SOLVER_TOL * scale
    jordan = 4 * np.sqrt(EPS) * scale
    t = abs(nonzero_eig)
    conditioned = jordan if t == 0.0 else min(8 * EPS * norm**2 / t, jordan)
    return max(base, conditioned)


def _eigenvector_angle(m: np.ndarray) -> float:
    if not np.any(m):
        return float("nan")
    col = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
    row = m[int(np.argmax(np.linalg.norm(m, axis=1))), :]
    # W x = 0 for every row once the dominant row vanishes on x
    null = np.array([row[1], -row[0]])
    return fubini_angle(col, null)


def eigenstructure(
    w: WeakOperator, tol: float = NILPOTENT_TOL, angle_tol: float = DEGENERACY_ANGLE_TOL
) -> EigenstructureReport:
    """Spectrum {trace, 0, ...} of a rank-1 weak operator, checked against QR.

    :raises NumericalInconsistencyError: when the solver disagrees with the
        rank-1 spectrum beyond ``solver_tolerance``
    """
    norm = frobenius_norm(w.matrix)
    expected = sort_spectrum([w.nonzero_eig] + [0j] * (w.dim - 1))
    deviation = match_spectra(eigvals_qr(w.matrix), expected)
    allowed = solver_tolerance(w.nonzero_eig, norm)
    if deviation > allowed:
        raise NumericalInconsistencyError(
            f"Solver spectrum deviates from the rank-1 spectrum by {deviation:.3e}", deviation, allowed
        )

    nilpotent = abs(w.nonzero_eig) <= tol and norm > tol
    angle = None
    if w.dim == 2:
        angle = _eigenvector_angle(np.asarray(w.matrix))
        degenerate = bool(angle <= angle_tol)
    else:
        degenerate = nilpotent
    return EigenstructureReport(
        eigenvalues=expected,
        largest_abs_eig=abs(w.nonzero_eig),
        eigvec_angle=angle,
        nilpotent=nilpotent,
        degenerate=degenerate,
        solver_deviation=deviation,
    )


def quasi_idempotence_defect(w: WeakOperator) -> float:
    m = np.asarray(w.matrix)
    return frobenius_norm(m @ m - w.nonzero_eig * m)


def weak_operator_power(w: WeakOperator, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"Power must be at least 1, got {n}")
    return np.linalg.matrix_power(np.asarray(w.matrix), n)


def power_prefactor(w: WeakOperator, n: int) -> complex:
    """trace^(n-1), the factor in W^n = trace^(n-1) W."""
    return complex(w.nonzero_eig ** (n - 1))


def idempotent_rescaling(w: WeakOperator, tol: float = NILPOTENT_TOL) -> np.ndarray:
    """W / trace(W), an oblique projector."""
    norm = frobenius_norm(w.matrix)
    if abs(w.nonzero_eig) <= tol * max(1.0, norm):
        raise NumericalInconsistencyError(
            f"Nilpotent weak operator (trace {abs(w.nonzero_eig):.3e}) has no idempotent rescaling",
            abs(w.nonzero_eig),
            tol,
        )
    return np.asarray(w.matrix) / w.nonzero_eig


def frobenius_identity_residual(w: WeakOperator) -> float:
    psi = w.governing_state
    second = float(np.vdot(psi, w.observable.squared @ psi).real)
    return abs(frobenius_norm(w.matrix) ** 2 - second / w.overlap_sq**2)


# vectorised routes for sweeps, states stacked along the leading axes


def weak_values_batch(matrix, psi_i, psi_f) -> Dict[str, np.ndarray]:
    """Overlap, numerator and weak value for stacked states.

    No floor is applied, callers mark gaps from ``overlap_sq``.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    psi_i = np.asarray(psi_i, dtype=np.complex128)
    psi_f = np.asarray(psi_f, dtype=np.complex128)
    ov = np.einsum("...j,...j->...", psi_f.conj(), psi_i)
    numerator = np.einsum("...j,...j->...", psi_f.conj(), np.einsum("...jk,...k->...j", matrix, psi_i))
    ov_sq = ov.real**2 + ov.imag**2
    with np.errstate(divide="ignore", invalid="ignore"):
        value = numerator / ov
    return {"overlap": ov, "overlap_sq": ov_sq, "numerator": numerator, "value": value}


def structural_moments_batch(matrix, psi) -> Dict[str, np.ndarray]:
    """<O> and the clamped variance <O^2> - <O>^2 for stacked states."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    o_psi = np.einsum("...jk,...k->...j", matrix, psi)
    first = np.einsum("...j,...j->...", psi.conj(), o_psi).real
    second = np.einsum("...j,...j->...", o_psi.conj(), o_psi).real
    variance = second - first**2
    return {"mean": first, "variance": np.maximum(variance, 0.0), "raw_variance": variance}


def eigvec_angle_batch(matrix, psi) -> np.ndarray:
    """Angle between the two eigenvectors of a dim-2 rank-1 weak operator.

    With psi the governing state the angle is arctan(|<O>| / Delta O),
    zero exactly where the operator turns nilpotent.
    """
    moments = structural_moments_batch(matrix, psi)
    return np.arctan2(np.abs(moments["mean"]), np.sqrt(moments["variance"]))


# which weak operator the denominator-free closed forms belong to


@dataclass
class LabelResolution:
    samples: int
    mapping: Dict[str, Dict[str, str]] = field(default_factory=dict)
    deviations: Dict[str, Dict[str, Dict[str, float]]] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {"samples": self.samples, "mapping": self.mapping, "deviations": self.deviations}


def _real_qubit(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128)


def _candidate_quantities(o: Observable, psi_i, psi_f) -> Dict[str, Dict[str, float]]:
    return {
        "A": {"alpha": abs(expectation(o, psi_i)), "dfn": normalized_henrici(o, psi_i)},
        "A-prime": {"alpha": abs(expectation(o, psi_f)), "dfn": normalized_henrici(o, psi_f)},
    }


def _resolve(deviations: Dict[str, Dict[str, float]]) -> Dict[str, str]:
    return {label: min(candidates, key=candidates.get) for label, candidates in deviations.items()}


def resolve_closed_form_labels(samples: int = 200, rng: np.random.Generator = None) -> LabelResolution:
    """Match each closed-form label to one of the two weak operators by brute force.

    The closed forms carry no overlap denominator, so they are compared
    with |<psi|O|psi>| and Delta_psi O for psi = psi_i (``A``) and
    psi = psi_f (``A-prime``).
    """
    rng = np.random.default_rng() if rng is None else rng
    zero = lambda: {"A": 0.0, "A-prime": 0.0}  # noqa: E731
    family = {"alpha_A": zero(), "alpha_Aprime": zero(), "df_A": zero(), "df_Aprime": zero()}
    derivatives = {"dfn_1": zero(), "dfn_2": zero()}

    for _ in range(samples):
        theta, theta_i, theta_f = rng.uniform(0.0, np.pi / 2, size=3)
        phi = rng.uniform(0.0, 2 * np.pi)

        o = Observable(bloch_matrix(theta, wvnnoracles.FAMILY_PHI))
        cand = _candidate_quantities(o, _real_qubit(theta_i), _real_qubit(0.0))
        printed = wvnnoracles.appc_values(theta_i, theta)
        for name, key, quantity in (
            ("alpha_A", "alpha", abs(printed.alpha_A)),
            ("alpha_Aprime", "alpha", abs(printed.alpha_Aprime)),
            ("df_A", "dfn", printed.df_A),
            ("df_Aprime", "dfn", printed.df_Aprime),
        ):
            for variant in ("A", "A-prime"):
                family[name][variant] = max(family[name][variant], abs(cand[variant][key] - float(quantity)))

        o = Observable(bloch_matrix(theta, phi))
        cand = _candidate_quantities(o, _real_qubit(theta_i), _real_qubit(theta_f))
        printed = wvnnoracles.appd_values(theta, theta_i, theta_f, phi)
        for name, quantity in (("dfn_1", printed.dfn_1), ("dfn_2", printed.dfn_2)):
            for variant in ("A", "A-prime"):
                derivatives[name][variant] = max(derivatives[name][variant], abs(cand[variant]["dfn"] - float(quantity)))

    resolution = LabelResolution(
        samples=samples,
        mapping={"family": _resolve(family), "derivatives": _resolve(derivatives)},
        deviations={"family": family, "derivatives": derivatives},
    )
    logger.debug(f"Label resolution over {samples} samples: {resolution.mapping}")
    return resolution
