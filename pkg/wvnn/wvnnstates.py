import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from wvnn.wvnnerrors import (
    DegenerateInputError,
    DomainError,
    HermiticityViolationError,
    UsageError,
)
from wvnn.wvnnlinalg import adjoint, as_cmatrix, as_cvector, frobenius_norm
from wvnn.wvnnsettings import get_log_level

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

HALF_PI = np.pi / 2
TWO_PI = 2 * np.pi
# slack for angles computed as e.g. 5*pi/12 + ... landing a hair outside
RANGE_SLACK = 1e-12
HERMITIAN_TOL = 1e-12
UNIT_NORM_TOL = 1e-12


def _check_range(name: str, value: float, lo: float, hi: float) -> float:
    if not np.isfinite(value) or value < lo - RANGE_SLACK or value > hi + RANGE_SLACK:
        raise DomainError(f"{name}={value} outside [{lo:.6g}, {hi:.6g}]")
    return float(min(max(value, lo), hi))


def _fold_quarter(angle: float) -> Tuple[float, int, int]:
    """Map any angle to f in [0, pi/2] with cos(angle) = cs*cos(f), sin(angle) = ss*sin(f)."""
    a = float(np.mod(angle, TWO_PI))
    if a <= HALF_PI:
        return a, 1, 1
    if a <= np.pi:
        return np.pi - a, -1, 1
    if a <= 3 * HALF_PI:
        return a - np.pi, -1, -1
    return TWO_PI - a, 1, -1


@dataclass(frozen=True)
class QubitParams:
    """Polar angle theta in [0, pi/2] and relative phase xi in [0, 2pi]."""

    theta: float
    xi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_range("theta", self.theta, 0.0, HALF_PI))
        object.__setattr__(self, "xi", _check_range("xi", self.xi, 0.0, TWO_PI))

    @classmethod
    def wrapped(cls, theta: float, xi: float = 0.0) -> "QubitParams":
        """Non-canonical constructor that folds any angles into range.

        The resulting state equals the unfolded one up to a global phase.
        """
        f, cs, ss = _fold_quarter(theta)
        if cs * ss < 0:
            xi = xi + np.pi
        return cls(f, float(np.mod(xi, TWO_PI)))


@dataclass(frozen=True)
class QutritParams:
    theta: float
    alpha: float = 0.0
    chi1: float = 0.0
    chi2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_range("theta", self.theta, 0.0, HALF_PI))
        # the alpha range is our choice, mirroring theta
        object.__setattr__(self, "alpha", _check_range("alpha", self.alpha, 0.0, HALF_PI))
        object.__setattr__(self, "chi1", _check_range("chi1", self.chi1, 0.0, TWO_PI))
        object.__setattr__(self, "chi2", _check_range("chi2", self.chi2, 0.0, TWO_PI))

    @classmethod
    def wrapped(cls, theta: float, alpha: float = 0.0, chi1: float = 0.0, chi2: float = 0.0) -> "QutritParams":
        """Non-canonical constructor, folds angles and absorbs signs into the phases."""
        ft, cs_t, ss_t = _fold_quarter(theta)
        fa, cs_a, ss_a = _fold_quarter(alpha)
        if cs_t * ss_t * cs_a < 0:
            chi1 = chi1 + np.pi
        if cs_t * ss_t * ss_a < 0:
            chi2 = chi2 + np.pi
        return cls(ft, fa, float(np.mod(chi1, TWO_PI)), float(np.mod(chi2, TWO_PI)))


@dataclass(frozen=True)
class BlochObservableParams:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_range("theta", self.theta, 0.0, HALF_PI))
        object.__setattr__(self, "phi", _check_range("phi", self.phi, 0.0, TWO_PI))


def qubit_state(p: QubitParams) -> np.ndarray:
    return np.array([np.cos(p.theta), np.exp(1j * p.xi) * np.sin(p.theta)], dtype=np.complex128)


def qutrit_state(p: QutritParams) -> np.ndarray:
    s = np.sin(p.theta)
    return np.array(
        [
            np.cos(p.theta),
            np.exp(1j * p.chi1) * np.cos(p.alpha) * s,
            np.exp(1j * p.chi2) * np.sin(p.alpha) * s,
        ],
        dtype=np.complex128,
    )


def _check_unit(name: str, psi: np.ndarray):
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise DegenerateInputError(f"{name} is not normalized, |{name}| = {norm:.15g}")


def overlap(psi_f, psi_i) -> complex:
    """<psi_f|psi_i>, conjugate-linear in the first argument."""
    psi_f = as_cvector(psi_f)
    psi_i = as_cvector(psi_i)
    if psi_f.shape != psi_i.shape:
        raise DegenerateInputError(f"Dimension mismatch: {psi_f.size} vs {psi_i.size}")
    _check_unit("psi_f", psi_f)
    _check_unit("psi_i", psi_i)
    return complex(np.vdot(psi_f, psi_i))


def fubini_angle(v1, v2) -> float:
    """arccos |<v1|v2>| of the normalized vectors, in [0, pi/2]."""
    v1 = as_cvector(v1)
    v2 = as_cvector(v2)
    if v1.shape != v2.shape:
        raise DegenerateInputError(f"Dimension mismatch: {v1.size} vs {v2.size}")
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    if n1 == 0.0 or n2 == 0.0:
        raise DegenerateInputError("Fubini-Study angle of a zero vector")
    c = abs(np.vdot(v1, v2)) / (n1 * n2)
    return float(np.arccos(min(1.0, c)))


def projector(psi) -> np.ndarray:
    psi = as_cvector(psi)
    return np.outer(psi, psi.conj())


class Observable:
    """Hermitian matrix with its real spectrum cached in ascending order."""

    def __init__(self, matrix, name: str = "matrix"):
        m = as_cmatrix(matrix)
        defect = frobenius_norm(m - adjoint(m))
        tolerance = HERMITIAN_TOL * max(1.0, frobenius_norm(m))
        if defect > tolerance:
            raise HermiticityViolationError(defect, tolerance)
        m.flags.writeable = False
        self.matrix = m
        self.name = name
        self.dim = m.shape[0]
        # eigvalsh only reads one triangle, feed it the Hermitian part
        self.spectrum: Tuple[float, ...] = tuple(
            float(x) for x in np.linalg.eigvalsh((m + adjoint(m)) / 2)
        )
        self._squared = None

    @property
    def lambda_min(self) -> float:
        return self.spectrum[0]

    @property
    def lambda_max(self) -> float:
        return self.spectrum[-1]

    @property
    def max_abs_eigenvalue(self) -> float:
        return max(abs(self.spectrum[0]), abs(self.spectrum[-1]))

    @property
    def squared(self) -> np.ndarray:
        if self._squared is None:
            sq = self.matrix @ self.matrix
            sq.flags.writeable = False
            self._squared = sq
        return self._squared

    def __repr__(self):
        return f"Observable({self.name}, spectrum={self.spectrum})"


def observable_from_matrix(m, name: str = "matrix") -> Observable:
    return Observable(m, name=name)


PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(k: Union[str, int]) -> Observable:
    axis = {1: "x", 2: "y", 3: "z"}.get(k, k)
    if axis not in PAULI:
        raise DomainError(f"Unknown Pauli axis {k!r}, expected x, y or z")
    return Observable(PAULI[axis], name=f"pauli-{axis}")


def generalized_gellmann(j: int, k: int, d: int) -> np.ndarray:
    """Generalized Gell-Mann matrix of dimension d.

    j > k gives the symmetric, j < k the antisymmetric off-diagonal matrix,
    j == k < d the diagonal ones and j == k == d the identity.
    """
    if j > k:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j - 1, k - 1] = 1
        g[k - 1, j - 1] = 1
    elif k > j:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j - 1, k - 1] = -1j
        g[k - 1, j - 1] = 1j
    elif j == k and j < d:
        g = np.sqrt(2 / (j * (j + 1))) * np.diag(
            [1.0 + 0j if n <= j else (-j + 0j if n == j + 1 else 0j) for n in range(1, d + 1)]
        )
    else:
        g = np.eye(d, dtype=np.complex128)
    return g


# standard SU(3) numbering
GELLMANN_INDEX = {1: (2, 1), 2: (1, 2), 3: (1, 1), 4: (3, 1), 5: (1, 3), 6: (3, 2), 7: (2, 3), 8: (2, 2)}


def gellmann(k: int) -> Observable:
    if k not in GELLMANN_INDEX:
        raise DomainError(f"Gell-Mann index {k!r} outside 1..8")
    j, l = GELLMANN_INDEX[k]
    return Observable(generalized_gellmann(j, l, 3), name=f"gellmann-{k}")


def bloch_matrix(theta: float, phi: float) -> np.ndarray:
    return (
        np.sin(theta) * np.cos(phi) * PAULI["x"]
        + np.sin(theta) * np.sin(phi) * PAULI["y"]
        + np.cos(theta) * PAULI["z"]
    )


def bloch_observable(p: BlochObservableParams) -> Observable:
    return Observable(bloch_matrix(p.theta, p.phi), name=f"bloch-{p.theta:.6g}-{p.phi:.6g}")


def pauli_sum(axes: Sequence[str]) -> Observable:
    """Normalized sum of distinct Pauli matrices, e.g. (x+y+z)/sqrt(3)."""
    axes = list(axes)
    if not axes or len(set(axes)) != len(axes) or any(a not in PAULI for a in axes):
        raise DomainError(f"Invalid Pauli sum {axes!r}")
    m = sum(PAULI[a] for a in axes) / np.sqrt(len(axes))
    return Observable(m, name="sum-" + "".join(axes))


def expectation(o: Observable, psi) -> float:
    return float(np.vdot(psi, o.matrix @ psi).real)


def uncertainty_sq(o: Observable, psi) -> float:
    """<O^2> - <O>^2 as ||O psi||^2 - <psi|O psi>^2, may be a tiny negative number."""
    o_psi = o.matrix @ psi
    second = float(np.vdot(o_psi, o_psi).real)
    first = float(np.vdot(psi, o_psi).real)
    return second - first * first


_ANGLE_RE = re.compile(r"^\s*([-+]?\d*\.?\d*(?:[eE][-+]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: Union[str, float]) -> float:
    """Parse '1.5446', 'pi/12', '5*pi/12', '3pi/2', '-pi/4' into radians."""
    if isinstance(text, (int, float)):
        return float(text)
    match = _ANGLE_RE.match(str(text))
    if not match or (not match.group(1) and not match.group(2)):
        raise UsageError(f"Cannot parse angle {text!r}")
    coefficient, has_pi, divisor = match.groups()
    if coefficient in ("", "+"):
        value = 1.0
    elif coefficient == "-":
        value = -1.0
    else:
        try:
            value = float(coefficient)
        except ValueError:
            raise UsageError(f"Cannot parse angle {text!r}")
    if has_pi:
        value *= np.pi
    if divisor:
        value /= float(divisor)
    return value


def _load_matrix_file(path: str) -> np.ndarray:
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"Matrix file {path} does not exist")
    rows = []
    for line in file.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([complex(token.replace("i", "j")) for token in line.split()])
        except ValueError:
            raise UsageError(f"Cannot parse matrix row {line!r} in {path}")
    return np.array(rows, dtype=np.complex128)


def observable_from_spec(spec: str) -> Observable:
    """Build an observable from 'pauli:x', 'gellmann:5', 'bloch:pi/2,pi/4',
    'sum:x+y+z' or 'matrix:<path>'."""
    kind, _, argument = spec.partition(":")
    kind = kind.strip().lower()
    argument = argument.strip()
    try:
        if kind == "pauli":
            return pauli(argument.lower())
        if kind == "gellmann":
            return gellmann(int(argument))
        if kind == "bloch":
            theta, phi = (parse_angle(x) for x in argument.split(","))
            return bloch_observable(BlochObservableParams(theta, phi))
        if kind == "sum":
            return pauli_sum([a.strip().lower() for a in argument.split("+")])
        if kind == "matrix":
            return observable_from_matrix(_load_matrix_file(argument), name=Path(argument).stem)
    except (TypeError, ValueError) as e:
        if isinstance(e, (DomainError, HermiticityViolationError, UsageError)):
            raise
        raise UsageError(f"Invalid observable spec {spec!r}: {e}")
    raise UsageError(f"Unknown observable kind in {spec!r}")


def state_from_angles(theta: float, xi: float = 0.0, extra: Optional[dict] = None, dim: int = 2) -> np.ndarray:
    """Qubit (dim 2) or qutrit (dim 3) state from the sweep's angle set."""
    if dim == 2:
        return qubit_state(QubitParams(theta, xi))
    if dim == 3:
        extra = extra or {}
        return qutrit_state(
            QutritParams(theta, extra.get("alpha", 0.0), extra.get("chi1", 0.0), extra.get("chi2", 0.0))
        )
    raise DomainError(f"Parametrized states exist for dim 2 and 3, got {dim}")
