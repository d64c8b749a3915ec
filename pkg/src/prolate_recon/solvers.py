"""Coefficient estimators: least squares, ridge, and robust correntropy.

The correntropy solver maximizes similarity between observations and the
model under a Gaussian kernel, equivalently minimizes

    J(c) = sum_i (1 - kappa_sigma(y_i - d_i c)) + lambda ||c||^2,

by half-quadratic alternation: auxiliary weights w_i = kappa_sigma(r_i)/sigma^2
followed by a weighted ridge solve.  Large residuals get exponentially small
weights, which bounds the influence of outliers.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

CONDITION_WARNING_THRESHOLD = 1e12
SV_CUTOFF = 1e-12  # relative singular-value cutoff for pseudo-inverse paths


@dataclass(frozen=True)
class RidgeConfig:
    """Tikhonov regularization weight (lam >= 0)."""

    lam: float = 1e-3

    def __post_init__(self):
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ValueError(f"ridge lam must be finite and >= 0, got {self.lam!r}")


@dataclass(frozen=True)
class FixedKernel:
    """Correntropy kernel width held constant across iterations."""

    kernel_sigma: float

    def __post_init__(self):
        if not (self.kernel_sigma > 0.0 and math.isfinite(self.kernel_sigma)):
            raise ValueError(f"kernel_sigma must be positive, got {self.kernel_sigma!r}")


@dataclass(frozen=True)
class AdaptiveKernel:
    """Kernel width recomputed from the residuals after every coefficient
    update, floored at sigma_min.  sigma_min=None derives the floor from the
    data as 1e-3 * max|y|."""

    sigma_min: float | None = None

    def __post_init__(self):
        if self.sigma_min is not None and not (self.sigma_min > 0.0
                                               and math.isfinite(self.sigma_min)):
            raise ValueError(f"sigma_min must be positive, got {self.sigma_min!r}")


@dataclass(frozen=True)
class MccConfig:
    lam: float = 1e-3
    kernel_policy: object = field(default_factory=AdaptiveKernel)
    max_iterations: int = 100
    tolerance: float = 1e-8

    def __post_init__(self):
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ValueError(f"mcc lam must be finite and >= 0, got {self.lam!r}")
        if not isinstance(self.kernel_policy, (FixedKernel, AdaptiveKernel)):
            raise ValueError("kernel_policy must be FixedKernel or AdaptiveKernel")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (self.tolerance > 0.0):
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class MccSolveReport:
    """Result of the half-quadratic solve.

    objective_trace  equivalent objective after the initial solve and after
                     each sweep; see solve_mcc for the exact definition.
    weight_trace     the final weight vector (one entry per sample).
    sigma_trace      kernel width used by each sweep's weight update.
    """

    coefficients: np.ndarray
    objective_trace: np.ndarray
    weight_trace: np.ndarray
    sigma_trace: np.ndarray
    iterations: int
    termination: str

    def to_dict(self) -> dict:
        return {
            "coefficients": [float(x) for x in self.coefficients],
            "objective_trace": [float(x) for x in self.objective_trace],
            "weight_trace": [float(x) for x in self.weight_trace],
            "sigma_trace": [float(x) for x in self.sigma_trace],
            "iterations": int(self.iterations),
            "termination": self.termination,
        }


def _matrix_of(dictionary) -> np.ndarray:
    """Accept a Dictionary or a plain 2-d array."""
    matrix = getattr(dictionary, "matrix", dictionary)
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ValueError("design matrix must be 2-d")
    return matrix


def gaussian_kernel(u, kernel_sigma: float):
    """kappa_sigma(u) = exp(-u^2 / (2 sigma^2)) / (sqrt(2 pi) sigma)."""
    if not (kernel_sigma > 0.0):
        raise ValueError(f"kernel_sigma must be positive, got {kernel_sigma!r}")
    u = np.asarray(u, dtype=float)
    out = np.exp(-(u * u) / (2.0 * kernel_sigma * kernel_sigma))
    out /= math.sqrt(2.0 * math.pi) * kernel_sigma
    return float(out) if out.ndim == 0 else out


def correntropy_estimate(x, y, kernel_sigma: float) -> float:
    """Sample correntropy: mean Gaussian-kernel similarity of paired entries."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 1:
        raise ValueError("correntropy needs two equal-length non-empty vectors")
    return float(np.mean(gaussian_kernel(x - y, kernel_sigma)))


def cim(x, y, kernel_sigma: float) -> float:
    """Correntropy induced metric: a bounded, outlier-insensitive distance.

    CIM(x, y) = sqrt(mean(kappa(0) - kappa(x_i - y_i))); zero iff x == y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 1:
        raise ValueError("cim needs two equal-length non-empty vectors")
    k0 = gaussian_kernel(0.0, kernel_sigma)
    gap = np.mean(k0 - gaussian_kernel(x - y, kernel_sigma))
    return float(np.sqrt(max(gap, 0.0)))


def solve_least_squares(dictionary, y) -> np.ndarray:
    """Minimum-norm least squares with singular-value cutoff.

    Singular values below 1e-12 of the largest are treated as zero, so
    rank deficiency is handled rather than raised.  A condition number
    above 1e12 triggers a warning.
    """
    matrix = _matrix_of(dictionary)
    y = np.asarray(y, dtype=float)
    if matrix.shape[0] != y.size:
        raise ValueError(f"dictionary has {matrix.shape[0]} rows but y has {y.size}")
    coef, _, _, sv = np.linalg.lstsq(matrix, y, rcond=SV_CUTOFF)
    if sv.size and sv[-1] > 0 and sv[0] / sv[-1] > CONDITION_WARNING_THRESHOLD:
        warnings.warn(
            f"least-squares system condition number {sv[0] / sv[-1]:.2e} exceeds 1e12; "
            "solution is the minimum-norm pseudo-inverse fit",
            RuntimeWarning, stacklevel=2)
    return coef


def _svd_ridge(matrix: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    uy = u.T @ y
    if lam > 0.0:
        filt = s / (s * s + lam)
    else:
        filt = np.zeros_like(s)
        keep = s > SV_CUTOFF * (s[0] if s.size else 0.0)
        filt[keep] = 1.0 / s[keep]
    return vt.T @ (filt * uy)


def solve_ridge(dictionary, y, config: RidgeConfig) -> np.ndarray:
    """Tikhonov solution (D'D + lam I)^-1 D'y, computed through the SVD.

    The SVD form stays accurate when the dictionary is ill conditioned,
    where explicitly forming the normal equations would square the
    condition number.  lam == 0 with a singular dictionary falls back to
    minimum-norm least squares with a warning.
    """
    matrix = _matrix_of(dictionary)
    y = np.asarray(y, dtype=float)
    if matrix.shape[0] != y.size:
        raise ValueError(f"dictionary has {matrix.shape[0]} rows but y has {y.size}")
    if config.lam == 0.0:
        sv = np.linalg.svd(matrix, compute_uv=False)
        if sv[-1] <= SV_CUTOFF * sv[0]:
            warnings.warn(
                "ridge with lam=0 on a singular dictionary; falling back to "
                "minimum-norm least squares",
                RuntimeWarning, stacklevel=2)
            return solve_least_squares(matrix, y)
    return _svd_ridge(matrix, y, config.lam)


def update_weights(residuals, kernel_sigma: float) -> np.ndarray:
    """Half-quadratic auxiliary weights w_i = kappa_sigma(r_i) / sigma^2.

    Weights lie in (0, kappa_sigma(0)/sigma^2]; outliers get exponentially
    small (never exactly zero) weight.  The exact Gaussian value underflows
    binary64 for residuals beyond ~38 sigma, so weights are floored at the
    smallest normal double to keep them strictly positive.
    """
    residuals = np.asarray(residuals, dtype=float)
    w = gaussian_kernel(residuals, kernel_sigma) / (kernel_sigma * kernel_sigma)
    return np.maximum(w, np.finfo(float).tiny)


def weighted_ridge_step(dictionary, y, w, lam: float) -> np.ndarray:
    """Solve (D' diag(w) D + lam I) c = D' diag(w) y.

    Implemented as an SVD ridge solve on the row-scaled system
    (sqrt(w) D, sqrt(w) y); a singular system with lam == 0 is an error
    advising a positive lam.
    """
    matrix = _matrix_of(dictionary)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if matrix.shape[0] != y.size or w.size != y.size:
        raise ValueError("dictionary rows, y, and w must all have equal length")
    if np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("all weights must be finite and strictly positive")
    root = np.sqrt(w)
    scaled = root[:, None] * matrix
    if lam == 0.0:
        sv = np.linalg.svd(scaled, compute_uv=False)
        if sv[-1] <= SV_CUTOFF * sv[0]:
            raise np.linalg.LinAlgError(
                "weighted system is singular with lam=0; use a positive lam")
    return _svd_ridge(scaled, root * y, lam)


def adaptive_sigma(residuals, sigma_min: float) -> float:
    """Residual-driven kernel width max(sigma_min, sqrt(||r||^2 / (2 M)))."""
    residuals = np.asarray(residuals, dtype=float)
    if residuals.size < 1:
        raise ValueError("residual vector must be non-empty")
    return max(float(sigma_min), math.sqrt(float(residuals @ residuals) / (2.0 * residuals.size)))


def mcc_objective(coefficients, dictionary, y, lam: float, kernel_sigma: float) -> float:
    """Estimation objective sum_i (1 - kappa_sigma(y_i - d_i c)) + lam ||c||^2."""
    matrix = _matrix_of(dictionary)
    coefficients = np.asarray(coefficients, dtype=float)
    y = np.asarray(y, dtype=float)
    r = y - matrix @ coefficients
    return float(np.sum(1.0 - gaussian_kernel(r, kernel_sigma))
                 + lam * (coefficients @ coefficients))


def mcc_objective_gradient(coefficients, dictionary, y, lam: float,
                           kernel_sigma: float) -> np.ndarray:
    """Gradient of mcc_objective:  -D'(kappa(r) * r)/sigma^2 + 2 lam c."""
    matrix = _matrix_of(dictionary)
    coefficients = np.asarray(coefficients, dtype=float)
    y = np.asarray(y, dtype=float)
    r = y - matrix @ coefficients
    kern = gaussian_kernel(r, kernel_sigma)
    return (-(matrix.T @ (kern * r)) / (kernel_sigma * kernel_sigma)
            + 2.0 * lam * coefficients)


def _equivalent_objective(r, c, sigma, lam):
    # The weight rule kappa(r)/sigma^2 is the exact half-quadratic minimizer
    # for twice the kernel, so the alternation is exact majorize-minimize for
    # the data term plus HALF the ridge penalty.  This is the quantity with
    # a descent guarantee under a fixed kernel width.
    return float(np.sum(1.0 - gaussian_kernel(r, sigma)) + 0.5 * lam * float(c @ c))


def solve_mcc(dictionary, y, config: MccConfig) -> MccSolveReport:
    """Half-quadratic alternation for the correntropy objective.

    Starts from the ridge solution, then alternates weight updates with
    weighted ridge steps until the relative coefficient change drops below
    config.tolerance or max_iterations is reached.  Under a FixedKernel
    policy the recorded objective trace (equivalent objective, equal to the
    estimation objective with the ridge penalty at half weight, constant
    offset aside) is non-increasing; under AdaptiveKernel the width moves
    with the residuals and no monotonicity is asserted.
    """
    matrix = _matrix_of(dictionary)
    y = np.asarray(y, dtype=float)
    if matrix.shape[0] != y.size:
        raise ValueError(f"dictionary has {matrix.shape[0]} rows but y has {y.size}")

    coefficients = solve_ridge(matrix, y, RidgeConfig(config.lam))
    residuals = y - matrix @ coefficients

    policy = config.kernel_policy
    fixed = isinstance(policy, FixedKernel)
    if fixed:
        sigma = policy.kernel_sigma
        sigma_min = None
    else:
        sigma_min = policy.sigma_min
        if sigma_min is None:
            sigma_min = max(1e-3 * float(np.max(np.abs(y))), 1e-12)
        sigma = adaptive_sigma(residuals, sigma_min)

    objective_trace = [_equivalent_objective(residuals, coefficients, sigma, config.lam)]
    sigma_trace = []
    weights = np.full(y.size, np.nan)
    iterations = 0
    termination = "max_iterations"
    for iteration in range(1, config.max_iterations + 1):
        sigma_trace.append(sigma)
        weights = update_weights(residuals, sigma)
        new_coefficients = weighted_ridge_step(matrix, y, weights, config.lam)
        residuals = y - matrix @ new_coefficients
        if not fixed:
            sigma = adaptive_sigma(residuals, sigma_min)
        objective = _equivalent_objective(residuals, new_coefficients, sigma, config.lam)
        if not math.isfinite(objective):
            raise RuntimeError(
                f"correntropy objective became non-finite at iteration {iteration}")
        objective_trace.append(objective)
        iterations = iteration
        step = np.linalg.norm(new_coefficients - coefficients)
        scale = max(np.linalg.norm(coefficients), 1e-12)
        coefficients = new_coefficients
        if step / scale < config.tolerance:
            termination = "converged"
            break

    return MccSolveReport(
        coefficients=coefficients,
        objective_trace=np.asarray(objective_trace),
        weight_trace=weights,
        sigma_trace=np.asarray(sigma_trace),
        iterations=iterations,
        termination=termination,
    )
