"""Design matrices over sample grids and synthesis of reconstructions.

Two dictionary kinds: shifted sinc kernels anchored at the sample times,
and digital prolate functions evaluated at the sample times.  A fitted
coefficient vector plus its dictionary kind forms a ReconstructionModel
that can be evaluated on any time grid.
"""

import math
from dataclasses import dataclass

import numpy as np

from .pswf import DiscretePswfBasis, evaluate_basis_function, shannon_count


@dataclass(frozen=True)
class SampleSet:
    """Paired sample times (strictly increasing) and observed values."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or times.size < 1 or times.size != values.size:
            raise ValueError("times and values must be equal-length 1-d arrays with >= 1 entry")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise ValueError("sample times and values must be finite")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("sample times must be strictly increasing (no duplicates)")
        times.setflags(write=False)
        values.setflags(write=False)

    def __len__(self):
        return self.times.size


@dataclass(frozen=True)
class SincKind:
    """Sinc dictionary parameters: bandwidth and the kernel center times."""

    bandwidth: float
    centers: np.ndarray

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        object.__setattr__(self, "centers", centers)
        centers.setflags(write=False)


@dataclass(frozen=True)
class PswfKind:
    """Prolate dictionary parameters: basis, term count, and the time shift
    that centered the observation window at 0 before evaluation."""

    basis: DiscretePswfBasis
    n_terms: int
    time_shift: float = 0.0


@dataclass(frozen=True)
class Dictionary:
    """Design matrix with provenance."""

    matrix: np.ndarray
    kind: object
    times: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("dictionary matrix contains non-finite entries")
        self.matrix.setflags(write=False)

    @property
    def n_terms(self):
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ReconstructionModel:
    """Coefficient vector plus the dictionary kind needed to synthesize."""

    coefficients: np.ndarray
    kind: object

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", coef)
        if not np.all(np.isfinite(coef)):
            raise ValueError("model coefficients must be finite")
        if isinstance(self.kind, SincKind) and coef.size != self.kind.centers.size:
            raise ValueError("sinc model needs one coefficient per kernel center")
        if isinstance(self.kind, PswfKind) and coef.size != self.kind.n_terms:
            raise ValueError("coefficient count does not match the dictionary term count")
        coef.setflags(write=False)


def _sinc_matrix(rows, centers, bandwidth):
    """sin(sigma_b (t - t_j)) / (sigma_b (t - t_j)), with 1 at coincidence.

    Evaluated on |t - t_j| so the square version is exactly symmetric.
    """
    x = np.abs(bandwidth * (np.asarray(rows, dtype=float)[:, None]
                            - np.asarray(centers, dtype=float)[None, :]))
    out = np.ones_like(x)
    nz = x != 0.0
    out[nz] = np.sin(x[nz]) / x[nz]
    return out


def build_sinc_dictionary(times, bandwidth: float) -> Dictionary:
    """Square sinc design matrix over the sample times.

    Entry (i, j) = sin(sigma_b (t_i - t_j)) / (sigma_b (t_i - t_j)) with
    the diagonal equal to 1.  Duplicate times are rejected (off-diagonal
    zero denominator).
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-d array")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("sample times must be strictly increasing; duplicates "
                         "make the sinc dictionary singular")
    if not (bandwidth > 0.0 and math.isfinite(bandwidth)):
        raise ValueError(f"bandwidth must be positive and finite, got {bandwidth!r}")
    matrix = _sinc_matrix(times, times, bandwidth)
    return Dictionary(matrix=matrix, kind=SincKind(bandwidth, times), times=times)


def default_term_count(basis: DiscretePswfBasis) -> int:
    """Default number of prolate terms.

    The Shannon count (2M+1)c/pi covers the well-concentrated functions;
    signals that are not periodic in the basis period also need the
    transition-band functions, whose count grows like log(2M+1).  The
    guard 2*ln(2M+1) keeps the noiseless approximation error of generic
    in-band signals far below any of the tolerances used here.
    """
    size = basis.params.size
    n = math.ceil(shannon_count(basis.params)) + math.ceil(2.0 * math.log(size))
    return min(size, n)


def build_pswf_dictionary(times, basis: DiscretePswfBasis, n_terms: int,
                          time_shift: float = 0.0) -> Dictionary:
    """Prolate design matrix: entry (i, j) = phi_j(t_i - time_shift).

    Columns are ordered by descending concentration eigenvalue.  The basis
    is defined symmetric about t = 0, so callers whose observation window
    is not centered pass its midpoint as ``time_shift``.
    """
    times = np.asarray(times, dtype=float)
    size = basis.params.size
    if not 1 <= n_terms <= size:
        raise ValueError(f"n_terms must lie in [1, {size}], got {n_terms}")
    shifted = times - time_shift
    cols = [evaluate_basis_function(basis, k, shifted) for k in range(n_terms)]
    matrix = np.column_stack(cols)
    return Dictionary(matrix=matrix, kind=PswfKind(basis, n_terms, time_shift), times=times)


def synthesize(model: ReconstructionModel, grid) -> np.ndarray:
    """Evaluate the finite expansion sum_j coef_j * atom_j(t) on a grid."""
    grid = np.asarray(grid, dtype=float)
    kind = model.kind
    if isinstance(kind, SincKind):
        return _sinc_matrix(grid, kind.centers, kind.bandwidth) @ model.coefficients
    if isinstance(kind, PswfKind):
        shifted = grid - kind.time_shift
        out = np.zeros(grid.shape, dtype=float)
        for k in range(kind.n_terms):
            out += model.coefficients[k] * evaluate_basis_function(kind.basis, k, shifted)
        return out
    raise TypeError(f"unknown model kind: {kind!r}")
