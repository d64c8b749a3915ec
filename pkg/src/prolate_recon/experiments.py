"""Synthetic reconstruction experiments: three-sinusoid signal, burst
contamination, uniform/non-uniform sampling, and the six estimator variants.

Estimator names: Sinc / PSWF are plain least squares on the respective
dictionary, RSinc / RPSWF ridge, ESinc / EPSWF the robust correntropy
solver.
"""

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .dictionary import (Dictionary, ReconstructionModel, SampleSet,
                         build_pswf_dictionary, build_sinc_dictionary,
                         default_term_count, synthesize)
from .pswf import BandlimitParams, compute_basis
from .solvers import (AdaptiveKernel, FixedKernel, MccConfig, RidgeConfig,
                      solve_least_squares, solve_mcc, solve_ridge)

ESTIMATOR_NAMES = ("Sinc", "PSWF", "RSinc", "RPSWF", "ESinc", "EPSWF")


def generate_test_signal(t):
    """Three-sinusoid test signal sin(50t+0.1) + sin(30t+0.8) + sin(40t+0.5)."""
    t = np.asarray(t, dtype=float)
    out = np.sin(50.0 * t + 0.1) + np.sin(30.0 * t + 0.8) + np.sin(40.0 * t + 0.5)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GaussianBurst:
    """Burst contamination: zero-mean Gaussian of std burst_std on every
    sample inside the burst interval."""


@dataclass(frozen=True)
class UniformSpikes:
    """Impulsive burst contamination: each sample inside the burst interval
    independently receives, with the given probability, a spike drawn
    uniformly from [-amplitude, +amplitude]."""

    amplitude: float
    probability: float = 0.5

    def __post_init__(self):
        if not (self.amplitude >= 0.0 and math.isfinite(self.amplitude)):
            raise ValueError("spike amplitude must be finite and >= 0")
        if not (0.0 <= self.probability <= 1.0):
            raise ValueError("spike probability must lie in [0, 1]")


@dataclass(frozen=True)
class NoiseConfig:
    """Background noise over the whole window plus heavier contamination
    confined to the burst interval."""

    base_std: float = 0.05
    burst_interval: tuple = (0.0, 0.2)
    burst_std: float = 2.0
    burst_kind: object = field(default_factory=GaussianBurst)

    def __post_init__(self):
        if not (self.base_std >= 0.0 and math.isfinite(self.base_std)):
            raise ValueError("base_std must be finite and >= 0")
        if not (self.burst_std >= 0.0 and math.isfinite(self.burst_std)):
            raise ValueError("burst_std must be finite and >= 0")
        a, b = self.burst_interval
        if not (a <= b):
            raise ValueError("burst_interval must be ordered [a, b]")
        if not isinstance(self.burst_kind, (GaussianBurst, UniformSpikes)):
            raise ValueError("burst_kind must be GaussianBurst or UniformSpikes")


@dataclass(frozen=True)
class UniformSampling:
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("uniform sampling needs count >= 2")


@dataclass(frozen=True)
class NonUniformSampling:
    """Dense equispaced samples inside dense_interval plus sparse equispaced
    samples over the rest of the window."""

    dense_count: int
    dense_interval: tuple
    sparse_count: int

    def __post_init__(self):
        if self.dense_count < 2 or self.sparse_count < 0:
            raise ValueError("non-uniform sampling needs dense_count >= 2, sparse_count >= 0")
        a, b = self.dense_interval
        if not (a < b):
            raise ValueError("dense_interval must be non-degenerate [a, b]")


@dataclass(frozen=True)
class ExperimentConfig:
    window: tuple = (0.0, 1.0)
    sampling: object = field(default_factory=lambda: UniformSampling(64))
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    estimators: tuple = ("Sinc", "PSWF", "RPSWF", "EPSWF")
    basis: BandlimitParams = field(
        default_factory=lambda: BandlimitParams(20, math.pi / 2.0, math.pi))
    n_terms: int | None = None
    sinc_bandwidth: float = 60.0
    ridge: RidgeConfig = field(default_factory=RidgeConfig)
    mcc: MccConfig = field(default_factory=MccConfig)
    seed: int = 0
    eval_grid_size: int = 2048

    def __post_init__(self):
        t0, t1 = self.window
        if not (t0 < t1):
            raise ValueError("window must be non-degenerate [t_start, t_end]")
        a, b = self.noise.burst_interval
        if a < t0 or b > t1:
            raise ValueError("noise burst_interval must lie within the window")
        if self.eval_grid_size < 64:
            raise ValueError("eval_grid_size must be >= 64")
        unknown = set(self.estimators) - set(ESTIMATOR_NAMES)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class EstimatorResult:
    name: str
    model: ReconstructionModel | None
    reconstruction: np.ndarray | None
    error: float | None
    rmse: float | None
    runtime: float
    mcc_report: object = None
    failure: str | None = None


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    samples: SampleSet
    clean_values: np.ndarray
    reference_times: np.ndarray
    reference_values: np.ndarray
    results: tuple

    def result(self, name: str) -> EstimatorResult:
        for res in self.results:
            if res.name == name:
                return res
        raise KeyError(name)

    def to_dict(self) -> dict:
        """JSON document; deterministic for a given config + seed (the
        runtime field is deliberately left out)."""
        entries = []
        for res in self.results:
            entry = {
                "name": res.name,
                "error": None if res.error is None else float(res.error),
                "rmse": None if res.rmse is None else float(res.rmse),
                "n_coefficients": (None if res.model is None
                                   else int(res.model.coefficients.size)),
                "coefficient_norm": (None if res.model is None
                                     else float(np.linalg.norm(res.model.coefficients))),
                "mcc": None if res.mcc_report is None else res.mcc_report.to_dict(),
                "failure": res.failure,
            }
            entries.append(entry)
        return {
            "config": config_to_dict(self.config),
            "samples": {
                "times": [float(x) for x in self.samples.times],
                "values": [float(x) for x in self.samples.values],
                "clean": [float(x) for x in self.clean_values],
            },
            "reference": {
                "times": [float(x) for x in self.reference_times],
                "values": [float(x) for x in self.reference_values],
            },
            "estimators": entries,
        }


def sample_grid(config: ExperimentConfig) -> np.ndarray:
    """Sample times for the configured scheme, strictly increasing."""
    t0, t1 = config.window
    sampling = config.sampling
    if isinstance(sampling, UniformSampling):
        times = np.linspace(t0, t1, sampling.count)
    elif isinstance(sampling, NonUniformSampling):
        a, b = sampling.dense_interval
        if a < t0 or b > t1:
            raise ValueError("dense_interval must lie inside the window")
        pieces = [np.linspace(a, b, sampling.dense_count)]
        # sparse points over the remainder, split proportionally to length,
        # excluding endpoints shared with the dense block
        gaps = [(t0, a), (b, t1)]
        lengths = np.array([max(hi - lo, 0.0) for lo, hi in gaps])
        total = lengths.sum()
        if total > 0 and sampling.sparse_count > 0:
            counts = np.floor(sampling.sparse_count * lengths / total).astype(int)
            while counts.sum() < sampling.sparse_count:
                counts[int(np.argmax(lengths / (counts + 1)))] += 1
            lo, hi = gaps[0]
            if counts[0] > 0:
                pieces.append(np.linspace(lo, hi, counts[0] + 1)[:-1])
            lo, hi = gaps[1]
            if counts[1] > 0:
                pieces.append(np.linspace(lo, hi, counts[1] + 1)[1:])
        times = np.unique(np.concatenate(pieces))
    else:
        raise ValueError(f"unknown sampling scheme: {sampling!r}")
    if times.size < 2:
        raise ValueError("sampling produced fewer than 2 points")
    return times


def inject_noise(clean, times, noise: NoiseConfig, rng) -> np.ndarray:
    """Add background noise everywhere plus burst contamination inside the
    burst interval.  Deterministic given a seeded generator: the number of
    draws does not depend on the noise amplitudes."""
    clean = np.asarray(clean, dtype=float)
    times = np.asarray(times, dtype=float)
    if clean.shape != times.shape:
        raise ValueError("clean values and times must have equal length")
    a, b = noise.burst_interval
    in_burst = (times >= a) & (times <= b)
    out = clean + noise.base_std * rng.standard_normal(clean.size)
    if isinstance(noise.burst_kind, GaussianBurst):
        burst = noise.burst_std * rng.standard_normal(clean.size)
        out = out + np.where(in_burst, burst, 0.0)
    else:
        kind = noise.burst_kind
        hit = rng.random(clean.size) < kind.probability
        spikes = kind.amplitude * rng.uniform(-1.0, 1.0, clean.size)
        out = out + np.where(in_burst & hit, spikes, 0.0)
    return out


def reconstruction_error(model: ReconstructionModel, reference_grid,
                         reference_values) -> float:
    """Unnormalized squared L2 error of the synthesized model over the grid."""
    reference_grid = np.asarray(reference_grid, dtype=float)
    reference_values = np.asarray(reference_values, dtype=float)
    if reference_grid.shape != reference_values.shape:
        raise ValueError("reference grid and values must have equal length")
    estimate = synthesize(model, reference_grid)
    diff = estimate - reference_values
    return float(diff @ diff)


def _fit_one(name: str, sinc_dict: Dictionary, pswf_dict: Dictionary,
             y: np.ndarray, config: ExperimentConfig):
    dictionary = sinc_dict if name in ("Sinc", "RSinc", "ESinc") else pswf_dict
    mcc_report = None
    if name in ("Sinc", "PSWF"):
        coefficients = solve_least_squares(dictionary, y)
    elif name in ("RSinc", "RPSWF"):
        coefficients = solve_ridge(dictionary, y, config.ridge)
    else:
        mcc_report = solve_mcc(dictionary, y, config.mcc)
        coefficients = mcc_report.coefficients
    return ReconstructionModel(coefficients=coefficients, kind=dictionary.kind), mcc_report


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every configured estimator on one seeded noise realization.

    Solver failures are recorded per estimator (with the report still
    produced) rather than aborting the run.
    """
    t0, t1 = config.window
    times = sample_grid(config)
    clean = generate_test_signal(times)
    rng = np.random.default_rng(config.seed)
    y = inject_noise(clean, times, config.noise, rng)
    samples = SampleSet(times=times, values=y)

    basis = compute_basis(config.basis)
    n_terms = config.n_terms if config.n_terms is not None else default_term_count(basis)
    shift = 0.5 * (t0 + t1)
    pswf_dict = build_pswf_dictionary(times, basis, n_terms, time_shift=shift)
    sinc_dict = build_sinc_dictionary(times, config.sinc_bandwidth)

    grid = np.linspace(t0, t1, config.eval_grid_size)
    reference = generate_test_signal(grid)

    results = []
    for name in config.estimators:
        start = time.perf_counter()
        try:
            model, mcc_report = _fit_one(name, sinc_dict, pswf_dict, y, config)
            reconstruction = synthesize(model, grid)
            diff = reconstruction - reference
            error = float(diff @ diff)
            rmse = math.sqrt(error / grid.size)
            results.append(EstimatorResult(
                name=name, model=model, reconstruction=reconstruction,
                error=error, rmse=rmse, runtime=time.perf_counter() - start,
                mcc_report=mcc_report))
        except (np.linalg.LinAlgError, RuntimeError) as exc:
            results.append(EstimatorResult(
                name=name, model=None, reconstruction=None, error=None,
                rmse=None, runtime=time.perf_counter() - start,
                failure=f"{type(exc).__name__}: {exc}"))
    return ExperimentReport(
        config=config, samples=samples, clean_values=clean,
        reference_times=grid, reference_values=reference,
        results=tuple(results))


# --- presets -------------------------------------------------------------

def preset_config(name: str, seed: int = 0) -> ExperimentConfig:
    """Named experiment setups for the two synthetic studies.

    paper-uniform      64 uniform samples, heavy Gaussian burst in [0, 0.2].
    paper-nonuniform   dense sampling of [0, 0.2] plus sparse coverage of
                       the rest, impulsive spikes in the dense interval.
    """
    basis = BandlimitParams(half_length=20, time_bandwidth=math.pi / 2.0, omega0=math.pi)
    common = dict(
        window=(0.0, 1.0),
        basis=basis,
        sinc_bandwidth=60.0,
        ridge=RidgeConfig(lam=0.1),
        mcc=MccConfig(lam=1.0, kernel_policy=AdaptiveKernel(), max_iterations=100,
                      tolerance=1e-8),
        seed=seed,
        eval_grid_size=2048,
    )
    if name == "paper-uniform":
        return ExperimentConfig(
            sampling=UniformSampling(64),
            noise=NoiseConfig(base_std=0.05, burst_interval=(0.0, 0.2), burst_std=8.0,
                              burst_kind=GaussianBurst()),
            estimators=("Sinc", "PSWF", "RPSWF", "EPSWF"),
            **common)
    if name == "paper-nonuniform":
        return ExperimentConfig(
            sampling=NonUniformSampling(dense_count=40, dense_interval=(0.0, 0.2),
                                        sparse_count=24),
            noise=NoiseConfig(base_std=0.05, burst_interval=(0.0, 0.2), burst_std=0.0,
                              burst_kind=UniformSpikes(amplitude=1.0)),
            estimators=("RSinc", "ESinc", "RPSWF", "EPSWF"),
            **common)
    raise ValueError(f"unknown preset {name!r}; expected 'paper-uniform' or 'paper-nonuniform'")


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    return replace(config, seed=seed)


# --- config (de)serialization -------------------------------------------

def config_to_dict(config: ExperimentConfig) -> dict:
    sampling = config.sampling
    if isinstance(sampling, UniformSampling):
        sampling_doc = {"kind": "uniform", "count": sampling.count}
    else:
        sampling_doc = {"kind": "nonuniform", "dense_count": sampling.dense_count,
                        "dense_interval": list(sampling.dense_interval),
                        "sparse_count": sampling.sparse_count}
    kind = config.noise.burst_kind
    if isinstance(kind, GaussianBurst):
        kind_doc = {"kind": "gaussian"}
    else:
        kind_doc = {"kind": "uniform_spikes", "amplitude": kind.amplitude,
                    "probability": kind.probability}
    policy = config.mcc.kernel_policy
    if isinstance(policy, FixedKernel):
        policy_doc = {"kind": "fixed", "kernel_sigma": policy.kernel_sigma}
    else:
        policy_doc = {"kind": "adaptive", "sigma_min": policy.sigma_min}
    return {
        "window": list(config.window),
        "sampling": sampling_doc,
        "noise": {
            "base_std": config.noise.base_std,
            "burst_interval": list(config.noise.burst_interval),
            "burst_std": config.noise.burst_std,
            "burst_kind": kind_doc,
        },
        "estimators": list(config.estimators),
        "basis": {
            "half_length": int(config.basis.half_length),
            "time_bandwidth": float(config.basis.time_bandwidth),
            "omega0": float(config.basis.omega0),
        },
        "n_terms": config.n_terms,
        "sinc_bandwidth": config.sinc_bandwidth,
        "ridge": {"lam": config.ridge.lam},
        "mcc": {
            "lam": config.mcc.lam,
            "kernel_policy": policy_doc,
            "max_iterations": config.mcc.max_iterations,
            "tolerance": config.mcc.tolerance,
        },
        "seed": int(config.seed),
        "eval_grid_size": config.eval_grid_size,
    }


def config_from_dict(doc: dict) -> ExperimentConfig:
    sampling_doc = doc.get("sampling", {"kind": "uniform", "count": 64})
    if sampling_doc["kind"] == "uniform":
        sampling = UniformSampling(int(sampling_doc["count"]))
    elif sampling_doc["kind"] == "nonuniform":
        sampling = NonUniformSampling(
            dense_count=int(sampling_doc["dense_count"]),
            dense_interval=tuple(sampling_doc["dense_interval"]),
            sparse_count=int(sampling_doc["sparse_count"]))
    else:
        raise ValueError(f"unknown sampling kind {sampling_doc['kind']!r}")

    noise_doc = doc.get("noise", {})
    kind_doc = noise_doc.get("burst_kind", {"kind": "gaussian"})
    if isinstance(kind_doc, str):
        kind_doc = {"kind": kind_doc}
    if kind_doc["kind"] == "gaussian":
        burst_kind = GaussianBurst()
    elif kind_doc["kind"] == "uniform_spikes":
        burst_kind = UniformSpikes(amplitude=float(kind_doc["amplitude"]),
                                   probability=float(kind_doc.get("probability", 0.5)))
    else:
        raise ValueError(f"unknown burst kind {kind_doc['kind']!r}")
    noise = NoiseConfig(
        base_std=float(noise_doc.get("base_std", 0.05)),
        burst_interval=tuple(noise_doc.get("burst_interval", (0.0, 0.2))),
        burst_std=float(noise_doc.get("burst_std", 2.0)),
        burst_kind=burst_kind)

    basis_doc = doc.get("basis", {})
    basis = BandlimitParams(
        half_length=int(basis_doc.get("half_length", 20)),
        time_bandwidth=float(basis_doc.get("time_bandwidth", math.pi / 2.0)),
        omega0=float(basis_doc.get("omega0", math.pi)))

    mcc_doc = doc.get("mcc", {})
    policy_doc = mcc_doc.get("kernel_policy", {"kind": "adaptive", "sigma_min": None})
    if policy_doc["kind"] == "fixed":
        policy = FixedKernel(float(policy_doc["kernel_sigma"]))
    elif policy_doc["kind"] == "adaptive":
        sigma_min = policy_doc.get("sigma_min")
        policy = AdaptiveKernel(None if sigma_min is None else float(sigma_min))
    else:
        raise ValueError(f"unknown kernel policy {policy_doc['kind']!r}")

    return ExperimentConfig(
        window=tuple(doc.get("window", (0.0, 1.0))),
        sampling=sampling,
        noise=noise,
        estimators=tuple(doc.get("estimators", ("Sinc", "PSWF", "RPSWF", "EPSWF"))),
        basis=basis,
        n_terms=doc.get("n_terms"),
        sinc_bandwidth=float(doc.get("sinc_bandwidth", 60.0)),
        ridge=RidgeConfig(lam=float(doc.get("ridge", {}).get("lam", 1e-3))),
        mcc=MccConfig(
            lam=float(mcc_doc.get("lam", 1e-3)),
            kernel_policy=policy,
            max_iterations=int(mcc_doc.get("max_iterations", 100)),
            tolerance=float(mcc_doc.get("tolerance", 1e-8))),
        seed=int(doc.get("seed", 0)),
        eval_grid_size=int(doc.get("eval_grid_size", 2048)))
