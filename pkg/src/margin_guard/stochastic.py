"""Random perturbation models, analytic switching bounds, and Monte Carlo.

Two independent-noise models are supported: uniform on the ball of radius rho
(the planar disk generalized to d dimensions) and isotropic Gaussian with
standard deviation sigma. The switching probability of a point is bounded by
the tail P(norm(noise) >= margin / 2); both tails are evaluated exactly, and
the Monte Carlo estimators exist to be compared against those bounds.

Randomness discipline: one master seed; the stream for trial t is derived
from (seed, t) by seed-sequence splitting, so reports are reproducible
regardless of how trials would be scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .geometry import Assignment, CenterSet, PointConfig, assign_nearest

__all__ = [
    "PerturbationModel",
    "MonteCarloReport",
    "SweepRow",
    "SweepResult",
    "trial_rng",
    "sample_perturbation",
    "switch_probability_bound",
    "expected_switch_bound",
    "expected_distance_bound",
    "label_pair_distance",
    "monte_carlo",
    "sweep_table",
]

BOUNDED_DISK = "bounded_disk"
GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class PerturbationModel:
    """Noise specification: kind, scale parameter, and ambient dimension."""

    kind: str
    scale: float
    dim: int

    def __post_init__(self):
        if self.kind not in (BOUNDED_DISK, GAUSSIAN):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind == BOUNDED_DISK and self.scale <= 0:
            raise ValueError("bounded-disk radius must be positive")
        if self.kind == GAUSSIAN and self.scale < 0:
            raise ValueError("gaussian scale must be nonnegative")

    @classmethod
    def bounded_disk(cls, rho: float, dim: int = 2) -> "PerturbationModel":
        """Uniform noise on the ball of radius rho; norm <= rho always."""
        return cls(kind=BOUNDED_DISK, scale=rho, dim=dim)

    @classmethod
    def gaussian(cls, sigma: float, dim: int = 2) -> "PerturbationModel":
        """Isotropic Gaussian noise with independent N(0, sigma^2) coordinates.

        sigma = 0 is allowed as the degenerate no-noise case used in tests.
        """
        return cls(kind=GAUSSIAN, scale=sigma, dim=dim)

    def describe(self) -> dict:
        param = "rho" if self.kind == BOUNDED_DISK else "sigma"
        return {"kind": self.kind, param: float(self.scale), "dim": self.dim}


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent, reproducible stream for one trial of one master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def _noise(model: PerturbationModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """(n, dim) array of independent per-index noise vectors."""
    if model.kind == GAUSSIAN:
        return rng.standard_normal((n, model.dim)) * model.scale
    # uniform on the ball: random direction, radius rho * U^(1/d)
    g = rng.standard_normal((n, model.dim))
    norms = np.linalg.norm(g, axis=1)
    while (norms == 0).any():  # essentially impossible, but keeps directions defined
        redo = norms == 0
        g[redo] = rng.standard_normal((int(redo.sum()), model.dim))
        norms = np.linalg.norm(g, axis=1)
    radii = model.scale * rng.random(n) ** (1.0 / model.dim)
    eta = g * (radii / norms)[:, None]
    # the norm bound is a hard guarantee; nudge any float overshoot back inside
    out_norms = np.linalg.norm(eta, axis=1)
    while (over := out_norms > model.scale).any():
        eta[over] *= np.nextafter(1.0, 0.0)
        out_norms = np.linalg.norm(eta, axis=1)
    return eta


def sample_perturbation(model: PerturbationModel, config: PointConfig, seed) -> PointConfig:
    """One perturbed configuration X' = X + noise with independent per-index noise.

    ``seed`` may be an integer or a numpy Generator. For the bounded-disk
    model every per-point displacement is <= rho without exception.
    """
    if model.dim != config.d:
        raise ValueError(f"model dimension {model.dim} does not match configuration dimension {config.d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return PointConfig(config.points + _noise(model, config.n, rng))


def switch_probability_bound(gamma: float, model: PerturbationModel) -> float:
    """Exact tail probability P(norm(noise) >= gamma / 2) for the model.

    Bounded ball: 1 - (gamma / (2 rho))^d for gamma / 2 <= rho, else 0.
    Gaussian: the chi-square upper tail Q(d/2, gamma^2 / (8 sigma^2)), via the
    regularized upper incomplete gamma function.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0.0:
        return 1.0
    if model.kind == BOUNDED_DISK:
        ratio = gamma / (2.0 * model.scale)
        if ratio >= 1.0:
            return 0.0
        return 1.0 - ratio**model.dim
    if model.scale == 0.0:
        return 0.0
    return float(gammaincc(model.dim / 2.0, gamma**2 / (8.0 * model.scale**2)))


def expected_switch_bound(assignment: Assignment, model: PerturbationModel) -> float:
    """Upper bound on the expected number of switched indices.

    Sum over indices of the per-index tail bound; linearity of expectation
    needs no independence beyond what the model already provides.
    """
    return float(sum(switch_probability_bound(float(g), model) for g in assignment.margins))


def expected_distance_bound(assignment: Assignment, model: PerturbationModel) -> float:
    """Upper bound min(1, 2/(n-1) * expected switch bound) on E[distance]."""
    return min(1.0, (2.0 / (assignment.n - 1)) * expected_switch_bound(assignment, model))


def label_pair_distance(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    """Partition distance between the groupings induced by two label vectors.

    Same quantity as partition_distance(induced partitions), computed directly
    from labels: pairs are in the same block exactly when their labels match.
    """
    la = np.asarray(labels_a)
    lb = np.asarray(labels_b)
    if la.shape != lb.shape or la.ndim != 1 or la.size < 2:
        raise ValueError("label vectors must be equal-length 1-d arrays, n >= 2")
    same_a = la[:, None] == la[None, :]
    same_b = lb[:, None] == lb[None, :]
    iu, ju = np.triu_indices(la.size, k=1)
    return float((same_a != same_b)[iu, ju].sum()) / (la.size * (la.size - 1) // 2)


@dataclass(frozen=True)
class MonteCarloReport:
    """Empirical switching estimates next to their analytic bounds.

    mean_switched_count is defined as the sum of the per-index switch
    frequencies, so the linearity identity between the two holds exactly in
    floating point. trial_switch_counts / trial_distances retain the raw
    per-trial trace for CSV emission.
    """

    trials: int
    seed: int
    model: PerturbationModel
    per_index_switch_frequency: np.ndarray
    mean_switched_count: float
    mean_partition_distance: float
    per_index_bound: np.ndarray
    expected_switch_bound: float
    expected_distance_bound: float
    trial_switch_counts: np.ndarray
    trial_distances: np.ndarray

    @property
    def aggregate_bounds(self) -> tuple[float, float]:
        return (self.expected_switch_bound, self.expected_distance_bound)

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "model": self.model.describe(),
            "n": int(self.per_index_switch_frequency.size),
            "per_index_switch_frequency": [float(v) for v in self.per_index_switch_frequency],
            "mean_switched_count": float(self.mean_switched_count),
            "mean_partition_distance": float(self.mean_partition_distance),
            "per_index_bound": [float(v) for v in self.per_index_bound],
            "expected_switch_bound": float(self.expected_switch_bound),
            "expected_distance_bound": float(self.expected_distance_bound),
        }


def monte_carlo(
    config: PointConfig,
    centers: CenterSet,
    model: PerturbationModel,
    trials: int,
    seed: int,
) -> MonteCarloReport:
    """Estimate switching behavior over independent perturbation trials.

    Each trial perturbs the configuration, recomputes the nearest-center
    labels, and records the per-index switch indicators, the switched count,
    and the partition distance to the unperturbed partition. Reports are
    bit-reproducible given (seed, trials, model, config, centers).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if model.dim != config.d:
        raise ValueError(f"model dimension {model.dim} does not match configuration dimension {config.d}")
    base = assign_nearest(config, centers)
    points = config.points
    cpts = centers.centers
    base_labels = base.labels

    switch_counts = np.zeros(config.n, dtype=np.int64)
    trial_switches = np.empty(trials, dtype=np.int64)
    trial_dists = np.empty(trials, dtype=float)
    for t in range(trials):
        rng = trial_rng(seed, t)
        perturbed = points + _noise(model, config.n, rng)
        dist = np.linalg.norm(perturbed[:, None, :] - cpts[None, :, :], axis=2)
        labels = dist.argmin(axis=1) + 1
        switched = labels != base_labels
        switch_counts += switched
        trial_switches[t] = int(switched.sum())
        trial_dists[t] = label_pair_distance(base_labels, labels)

    freq = switch_counts / trials
    per_index_bound = np.array(
        [switch_probability_bound(float(g), model) for g in base.margins]
    )
    total_bound = expected_switch_bound(base, model)
    return MonteCarloReport(
        trials=trials,
        seed=seed,
        model=model,
        per_index_switch_frequency=freq,
        mean_switched_count=float(freq.sum()),
        mean_partition_distance=float(trial_dists.mean()),
        per_index_bound=per_index_bound,
        expected_switch_bound=total_bound,
        expected_distance_bound=min(1.0, (2.0 / (config.n - 1)) * total_bound),
        trial_switch_counts=trial_switches,
        trial_distances=trial_dists,
    )


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    mean_distance: float
    max_distance: float
    below_threshold: bool


@dataclass(frozen=True)
class SweepResult:
    min_margin: float
    threshold: float
    trials: int
    seed: int
    rows: tuple[SweepRow, ...]

    def to_json_dict(self) -> dict:
        return {
            "min_margin": float(self.min_margin),
            "threshold": float(self.threshold),
            "trials": self.trials,
            "seed": self.seed,
            "rows": [
                {
                    "epsilon": float(r.epsilon),
                    "mean_distance": float(r.mean_distance),
                    "max_distance": float(r.max_distance),
                    "below_threshold": r.below_threshold,
                }
                for r in self.rows
            ],
        }


def _sweep_rng(seed: int, epsilon: float, trial: int) -> np.random.Generator:
    # keyed by the epsilon value itself (not its grid position), so adding
    # grid points never changes existing rows
    eps_bits = int(np.float64(epsilon).view(np.uint64))
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, eps_bits), spawn_key=(trial,)))


def sweep_table(
    config: PointConfig,
    centers: CenterSet,
    grid,
    trials: int,
    seed: int,
) -> SweepResult:
    """Partition-distance statistics under bounded noise of radius epsilon.

    For each epsilon on the grid, runs ``trials`` independent bounded-noise
    perturbations and records the mean and max partition distance. Every
    epsilon strictly below min_margin / 2 is marked; in that region the
    distance is provably zero in every trial.
    """
    grid = [float(e) for e in grid]
    if len(grid) < 2:
        raise ValueError("sweep grid needs at least 2 epsilon values")
    if any(e <= 0 for e in grid):
        raise ValueError("sweep epsilons must be positive")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = assign_nearest(config, centers)
    threshold = base.min_margin / 2.0
    rows = []
    for eps in grid:
        model = PerturbationModel.bounded_disk(eps, dim=config.d)
        dists = np.empty(trials)
        for t in range(trials):
            rng = _sweep_rng(seed, eps, t)
            perturbed = config.points + _noise(model, config.n, rng)
            dist = np.linalg.norm(perturbed[:, None, :] - centers.centers[None, :, :], axis=2)
            labels = dist.argmin(axis=1) + 1
            dists[t] = label_pair_distance(base.labels, labels)
        rows.append(
            SweepRow(
                epsilon=eps,
                mean_distance=float(dists.mean()),
                max_distance=float(dists.max()),
                below_threshold=eps < threshold,
            )
        )
    return SweepResult(
        min_margin=base.min_margin,
        threshold=threshold,
        trials=trials,
        seed=seed,
        rows=tuple(rows),
    )
