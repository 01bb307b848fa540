"""Parametric instability constructions with frozen expected partitions.

All three constructions share the two centers (-1, 0) and (1, 0), whose
decision boundary is the vertical line x = 0. Anchor points far from the
boundary pin the cluster structure while a near-boundary point (or column of
points) crosses under an arbitrarily small perturbation. Expected partitions
are embedded as data so regressions in assignment logic are caught against
fixed ground truth rather than recomputed values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CenterSet, PointConfig, perturbation_size
from .partitions import Partition

__all__ = [
    "STANDARD_CENTERS",
    "CounterexampleFixture",
    "single_point_instability",
    "many_point_instability",
    "near_boundary_instability",
]

STANDARD_CENTERS = CenterSet(np.array([[-1.0, 0.0], [1.0, 0.0]]))


@dataclass(frozen=True)
class CounterexampleFixture:
    kind: str
    config: PointConfig
    perturbed: PointConfig
    centers: CenterSet
    expected_before: Partition
    expected_after: Partition
    perturbation_size: float

    def __post_init__(self):
        if not np.array_equal(self.centers.centers, STANDARD_CENTERS.centers):
            raise ValueError("fixtures use the standard centers (-1,0), (1,0)")
        if self.expected_before == self.expected_after:
            raise ValueError("a counterexample must change the partition")
        actual = perturbation_size(self.config, self.perturbed)
        if actual != self.perturbation_size:
            raise ValueError(
                f"stored perturbation size {self.perturbation_size} != measured {actual}"
            )

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "centers": [[float(c) for c in row] for row in self.centers.centers],
            "points": [[float(c) for c in row] for row in self.config.points],
            "perturbed": [[float(c) for c in row] for row in self.perturbed.points],
            "expected_before": self.expected_before.to_lists(),
            "expected_after": self.expected_after.to_lists(),
            "perturbation_size": float(self.perturbation_size),
        }


def single_point_instability(epsilon: float) -> CounterexampleFixture:
    """Three points, one of which crosses the boundary under a 2*delta move.

    delta is chosen as epsilon / 4 so the move size epsilon / 2 stays strictly
    below epsilon. Anchors at (-2, 0) and (2, 0) keep their assignments; the
    point at (delta, 0) moves to (-delta, 0) and switches, changing the
    partition from {{1}, {2, 3}} to {{1, 3}, {2}}.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    delta = epsilon / 4.0
    config = PointConfig(np.array([[-2.0, 0.0], [2.0, 0.0], [delta, 0.0]]))
    perturbed = config.with_point(3, [-delta, 0.0])
    return CounterexampleFixture(
        kind="single_point",
        config=config,
        perturbed=perturbed,
        centers=STANDARD_CENTERS,
        expected_before=Partition([[1], [2, 3]], n=3),
        expected_after=Partition([[1, 3], [2]], n=3),
        perturbation_size=perturbation_size(config, perturbed),
    )


def many_point_instability(epsilon: float, m: int) -> CounterexampleFixture:
    """m near-boundary points all cross at once under a 2*delta move.

    Indices 1 and 2 are the anchors; indices 3..m+2 sit at (delta, i) and move
    to (-delta, i). The partition flips from {{1}, {2, ..., m+2}} to
    {{1, 3, ..., m+2}, {2}}.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    delta = epsilon / 4.0
    rows = [[-2.0, 0.0], [2.0, 0.0]] + [[delta, float(i)] for i in range(1, m + 1)]
    config = PointConfig(np.array(rows))
    moved = np.array(rows)
    moved[2:, 0] = -delta
    perturbed = PointConfig(moved)
    return CounterexampleFixture(
        kind="many_point",
        config=config,
        perturbed=perturbed,
        centers=STANDARD_CENTERS,
        expected_before=Partition([[1], list(range(2, m + 3))], n=m + 2),
        expected_after=Partition([[1] + list(range(3, m + 3)), [2]], n=m + 2),
        perturbation_size=perturbation_size(config, perturbed),
    )


def near_boundary_instability(delta: float) -> CounterexampleFixture:
    """Margin-parameterized variant: min margin 2*delta, move size 2*delta.

    Same geometry as the single-point construction but parameterized directly
    by the boundary offset, so both the margin and the partition-changing
    perturbation shrink together as delta -> 0.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    config = PointConfig(np.array([[-2.0, 0.0], [2.0, 0.0], [delta, 0.0]]))
    perturbed = config.with_point(3, [-delta, 0.0])
    return CounterexampleFixture(
        kind="near_boundary",
        config=config,
        perturbed=perturbed,
        centers=STANDARD_CENTERS,
        expected_before=Partition([[1], [2, 3]], n=3),
        expected_after=Partition([[1, 3], [2]], n=3),
        perturbation_size=perturbation_size(config, perturbed),
    )
