"""Partitions of the index set, the induced partition of an assignment, and
the normalized pairwise-disagreement metric.

Partitions are label-free: they record only which indices are grouped
together, never which center produced a block. Ground-set indices are 1-based
to match the file formats and reporting surfaces.
"""

from __future__ import annotations

import numpy as np

from .geometry import Assignment

__all__ = [
    "Partition",
    "PairRelation",
    "induced_partition",
    "pair_disagreements",
    "partition_distance",
    "switched_index_distance_bound",
    "iter_partitions",
]


class Partition:
    """A partition of {1, ..., n} with a canonical block representation.

    Blocks are stored sorted by smallest element, elements ascending, so two
    partitions are equal exactly when their canonical forms are equal.
    """

    __slots__ = ("_blocks", "_n", "_ids")

    def __init__(self, blocks, n: int):
        if n < 1:
            raise ValueError("ground-set size must be >= 1")
        seen: set[int] = set()
        normalized: list[tuple[int, ...]] = []
        for block in blocks:
            b = tuple(sorted(int(i) for i in block))
            if not b:
                raise ValueError("blocks must be nonempty")
            for i in b:
                if not 1 <= i <= n:
                    raise ValueError(f"index {i} outside ground set 1..{n}")
                if i in seen:
                    raise ValueError(f"index {i} appears in more than one block")
                seen.add(i)
            normalized.append(b)
        if len(seen) != n:
            missing = sorted(set(range(1, n + 1)) - seen)
            raise ValueError(f"blocks do not cover the ground set; missing {missing}")
        normalized.sort(key=lambda b: b[0])
        self._blocks = tuple(normalized)
        self._n = n
        ids = np.empty(n, dtype=np.intp)
        for bid, block in enumerate(self._blocks):
            for i in block:
                ids[i - 1] = bid
        ids.setflags(write=False)
        self._ids = ids

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Partition grouping 1-based indices by equal label values."""
        arr = np.asarray(labels)
        groups: dict = {}
        for pos, lab in enumerate(arr.tolist()):
            groups.setdefault(lab, []).append(pos + 1)
        return cls(groups.values(), n=arr.size)

    @property
    def n(self) -> int:
        return self._n

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self._blocks

    @property
    def block_count(self) -> int:
        return len(self._blocks)

    def block_ids(self) -> np.ndarray:
        """Array of length n mapping point position i to its block id."""
        return self._ids

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self._blocks]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._n == other._n and self._blocks == other._blocks

    def __hash__(self) -> int:
        return hash((self._n, self._blocks))

    def __repr__(self) -> str:
        inner = ", ".join("{" + ", ".join(map(str, b)) + "}" for b in self._blocks)
        return "Partition({" + inner + "})"


class PairRelation:
    """Same-block indicators over the C(n,2) unordered index pairs.

    Pairs follow the lexicographic (i, j), i < j order. Construction from a
    raw indicator vector validates transitivity; a vector that is not the
    pair restriction of an equivalence relation is rejected.
    """

    __slots__ = ("n", "same")

    def __init__(self, same, n: int):
        if n < 2:
            raise ValueError("a pair relation needs n >= 2")
        vec = np.asarray(same, dtype=bool).copy()
        if vec.shape != (n * (n - 1) // 2,):
            raise ValueError(f"expected {n * (n - 1) // 2} pair indicators for n={n}")
        vec.setflags(write=False)
        self.same = vec
        self.n = n
        # Closing the marked pairs and re-deriving must reproduce the vector,
        # otherwise the relation is not transitive.
        rebuilt = PairRelation.from_partition(self.to_partition())
        if not np.array_equal(rebuilt.same, vec):
            raise ValueError("pair indicators do not form a transitive relation")

    @classmethod
    def from_partition(cls, p: Partition) -> "PairRelation":
        ids = p.block_ids()
        iu, ju = np.triu_indices(p.n, k=1)
        rel = object.__new__(cls)
        vec = ids[iu] == ids[ju]
        vec.setflags(write=False)
        rel.same = vec
        rel.n = p.n
        return rel

    def to_partition(self) -> Partition:
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        iu, ju = np.triu_indices(self.n, k=1)
        for i, j in zip(iu[self.same].tolist(), ju[self.same].tolist()):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        groups: dict[int, list[int]] = {}
        for pos in range(self.n):
            groups.setdefault(find(pos), []).append(pos + 1)
        return Partition(groups.values(), n=self.n)


def induced_partition(assignment: Assignment) -> Partition:
    """Partition whose blocks group indices assigned to the same center.

    Centers with no assigned points contribute no block, so the block count
    never exceeds the number of centers.
    """
    return Partition.from_labels(assignment.labels)


def pair_disagreements(p: Partition, q: Partition, method: str = "pairs") -> int:
    """Number of unordered index pairs whose same-block status differs.

    ``method="pairs"`` enumerates all pairs directly; ``method="contingency"``
    uses the block-size contingency table closed form. Both return the same
    exact integer.
    """
    if p.n != q.n:
        raise ValueError(f"ground-set sizes differ: {p.n} vs {q.n}")
    if method == "pairs":
        ids_p = p.block_ids()
        ids_q = q.block_ids()
        same_p = ids_p[:, None] == ids_p[None, :]
        same_q = ids_q[:, None] == ids_q[None, :]
        differ = same_p != same_q
        iu, ju = np.triu_indices(p.n, k=1)
        return int(differ[iu, ju].sum())
    if method == "contingency":
        table = np.zeros((p.block_count, q.block_count), dtype=np.int64)
        np.add.at(table, (p.block_ids(), q.block_ids()), 1)
        a = table.sum(axis=1)
        b = table.sum(axis=0)
        same_p_pairs = int((a * (a - 1) // 2).sum())
        same_q_pairs = int((b * (b - 1) // 2).sum())
        same_both = int((table * (table - 1) // 2).sum())
        return same_p_pairs + same_q_pairs - 2 * same_both
    raise ValueError(f"unknown method {method!r}")


def partition_distance(p: Partition, q: Partition) -> float:
    """Fraction of unordered index pairs on which two partitions disagree.

    A metric on partitions of a fixed ground set with values in [0, 1];
    zero exactly when the partitions are equal.
    """
    if p.n < 2:
        raise ValueError("partition distance needs n >= 2")
    total = p.n * (p.n - 1) // 2
    return pair_disagreements(p, q) / total


def switched_index_distance_bound(m: int, n: int) -> float:
    """Upper bound min(1, 2m/(n-1)) on the distance after m index switches."""
    if n < 2:
        raise ValueError("ground-set size must be >= 2")
    if not 0 <= m <= n:
        raise ValueError(f"switched count {m} outside 0..{n}")
    return min(1.0, 2.0 * m / (n - 1))


def iter_partitions(n: int):
    """Yield every partition of {1, ..., n} via restricted growth strings."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rgs = [0] * n
    maxes = [0] * n

    while True:
        groups: dict[int, list[int]] = {}
        for pos, g in enumerate(rgs):
            groups.setdefault(g, []).append(pos + 1)
        yield Partition(groups.values(), n=n)
        # advance the restricted growth string
        pos = n - 1
        while pos > 0 and rgs[pos] == maxes[pos - 1] + 1:
            pos -= 1
        if pos == 0:
            return
        rgs[pos] += 1
        maxes[pos] = max(maxes[pos - 1], rgs[pos])
        for later in range(pos + 1, n):
            rgs[later] = 0
            maxes[later] = maxes[pos]
