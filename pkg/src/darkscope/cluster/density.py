"""Hierarchical density-based clustering with noise.

Full pipeline, no shortcuts: pairwise core distances (k = min_cluster_size,
self included), mutual-reachability distances, a Prim minimum spanning tree
with stable (weight, index, index) tie-breaking, a condensed cluster tree,
and excess-of-mass cluster selection. Points outside every selected cluster
get the NOISE label (-1).

Zero distances (exact duplicate points) would give infinite density
(lambda = 1/0); they are capped at twice the largest finite lambda so the
stability arithmetic stays finite while duplicates remain the most tightly
bound members of their cluster.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

NOISE = -1


@dataclass(frozen=True)
class ClusterParams:
    min_cluster_size: int = 10
    metric: str = "l2"  # l1 | l2

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")
        if self.metric not in ("l1", "l2"):
            raise ValueError(f"metric must be l1 or l2, got {self.metric!r}")


@dataclass
class ClusterAssignment:
    labels: np.ndarray  # per-point cluster id >= 0, or NOISE
    n_clusters: int
    params: ClusterParams
    warning: str = ""
    cluster_points: dict[int, list[int]] = field(default_factory=dict)

    def partition_key(self) -> tuple:
        """Label-order-insensitive view of the partition, for comparisons."""
        groups: dict[int, list[int]] = {}
        for idx, label in enumerate(self.labels):
            if label != NOISE:
                groups.setdefault(int(label), []).append(idx)
        return tuple(sorted(tuple(v) for v in groups.values()))


def pairwise_distances(points: np.ndarray, metric: str) -> np.ndarray:
    x = np.asarray(points, dtype=float)
    if metric == "l1":
        return np.abs(x[:, None, :] - x[None, :, :]).sum(axis=2)
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def core_distances(dist: np.ndarray, k: int) -> np.ndarray:
    """Distance to the k-th nearest neighbor, the point itself included."""
    n = dist.shape[0]
    k = min(k, n)
    return np.sort(dist, axis=1)[:, k - 1]


def mutual_reachability(dist: np.ndarray, core: np.ndarray) -> np.ndarray:
    return np.maximum(dist, np.maximum(core[:, None], core[None, :]))


def minimum_spanning_tree(weights: np.ndarray) -> list[tuple[int, int, float]]:
    """Prim's algorithm over the dense graph.

    Ties break on the smallest candidate index, and a vertex's tree-side
    parent only changes on a strict improvement, so the edge list is a pure
    function of the input matrix.
    """
    n = weights.shape[0]
    if n == 0:
        return []
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    best = weights[0].copy()
    parent = np.zeros(n, dtype=int)
    best[0] = np.inf
    edges: list[tuple[int, int, float]] = []
    for _ in range(n - 1):
        candidate = int(np.argmin(np.where(visited, np.inf, best)))
        u, v = int(parent[candidate]), candidate
        edges.append((min(u, v), max(u, v), float(best[candidate])))
        visited[candidate] = True
        improved = ~visited & (weights[candidate] < best)
        parent[improved] = candidate
        best = np.where(improved, weights[candidate], best)
        best[candidate] = np.inf
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    return edges


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def single_linkage_tree(edges: list[tuple[int, int, float]], n: int) -> list[tuple[int, int, float, int]]:
    """Merge list in scipy linkage style: row i merges two current roots into
    node n + i at the given distance; the last column is the merged size."""
    uf = _UnionFind(2 * n - 1 if n else 0)
    node_of: dict[int, int] = {i: i for i in range(n)}
    size: dict[int, int] = {i: 1 for i in range(n)}
    merges = []
    next_node = n
    for u, v, w in edges:
        ru, rv = uf.find(u), uf.find(v)
        a, b = node_of[ru], node_of[rv]
        merged_size = size[a] + size[b]
        merges.append((a, b, w, merged_size))
        uf.union(ru, rv)
        root = uf.find(ru)
        node_of[root] = next_node
        size[next_node] = merged_size
        next_node += 1
    return merges


@dataclass
class _CondensedRow:
    parent: int
    child: int  # point id (< n) or cluster id (>= n)
    lambda_val: float
    child_size: int


def condense_tree(
    merges: list[tuple[int, int, float, int]],
    n: int,
    min_cluster_size: int,
) -> list[_CondensedRow]:
    if not merges:
        return []
    children: dict[int, tuple[int, int, float]] = {}
    for i, (a, b, w, _size) in enumerate(merges):
        children[n + i] = (a, b, w)
    sizes: dict[int, int] = {i: 1 for i in range(n)}
    for i, (a, b, _w, size) in enumerate(merges):
        sizes[n + i] = size

    finite_lambdas = [1.0 / w for _a, _b, w, _s in merges if w > 0.0]
    lambda_cap = 2.0 * max(finite_lambdas) if finite_lambdas else 1.0

    def lam(distance: float) -> float:
        return min(1.0 / distance, lambda_cap) if distance > 0.0 else lambda_cap

    rows: list[_CondensedRow] = []
    root = n + len(merges) - 1
    root_cluster = n
    next_cluster = n + 1

    def leaves_under(node: int) -> list[int]:
        stack, out = [node], []
        while stack:
            cur = stack.pop()
            if cur < n:
                out.append(cur)
            else:
                a, b, _ = children[cur]
                stack.extend((a, b))
        return out

    # Iterative walk: (dendrogram node, condensed cluster it belongs to).
    stack: list[tuple[int, int]] = [(root, root_cluster)]
    while stack:
        node, cluster = stack.pop()
        if node < n:
            continue
        a, b, w = children[node]
        lambda_val = lam(w)
        size_a = sizes[a]
        size_b = sizes[b]
        big_a = size_a >= min_cluster_size
        big_b = size_b >= min_cluster_size
        if big_a and big_b:
            for side, side_size in ((a, size_a), (b, size_b)):
                new_cluster = next_cluster
                next_cluster += 1
                rows.append(_CondensedRow(cluster, new_cluster, lambda_val, side_size))
                stack.append((side, new_cluster))
        elif big_a or big_b:
            big, small = (a, b) if big_a else (b, a)
            for point in sorted(leaves_under(small)):
                rows.append(_CondensedRow(cluster, point, lambda_val, 1))
            stack.append((big, cluster))
        else:
            for point in sorted(leaves_under(node)):
                rows.append(_CondensedRow(cluster, point, lambda_val, 1))
    return rows


def _select_excess_of_mass(rows: list[_CondensedRow], n: int) -> set[int]:
    if not rows:
        return set()
    birth: dict[int, float] = {n: 0.0}
    child_clusters: dict[int, list[int]] = {}
    for row in rows:
        if row.child >= n:
            birth[row.child] = row.lambda_val
            child_clusters.setdefault(row.parent, []).append(row.child)

    stability: dict[int, float] = {c: 0.0 for c in birth}
    for row in rows:
        stability[row.parent] += (row.lambda_val - birth[row.parent]) * row.child_size

    selected: dict[int, bool] = {}
    score: dict[int, float] = {}
    for cluster in sorted(birth, reverse=True):
        kids = child_clusters.get(cluster, [])
        child_sum = sum(score[k] for k in kids)
        if cluster == n:
            # Root stays unselected (a single all-encompassing cluster says
            # nothing); its score only propagates.
            selected[cluster] = False
            score[cluster] = child_sum
        elif not kids or stability[cluster] > child_sum:
            selected[cluster] = True
            score[cluster] = stability[cluster]
        else:
            selected[cluster] = False
            score[cluster] = child_sum

    # Enforce the antichain: deselect descendants of selected clusters.
    result = set()
    for cluster in sorted(birth):  # top-down
        if not selected.get(cluster, False):
            continue
        ancestor_selected = False
        probe = cluster
        parent_of = {row.child: row.parent for row in rows if row.child >= n}
        while probe in parent_of:
            probe = parent_of[probe]
            if probe in result:
                ancestor_selected = True
                break
        if not ancestor_selected:
            result.add(cluster)
    return result


def hdbscan_cluster(points: np.ndarray, params: ClusterParams) -> ClusterAssignment:
    """Cluster `points`; deterministic for a given input order."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if n == 0:
        return ClusterAssignment(np.empty(0, dtype=int), 0, params, "no points")
    if n < params.min_cluster_size:
        log.warning("%d points < min_cluster_size=%d: everything is noise",
                    n, params.min_cluster_size)
        return ClusterAssignment(
            np.full(n, NOISE, dtype=int), 0, params,
            f"{n} points < min_cluster_size={params.min_cluster_size}",
        )

    dist = pairwise_distances(x, params.metric)
    core = core_distances(dist, params.min_cluster_size)
    mreach = mutual_reachability(dist, core)
    edges = minimum_spanning_tree(mreach)
    merges = single_linkage_tree(edges, n)
    rows = condense_tree(merges, n, params.min_cluster_size)
    chosen = _select_excess_of_mass(rows, n)

    parent_of_cluster = {row.child: row.parent for row in rows if row.child >= n}
    point_parent = {row.child: row.parent for row in rows if row.child < n}

    labels = np.full(n, NOISE, dtype=int)
    members: dict[int, list[int]] = {c: [] for c in chosen}
    for point in range(n):
        cluster = point_parent.get(point)
        while cluster is not None:
            if cluster in chosen:
                members[cluster].append(point)
                break
            cluster = parent_of_cluster.get(cluster)

    # Stable public ids: order selected clusters by their smallest member.
    ordered = sorted((min(pts), c) for c, pts in members.items() if pts)
    cluster_points: dict[int, list[int]] = {}
    for new_id, (_, old) in enumerate(ordered):
        for point in members[old]:
            labels[point] = new_id
        cluster_points[new_id] = sorted(members[old])

    return ClusterAssignment(labels, len(cluster_points), params, "", cluster_points)
