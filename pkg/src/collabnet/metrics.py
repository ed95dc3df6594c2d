"""Per-layer network metric suite.

Local metrics (closeness, betweenness, degree, clustering) are computed per
node and averaged over the layer; global metrics (density, connected
components) describe the whole graph. Reporting removes isolated nodes
before measuring, so the numbers describe the connected part of a layer.

Closeness here is the reciprocal-distance form: sum over other nodes of
1/d(v, u), with unreachable nodes contributing 0. Many graph libraries call
this "harmonic centrality" and reserve "closeness" for 1/sum(d); this module
deliberately uses the reciprocal-distance definition throughout.

Betweenness is unnormalized and counts each unordered {s, t} pair once;
pairs with no connecting path contribute 0.
"""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .layers import NetworkLayer

__all__ = [
    "LayerMetricsReport",
    "remove_isolated",
    "degree",
    "closeness",
    "betweenness",
    "clustering",
    "density",
    "components",
    "report",
    "reports_to_csv_bytes",
    "reports_to_json_bytes",
]

_BATCH_SIZE = 48  # source columns per Brandes pass; sized for cache-friendly arrays


@dataclass(frozen=True)
class LayerMetricsReport:
    """The six-metric summary of one layer, after isolated-node removal."""

    threshold: float
    n_nodes_retained: int
    n_edges: int
    n_isolated_removed: int
    avg_closeness: float
    avg_betweenness: float
    avg_degree: float
    avg_clustering: float
    density: float
    n_components: int


class _UnionFind:
    """Disjoint sets over integer indices, path compression + union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def _adjacency(layer: NetworkLayer) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in layer.nodes}
    for a, b, _ in layer.edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def remove_isolated(layer: NetworkLayer) -> NetworkLayer:
    """Drop degree-0 nodes; edges, threshold and provenance are unchanged."""
    connected = set()
    for a, b, _ in layer.edges:
        connected.add(a)
        connected.add(b)
    nodes = tuple(v for v in layer.nodes if v in connected)
    return NetworkLayer(layer.threshold, nodes, layer.edges, layer.provenance)


def degree(layer: NetworkLayer, v: str) -> int:
    """Number of edges incident to v."""
    if v not in layer.nodes:
        raise ValueError(f"unknown node {v!r}")
    return sum(1 for a, b, _ in layer.edges if v == a or v == b)


def closeness(layer: NetworkLayer, v: str) -> float:
    """Sum of reciprocal shortest-path distances from v to every other node.

    Distances are unweighted hop counts (BFS); unreachable nodes add 0.
    """
    adj = _adjacency(layer)
    if v not in adj:
        raise ValueError(f"unknown node {v!r}")
    dist = {v: 0}
    queue = deque([v])
    total = 0.0
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                total += 1.0 / dist[w]
                queue.append(w)
    return total


def clustering(layer: NetworkLayer, v: str) -> float:
    """Fraction of possible triangles through v: 2*T(v) / (deg*(deg-1)).

    Defined as 0 for degree < 2, where the formula has no triangles to count.
    """
    adj = _adjacency(layer)
    if v not in adj:
        raise ValueError(f"unknown node {v!r}")
    neighbors = adj[v]
    k = len(neighbors)
    if k < 2:
        return 0.0
    links = sum(len(adj[u] & neighbors) for u in neighbors)  # = 2 * T(v)
    return links / (k * (k - 1))


def density(layer: NetworkLayer) -> float:
    """2m / (n * (n - 1)); 0 for graphs with fewer than two nodes."""
    n = layer.n_nodes
    if n < 2:
        return 0.0
    return 2.0 * layer.n_edges / (n * (n - 1))


def components(layer: NetworkLayer) -> tuple[int, dict[str, int]]:
    """Connected components; ids ordered by decreasing size, then smallest
    contained node id."""
    nodes = layer.nodes
    index = {v: i for i, v in enumerate(nodes)}
    uf = _UnionFind(len(nodes))
    for a, b, _ in layer.edges:
        uf.union(index[a], index[b])

    groups: dict[int, list[str]] = {}
    for v in nodes:
        groups.setdefault(uf.find(index[v]), []).append(v)
    ordered = sorted(groups.values(), key=lambda g: (-len(g), min(g)))
    membership = {v: cid for cid, group in enumerate(ordered) for v in group}
    return len(ordered), membership


def _component_centrality(
    adj: sp.csr_matrix, batch_size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Closeness and betweenness arrays for one connected subgraph.

    Level-synchronous Brandes accumulation, batched over source columns and
    driven by sparse matrix products so large graphs stay fast. Source
    columns drop out of the per-level products once their BFS finishes, so
    a few high-eccentricity sources do not stall the whole batch. Distances
    from the same pass give the reciprocal-distance closeness for free.
    """
    n = adj.shape[0]
    harm = np.zeros(n)
    bc = np.zeros(n)
    for start in range(0, n, batch_size):
        sources = np.arange(start, min(start + batch_size, n))
        width = len(sources)
        col = np.arange(width)

        dist = np.full((n, width), -1, np.int16)
        sigma = np.zeros((n, width))
        dist[sources, col] = 0
        sigma[sources, col] = 1.0

        frontier = np.zeros((n, width))
        frontier[sources, col] = 1.0
        active = col  # columns whose BFS is still expanding
        level_cols: list[np.ndarray] = []
        level = 0
        while active.size:
            paths = adj @ frontier
            new = (paths > 0.0) & (dist[:, active] < 0)
            alive = np.flatnonzero(new.any(axis=0))
            if alive.size == 0:
                break
            active = active[alive]
            new = new[:, alive]
            paths = paths[:, alive]
            level += 1
            rows, cols_ = np.nonzero(new)
            dist[rows, active[cols_]] = level
            sigma[rows, active[cols_]] = paths[rows, cols_]
            frontier = np.where(new, paths, 0.0)
            level_cols.append(active)

        reached = dist > 0
        inv = np.where(reached, 1.0 / np.maximum(dist, 1), 0.0)
        harm[sources] = inv.sum(axis=0)

        # Backward dependency accumulation, deepest level first; only the
        # columns that reached a level participate in its products.
        delta = np.zeros((n, width))
        for lvl in range(len(level_cols), 0, -1):
            act = level_cols[lvl - 1]
            dist_c = dist[:, act]
            sigma_c = sigma[:, act]
            delta_c = delta[:, act]
            coeff = np.zeros_like(sigma_c)
            np.divide(1.0 + delta_c, sigma_c, out=coeff, where=dist_c == lvl)
            spread = adj @ coeff
            delta_c += np.where(dist_c == lvl - 1, sigma_c * spread, 0.0)
            delta[:, act] = delta_c
        delta[sources, col] = 0.0  # a source never sits between its own pairs
        bc += delta.sum(axis=1)

    return harm, bc / 2.0  # ordered (s, t) accumulations -> unordered pairs


def _centrality_maps(
    layer: NetworkLayer, batch_size: int = _BATCH_SIZE
) -> tuple[dict[str, float], dict[str, float]]:
    """All-node closeness and betweenness, one Brandes pass per component.

    Both metrics are component-local (unreachable pairs contribute nothing),
    so working per connected component bounds the quadratic cost by the
    largest component instead of the whole layer.
    """
    nodes = layer.nodes
    n = len(nodes)
    if n == 0:
        return {}, {}
    index = {v: i for i, v in enumerate(nodes)}
    _, membership = components(layer)
    groups: dict[int, list[str]] = {}
    for v in nodes:
        groups.setdefault(membership[v], []).append(v)

    edges_of: dict[int, list[tuple[int, int]]] = {}
    local_index: dict[str, int] = {}
    for cid, group in groups.items():
        for i, v in enumerate(group):
            local_index[v] = i
        edges_of[cid] = []
    for a, b, _ in layer.edges:
        edges_of[membership[a]].append((local_index[a], local_index[b]))

    harm = np.zeros(n)
    bc = np.zeros(n)
    for cid, group in groups.items():
        size = len(group)
        if size == 1:
            continue
        if size == 2:
            for v in group:
                harm[index[v]] = 1.0
            continue
        pairs = edges_of[cid]
        rows = np.fromiter((i for i, j in pairs), int, len(pairs))
        cols = np.fromiter((j for i, j in pairs), int, len(pairs))
        adj = sp.csr_matrix(
            (
                np.ones(2 * len(pairs)),
                (np.concatenate([rows, cols]), np.concatenate([cols, rows])),
            ),
            shape=(size, size),
        )
        c_harm, c_bc = _component_centrality(adj, min(batch_size, size))
        for i, v in enumerate(group):
            harm[index[v]] = c_harm[i]
            bc[index[v]] = c_bc[i]

    return (
        {v: float(harm[i]) for v, i in index.items()},
        {v: float(bc[i]) for v, i in index.items()},
    )


def betweenness(layer: NetworkLayer) -> dict[str, float]:
    """Unnormalized betweenness for every node, over unordered node pairs."""
    return _centrality_maps(layer)[1]


def _clustering_values(layer: NetworkLayer) -> list[float]:
    adj = _adjacency(layer)
    values = []
    for v in layer.nodes:
        neighbors = adj[v]
        k = len(neighbors)
        if k < 2:
            values.append(0.0)
            continue
        links = sum(len(adj[u] & neighbors) for u in neighbors)
        values.append(links / (k * (k - 1)))
    return values


def report(layer: NetworkLayer, *, batch_size: int = _BATCH_SIZE) -> LayerMetricsReport:
    """Remove isolated nodes, then average the local metrics and compute the
    global ones on the retained graph. An empty retained graph yields a
    zeroed report with the removal count preserved."""
    retained = remove_isolated(layer)
    n = retained.n_nodes
    n_isolated = layer.n_nodes - n
    if n == 0:
        return LayerMetricsReport(
            threshold=layer.threshold,
            n_nodes_retained=0,
            n_edges=retained.n_edges,
            n_isolated_removed=n_isolated,
            avg_closeness=0.0,
            avg_betweenness=0.0,
            avg_degree=0.0,
            avg_clustering=0.0,
            density=0.0,
            n_components=0,
        )

    close_map, between_map = _centrality_maps(retained, batch_size)
    n_components, _ = components(retained)
    degrees = {v: 0 for v in retained.nodes}
    for a, b, _ in retained.edges:
        degrees[a] += 1
        degrees[b] += 1

    return LayerMetricsReport(
        threshold=layer.threshold,
        n_nodes_retained=n,
        n_edges=retained.n_edges,
        n_isolated_removed=n_isolated,
        avg_closeness=sum(close_map[v] for v in retained.nodes) / n,
        avg_betweenness=sum(between_map[v] for v in retained.nodes) / n,
        avg_degree=sum(degrees.values()) / n,
        avg_clustering=sum(_clustering_values(retained)) / n,
        density=density(retained),
        n_components=n_components,
    )


_REPORT_FIELDS = (
    "threshold",
    "n_nodes_retained",
    "n_edges",
    "n_isolated_removed",
    "avg_closeness",
    "avg_betweenness",
    "avg_degree",
    "avg_clustering",
    "density",
    "n_components",
)


def reports_to_csv_bytes(reports: Sequence[LayerMetricsReport]) -> bytes:
    """One CSV row per layer, columns named after the report fields."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_REPORT_FIELDS)
    for rep in reports:
        row = asdict(rep)
        writer.writerow([repr(row[f]) if isinstance(row[f], float) else row[f] for f in _REPORT_FIELDS])
    return buf.getvalue().encode("utf-8")


def reports_to_json_bytes(reports: Iterable[LayerMetricsReport]) -> bytes:
    """JSON array with one object per layer, keys exactly the report fields."""
    payload = [asdict(rep) for rep in reports]
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")
