"""Naive reference implementations used to cross-check the fast paths.

Everything here favors obviousness over speed: exhaustive double loops,
explicit path enumeration, flood fill. Tests compare library results
against these on small random instances.
"""

from __future__ import annotations

import random
from collections import deque
from itertools import combinations

from collabnet.ingest import ContributionRecord, Dataset, ProjectType, aggregate
from collabnet.layers import Edge, NetworkLayer, Provenance


def naive_linkage_table(dataset: Dataset) -> dict[tuple[str, str], tuple[int, float]]:
    """Exhaustive all-pairs scan; sums each side separately before halving,
    so the float path differs from the library's per-member averaging."""
    out: dict[tuple[str, str], tuple[int, float]] = {}
    pids = sorted(dataset.projects)
    for pa, pb in combinations(pids, 2):
        a, b = dataset.projects[pa], dataset.projects[pb]
        common = sorted(set(a.members) & set(b.members))
        if not common:
            continue
        total_a = sum(a.members[m] for m in common)
        total_b = sum(b.members[m] for m in common)
        value = (total_a + total_b) / 2.0 / len(common)
        out[(pa, pb)] = (len(common), value)
    return out


def bfs_distances(adj: dict[str, set[str]], start: str) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def closeness_oracle(adj: dict[str, set[str]], v: str) -> float:
    dist = bfs_distances(adj, v)
    return sum(1.0 / d for u, d in dist.items() if u != v)


def _all_simple_paths(adj: dict[str, set[str]], s: str, t: str) -> list[list[str]]:
    paths = []
    stack = [(s, [s])]
    while stack:
        node, path = stack.pop()
        if node == t:
            paths.append(path)
            continue
        for nxt in sorted(adj[node]):
            if nxt not in path:
                stack.append((nxt, path + [nxt]))
    return paths


def betweenness_oracle(adj: dict[str, set[str]]) -> dict[str, float]:
    """Unordered-pair betweenness by enumerating every shortest path."""
    nodes = sorted(adj)
    bc = {v: 0.0 for v in nodes}
    for s, t in combinations(nodes, 2):
        paths = _all_simple_paths(adj, s, t)
        if not paths:
            continue
        shortest_len = min(len(p) for p in paths)
        shortest = [p for p in paths if len(p) == shortest_len]
        for v in nodes:
            if v == s or v == t:
                continue
            through = sum(1 for p in shortest if v in p)
            bc[v] += through / len(shortest)
    return bc


def clustering_oracle(adj: dict[str, set[str]], v: str) -> float:
    neighbors = sorted(adj[v])
    k = len(neighbors)
    if k < 2:
        return 0.0
    triangles = sum(1 for a, b in combinations(neighbors, 2) if b in adj[a])
    return 2.0 * triangles / (k * (k - 1))


def components_oracle(adj: dict[str, set[str]]) -> int:
    seen: set[str] = set()
    count = 0
    for start in sorted(adj):
        if start in seen:
            continue
        count += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return count


_PROVENANCE = Provenance("test", ())


def make_layer(nodes, edges, threshold: float = 0.0, weight: float = 1.0) -> NetworkLayer:
    """Layer from an edge list; edges may be (a, b) or (a, b, weight)."""
    canonical = []
    for e in edges:
        a, b = e[0], e[1]
        w = e[2] if len(e) > 2 else weight
        canonical.append(Edge(min(a, b), max(a, b), w))
    return NetworkLayer(threshold, tuple(sorted(nodes)), tuple(sorted(canonical)), _PROVENANCE)


def adjacency_of(layer: NetworkLayer) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in layer.nodes}
    for a, b, _ in layer.edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def random_layer(rng: random.Random, max_nodes: int = 8) -> NetworkLayer:
    n = rng.randint(1, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    edges = []
    for a, b in combinations(nodes, 2):
        if rng.random() < rng.choice((0.15, 0.35, 0.6)):
            edges.append((a, b))
    return make_layer(nodes, edges)


def random_records(
    rng: random.Random, max_projects: int = 20, max_members: int = 10
) -> list[ContributionRecord]:
    n_projects = rng.randint(2, max_projects)
    n_members = rng.randint(2, max_members)
    members = [f"M{i}" for i in range(n_members)]
    records = []
    for p in range(n_projects):
        team = rng.sample(members, rng.randint(1, min(4, n_members)))
        ptype = rng.choice(list(ProjectType))
        left = 100.0
        for i, m in enumerate(team):
            if i == len(team) - 1:
                share = round(left, 4)
            else:
                share = round(rng.uniform(0.1, left / (len(team) - i)), 4)
                left -= share
            records.append(ContributionRecord(f"P{p}", m, share, None, ptype))
    return records


def random_dataset(rng: random.Random, **kwargs) -> Dataset:
    return aggregate(random_records(rng, **kwargs))
