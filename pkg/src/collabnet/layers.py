"""Threshold sweeps and network layer construction.

A layer is the graph obtained at one threshold: every project is a node and
every pair whose linkage meets the threshold is an undirected weighted edge.
Sweeping an increasing list of thresholds yields a stack of nested layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .ingest import Dataset
from .linkage import LinkageTable

__all__ = [
    "Edge",
    "Provenance",
    "NetworkLayer",
    "ThresholdSweep",
    "make_sweep_explicit",
    "make_sweep_linspace",
    "build_layer",
    "build_layer_stack",
]


class Edge(NamedTuple):
    a: str
    b: str
    weight: float


@dataclass(frozen=True)
class Provenance:
    """Where a layer came from: dataset hash and the type labels it holds."""

    dataset_fingerprint: str
    project_types: tuple[str, ...]


@dataclass(frozen=True)
class NetworkLayer:
    """One generated graph at a single threshold.

    nodes is the full project id set of the source dataset (isolated nodes
    are kept; metric reporting drops them separately). Both tuples are in
    canonical sorted order so serialization is byte-stable.
    """

    threshold: float
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    provenance: Provenance

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ThresholdSweep:
    """A strictly increasing list of thresholds, explicit or linspace-derived."""

    thresholds: tuple[float, ...]
    source: str  # "explicit" | "linspace"

    def __post_init__(self) -> None:
        if not self.thresholds:
            raise ValueError("sweep needs at least one threshold")
        for t in self.thresholds:
            if not math.isfinite(t):
                raise ValueError(f"threshold {t!r} is not finite")
        for lo, hi in zip(self.thresholds, self.thresholds[1:]):
            if not lo < hi:
                raise ValueError(
                    f"thresholds must be strictly increasing, got {lo} before {hi}"
                )


def make_sweep_explicit(values: Sequence[float]) -> ThresholdSweep:
    """Sweep from user-chosen threshold values."""
    return ThresholdSweep(tuple(float(v) for v in values), "explicit")


def make_sweep_linspace(table: LinkageTable, n_points: int) -> ThresholdSweep:
    """n_points evenly spaced thresholds from min to max observed linkage."""
    if n_points < 2:
        raise ValueError("linspace sweep needs at least 2 points")
    if table.min_linkage is None or table.max_linkage is None:
        raise ValueError("no co-membered pairs: linkage range is undefined")
    lo, hi = table.min_linkage, table.max_linkage
    if lo == hi:
        raise ValueError(f"degenerate linkage range [{lo}, {hi}]")
    step = (hi - lo) / (n_points - 1)
    values = [lo + i * step for i in range(n_points - 1)]
    values.append(hi)  # endpoint exact regardless of float stepping
    return ThresholdSweep(tuple(values), "linspace")


def build_layer(dataset: Dataset, table: LinkageTable, threshold: float) -> NetworkLayer:
    """Graph at one threshold: all projects as nodes, pairs with
    linkage >= threshold as weighted edges."""
    nodes = tuple(sorted(dataset.projects))
    edges = tuple(
        Edge(pa, pb, link.linkage)
        for (pa, pb), link in table.pairs.items()
        if link.linkage >= threshold
    )
    provenance = Provenance(dataset.fingerprint(), dataset.project_types())
    return NetworkLayer(float(threshold), nodes, edges, provenance)


def build_layer_stack(
    dataset: Dataset, table: LinkageTable, sweep: ThresholdSweep
) -> list[NetworkLayer]:
    """One layer per sweep threshold, in sweep order."""
    return [build_layer(dataset, table, t) for t in sweep.thresholds]
