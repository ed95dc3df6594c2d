"""collabnet: threshold-layered network analysis of collaboration records.

Pipeline: parse contribution records (:mod:`collabnet.ingest`), score
co-membered project pairs (:mod:`collabnet.linkage`), sweep thresholds into
network layers (:mod:`collabnet.layers`), measure each layer
(:mod:`collabnet.metrics`), and serialize for viewers
(:mod:`collabnet.export`). :mod:`collabnet.synth` generates calibrated
synthetic datasets and :mod:`collabnet.cli` drives everything from the
command line.
"""

__version__ = "0.1.0"

from .ingest import (  # noqa: F401
    ContributionRecord,
    Dataset,
    Project,
    ProjectType,
    aggregate,
    filter_by_type,
    parse_records,
)
from .linkage import LinkageTable, PairLinkage, build_linkage_table, pair_linkage  # noqa: F401
from .layers import (  # noqa: F401
    NetworkLayer,
    ThresholdSweep,
    build_layer,
    build_layer_stack,
    make_sweep_explicit,
    make_sweep_linspace,
)
from .metrics import LayerMetricsReport, report  # noqa: F401
from .stats import Feature, FeatureSummary, summarize  # noqa: F401
from .synth import SynthConfig, generate  # noqa: F401
