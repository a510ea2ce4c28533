"""binsmith: human-centered binning for histograms and choropleth classes.

Semantic bin lookups mined from corpora, plus legibility-refined statistical
defaults, behind a library API, a CLI, and an HTTP service.
"""

from .core import (
    BinCounts,
    BinScheme,
    Grain,
    InvalidSchemeError,
    LabelFormat,
    Provenance,
    assign,
    label_bins,
    scheme_from_json,
    scheme_to_json,
)
from .engine import BinResult, compute_bins
from .ingest import SeriesProfile, Table, infer_grain, parse_csv, profile
from .legibility import LegibilityConfig, default_bins, nice_step
from .matching import ConceptMatch, match_concept, select_bin_option, semantic_bins
from .pipeline import (
    AlignmentConfig,
    BinConcept,
    BinOption,
    Corpus,
    SemanticLookupTable,
    TopicModel,
    align,
    alignment_score,
    build_lookup,
    bundled_concepts,
    harvest_breaks,
    table_from_json,
    table_to_json,
    tokenize,
    train_lda,
)
from .stats import (
    equal_interval,
    fd_width,
    jenks_breaks,
    quantile_breaks,
    scott_width,
    stddev_breaks,
    sturges_k,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentConfig",
    "BinConcept",
    "BinCounts",
    "BinOption",
    "BinResult",
    "BinScheme",
    "ConceptMatch",
    "Corpus",
    "Grain",
    "InvalidSchemeError",
    "LabelFormat",
    "LegibilityConfig",
    "Provenance",
    "SemanticLookupTable",
    "SeriesProfile",
    "Table",
    "TopicModel",
    "align",
    "alignment_score",
    "assign",
    "build_lookup",
    "bundled_concepts",
    "compute_bins",
    "default_bins",
    "equal_interval",
    "fd_width",
    "harvest_breaks",
    "infer_grain",
    "jenks_breaks",
    "label_bins",
    "match_concept",
    "nice_step",
    "parse_csv",
    "profile",
    "quantile_breaks",
    "scheme_from_json",
    "scheme_to_json",
    "scott_width",
    "select_bin_option",
    "semantic_bins",
    "stddev_breaks",
    "sturges_k",
    "table_from_json",
    "table_to_json",
    "tokenize",
    "train_lda",
]
