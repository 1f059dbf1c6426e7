"""Tangram compositions, annotation corpora, naming-divergence metrics,
reference games, and a collection service."""

from .corpus import (
    AnalysisSet,
    AnalysisSets,
    Annotation,
    CorpusError,
    DatasetStats,
    Part,
    SplitAssignment,
    build_analysis_sets,
    build_splits,
    dataset_stats,
    dump_corpus,
    load_corpus,
)
from .exact import ExactCoord, coord
from .geometry import (
    CANONICAL_VERTICES,
    CompositionError,
    PieceKind,
    Placement,
    Tangram,
    ValidationReport,
    canonical_square,
    parse_composition,
    piece_area,
    polygon_area,
    serialize_composition,
    tangram_area,
    validate_tangram,
)
from .metrics import (
    DivergenceScore,
    MetricError,
    PerplexityParams,
    PerplexityScore,
    PsaScore,
    brute_force_psa_pair,
    log_perplexity,
    perplexity_params,
    pnd,
    psa,
    psa_pair,
    snd,
    token_rarity,
)
from .refgames import (
    PART_COLOR_ORDER,
    Condition,
    GameError,
    GameItem,
    ReferenceGame,
    ScoreTable,
    augment_annotation,
    dump_games,
    ensemble_scores,
    export_contrastive_matrix,
    generate_augmented_games,
    generate_game,
    load_games,
    load_score_table,
    part_curves,
    score_games,
    template_text,
)
from .sampling import DenseSample, SamplePlanePoint, build_plane, dense_sample
from .stats import (
    BootstrapResult,
    Gmm2Fit,
    StatsError,
    bootstrap_ci,
    gmm2_fit,
    pearson,
    spearman,
)
from .svg import render_svg
from .porter import stem, stem_once
from .textnorm import STOPWORDS, STOPWORDS_SHA256, normalize, tokenize, vocab_normalize, whitespace_length

__all__ = [
    "AnalysisSet",
    "AnalysisSets",
    "Annotation",
    "BootstrapResult",
    "CANONICAL_VERTICES",
    "CompositionError",
    "Condition",
    "CorpusError",
    "DatasetStats",
    "DenseSample",
    "DivergenceScore",
    "ExactCoord",
    "GameError",
    "GameItem",
    "Gmm2Fit",
    "MetricError",
    "PART_COLOR_ORDER",
    "Part",
    "PerplexityParams",
    "PerplexityScore",
    "PieceKind",
    "Placement",
    "PsaScore",
    "ReferenceGame",
    "STOPWORDS",
    "STOPWORDS_SHA256",
    "SamplePlanePoint",
    "ScoreTable",
    "SplitAssignment",
    "StatsError",
    "Tangram",
    "ValidationReport",
    "augment_annotation",
    "bootstrap_ci",
    "build_analysis_sets",
    "build_plane",
    "build_splits",
    "canonical_square",
    "coord",
    "dataset_stats",
    "dense_sample",
    "dump_corpus",
    "dump_games",
    "ensemble_scores",
    "export_contrastive_matrix",
    "generate_augmented_games",
    "generate_game",
    "gmm2_fit",
    "load_corpus",
    "load_games",
    "load_score_table",
    "log_perplexity",
    "normalize",
    "stem",
    "stem_once",
    "parse_composition",
    "part_curves",
    "pearson",
    "perplexity_params",
    "piece_area",
    "pnd",
    "polygon_area",
    "psa",
    "psa_pair",
    "brute_force_psa_pair",
    "token_rarity",
    "render_svg",
    "score_games",
    "serialize_composition",
    "snd",
    "spearman",
    "tangram_area",
    "template_text",
    "tokenize",
    "validate_tangram",
    "vocab_normalize",
    "whitespace_length",
]

__version__ = "0.1.0"
