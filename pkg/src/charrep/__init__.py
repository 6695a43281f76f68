"""Corpus analytics for comparing character representations across sources:
mention attention, co-occurrence network position, and embedding-based
semantic association.
"""

from .align import AlignedPair, cross_model_similarity, procrustes_align, seed_stability_report
from .axes import AxisLexicon, AxisScore, rank_on_axis, rnd_score, semaxis_score
from .charnet import (
    CoocNetwork,
    build_longform_network,
    build_threaded_network,
    merge_networks,
)
from .coreperiphery import CorePeripheryParams, core_periphery_scores
from .corpus import (
    AliasTable,
    Document,
    MentionTable,
    build_character_set,
    count_mentions,
    detect_mentions,
    load_corpus,
    split_paragraphs,
    tokenize,
)
from .describe import Description, ParsedToken, description_counts, extract_descriptions, load_conllu
from .embed import EmbeddingModel, TrainConfig, build_vocab, cosine, sgns_pair_step, train
from .errors import CharrepError, DataError, FormatError, OOVError, UsageError
from .netmetrics import (
    MetricVector,
    RankVector,
    betweenness,
    closeness,
    effective_size,
    rank_shift,
    to_ranks,
    weighted_degree,
)
from .pipeline import ComparisonReport, RunConfig, emit_plotdata, run_pipeline
from .stats import (
    AxisSummary,
    ChiSquareResult,
    LogOddsResult,
    axis_summary,
    chi_square_independence,
    select_distinctive,
    weighted_log_odds,
)

__version__ = "0.1.0"
