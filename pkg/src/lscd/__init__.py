"""Lexical semantic change detection from contextualized usage vectors.

Pipeline stages: parse time-sliced corpora and extract target usages
(:mod:`lscd.corpus`), ingest per-layer usage vectors and combine layers
(:mod:`lscd.embeddings`), score graded change between periods
(:mod:`lscd.measures`), turn rankings into binary labels
(:mod:`lscd.decision`), evaluate against gold data with baselines
(:mod:`lscd.evaluation`), and probe error sources
(:mod:`lscd.analysis`). The :mod:`lscd.cli` module ties the stages into
the ``lscd`` command.
"""

from .analysis import UsageProfile, build_profile, collocation_share, uppercase_share
from .corpus import (
    ANY_TOKEN_FORM,
    LEMMA_FORM,
    Corpus,
    Sentence,
    Token,
    Usage,
    count_frequency,
    extract_usages,
    load_corpus,
    parse_corpus,
    read_usages,
    write_usages,
)
from .decision import (
    Prediction,
    Ranking,
    consensus_top_k,
    label_top_k,
    max_positives,
    rank_targets,
    read_predictions,
    write_predictions,
)
from .embeddings import (
    LayerEmbeddingSet,
    LayerSpec,
    UsageVectorSet,
    combine_layers,
    parse_embedding_file,
    resolve_layer_spec,
    write_embedding_file,
)
from .errors import CorpusFormatError, EmbeddingFormatError, LscdError, TargetMismatchError
from .evaluation import (
    GoldRecord,
    accuracy,
    build_leaderboard,
    display_score,
    f1,
    frequency_baseline,
    majority_baseline,
    read_gold,
    read_graded_gold,
    spearman,
    write_leaderboard,
)
from .measures import (
    ApdMode,
    ChangeScore,
    ScoreTable,
    apd,
    cos_centroid,
    cosine_distance,
    read_score_file,
    write_score_file,
)

__version__ = "0.1.0"

__all__ = [
    "ANY_TOKEN_FORM",
    "ApdMode",
    "ChangeScore",
    "Corpus",
    "CorpusFormatError",
    "EmbeddingFormatError",
    "GoldRecord",
    "LEMMA_FORM",
    "LayerEmbeddingSet",
    "LayerSpec",
    "LscdError",
    "Prediction",
    "Ranking",
    "ScoreTable",
    "Sentence",
    "TargetMismatchError",
    "Token",
    "Usage",
    "UsageProfile",
    "UsageVectorSet",
    "accuracy",
    "apd",
    "build_leaderboard",
    "build_profile",
    "collocation_share",
    "combine_layers",
    "consensus_top_k",
    "cos_centroid",
    "cosine_distance",
    "count_frequency",
    "display_score",
    "extract_usages",
    "f1",
    "frequency_baseline",
    "label_top_k",
    "load_corpus",
    "majority_baseline",
    "max_positives",
    "parse_corpus",
    "parse_embedding_file",
    "rank_targets",
    "read_gold",
    "read_graded_gold",
    "read_predictions",
    "read_score_file",
    "read_usages",
    "resolve_layer_spec",
    "spearman",
    "uppercase_share",
    "write_embedding_file",
    "write_leaderboard",
    "write_predictions",
    "write_score_file",
    "write_usages",
]
