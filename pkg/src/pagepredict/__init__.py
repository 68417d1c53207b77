"""Web access log mining and next-page prediction.

Pipeline: parse and filter raw logs, sessionize, cluster sessions, count
single-page and page-pair frequencies, prune both levels with vague-set
scores, mine pair association rules and predict the next page to prefetch.
"""

from pagepredict.cluster import SessionCluster, cluster_sessions, select_cluster, session_similarity
from pagepredict.evaluation import EvalReport, evaluate, simulate_prefetch_cache, split_sessions
from pagepredict.ingest import (
    LogRecord,
    PageCatalog,
    ParseError,
    filter_records,
    intern_pages,
    normalize_url,
    parse_clf_line,
    parse_csv_record,
)
from pagepredict.markov import Level1Stats, PairStats, count_level1, count_level2, transition_prob
from pagepredict.model import (
    AssociationRule,
    PredictionModel,
    load_model,
    mine_rules,
    predict_next,
    predict_topk,
    save_model,
)
from pagepredict.pipeline import TrainConfig, train_model
from pagepredict.sessions import Session, build_sessions
from pagepredict.synthetic import SyntheticSpec, generate_synthetic_log
from pagepredict.vague import VagueValue, prune, vague_level1, vague_level2, vague_score

__version__ = "0.1.0"

__all__ = [
    "AssociationRule",
    "EvalReport",
    "Level1Stats",
    "LogRecord",
    "PageCatalog",
    "PairStats",
    "ParseError",
    "PredictionModel",
    "Session",
    "SessionCluster",
    "SyntheticSpec",
    "TrainConfig",
    "VagueValue",
    "build_sessions",
    "cluster_sessions",
    "count_level1",
    "count_level2",
    "evaluate",
    "filter_records",
    "generate_synthetic_log",
    "intern_pages",
    "load_model",
    "mine_rules",
    "normalize_url",
    "parse_clf_line",
    "parse_csv_record",
    "predict_next",
    "predict_topk",
    "prune",
    "save_model",
    "select_cluster",
    "session_similarity",
    "simulate_prefetch_cache",
    "split_sessions",
    "train_model",
    "transition_prob",
    "vague_level1",
    "vague_level2",
    "vague_score",
]
