"""Human-centered evaluation engine for simplified health text.

Computes classic automatic metrics (BLEU, SARI, FKGL, SMOG, Coleman-Liau),
five hybrid readability dimensions combining lexicon features with human
Likert ratings, calibrates the hybrid weights against collected feedback,
and closes the loop through a micro-survey HTTP service.
"""
from .calibration import (
    CalibrationSet,
    FitResult,
    cross_validate,
    fit_weights,
    pearson,
    spearman,
)
from .corpus import SimplificationItem, read_corpus
from .features import (
    ActionFeatures,
    ClarityFeatures,
    CultureFeatures,
    DIMENSIONS,
    FeatureBundle,
    ToneFeatures,
    TrustFeatures,
    extract_all,
)
from .feedback import AgreementReport, FeedbackStore, HumanRating
from .metaeval import build_matrix, correlate
from .metrics import bleu, bleu_corpus, coleman_liau, fkgl, sari, smog
from .resources import EmbeddingTable, Gazetteer, LexiconPack, ResourcePack, default_resources
from .scoring import HCRSReport, WeightSet, composite_hcrs, normalize_likert, score_bundle
from .textcore import Document, analyze, count_syllables, ngrams, split_sentences, tokenize

__version__ = "0.1.0"

__all__ = [
    "analyze",
    "bleu",
    "bleu_corpus",
    "build_matrix",
    "coleman_liau",
    "composite_hcrs",
    "correlate",
    "count_syllables",
    "cross_validate",
    "default_resources",
    "extract_all",
    "fit_weights",
    "fkgl",
    "ngrams",
    "normalize_likert",
    "pearson",
    "read_corpus",
    "sari",
    "score_bundle",
    "smog",
    "spearman",
    "split_sentences",
    "tokenize",
    "ActionFeatures",
    "AgreementReport",
    "CalibrationSet",
    "ClarityFeatures",
    "CultureFeatures",
    "DIMENSIONS",
    "Document",
    "EmbeddingTable",
    "FeatureBundle",
    "FeedbackStore",
    "FitResult",
    "Gazetteer",
    "HCRSReport",
    "HumanRating",
    "LexiconPack",
    "ResourcePack",
    "SimplificationItem",
    "ToneFeatures",
    "TrustFeatures",
    "WeightSet",
]
