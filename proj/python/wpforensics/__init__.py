"""WordPress news-site forensics toolkit (Python bindings)."""
import json

from . import _core
from ._core import (
    ctfidf,
    detect_backdated,
    hdbscan,
    lexicon_scores,
    load_embeddings,
    monthly_counts,
    pca,
    run_cli,
    save_embeddings,
    split_sentences,
    to_moscow,
    tokenize,
    top_ngrams,
    weekend_share,
)


def load_corpus(path):
    """Corpus records as dicts."""
    return [json.loads(s) for s in _core.load_corpus(str(path))]


__all__ = [
    "ctfidf", "detect_backdated", "hdbscan", "lexicon_scores", "load_corpus", "load_embeddings",
    "monthly_counts", "pca", "run_cli", "save_embeddings", "split_sentences", "to_moscow", "tokenize",
    "top_ngrams", "weekend_share",
]
