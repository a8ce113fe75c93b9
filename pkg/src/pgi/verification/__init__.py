"""Corpus construction and claim verification."""

from .claims import CLAIMS, Claim
from .corpus import Corpus, CorpusConfig, CorpusEntry, build_corpus
from .runner import resolve_suites, resource_skips, run_verification
from .suites import SUITE_ORDER, SUITES

__all__ = [
    "CLAIMS", "Claim", "Corpus", "CorpusConfig", "CorpusEntry", "build_corpus",
    "resolve_suites", "resource_skips", "run_verification", "SUITE_ORDER", "SUITES",
]
