"""Lexicon-based tweet polarity labeling, TF-IDF featurization and classifier comparison."""

__version__ = "0.1.0"
