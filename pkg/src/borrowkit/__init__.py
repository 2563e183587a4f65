"""Loanword and code-switching detection for Luxembourgish news text."""

__version__ = "0.1.0"
