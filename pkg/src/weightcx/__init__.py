"""Exact-arithmetic engine for bounded complexes over additive categories,
weight structures, class-group invariants and motivic Euler characteristics."""

__version__ = "0.1.0"
