"""Probabilistic guarded Kleene algebra with tests: syntax, semantics, equivalence and proofs."""

__version__ = "0.1.0"
