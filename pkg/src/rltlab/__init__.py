"""Exact tools for RLT closures, disjunctive hulls and the QAP relaxations."""

__version__ = "0.1.0"
