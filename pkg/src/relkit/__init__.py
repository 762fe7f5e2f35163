"""Relational-semantics workbench: equational states, finite frames and
model checking for LTL, CTL, first-order dynamic logic and FOCTL*."""

__version__ = "0.1.0"
