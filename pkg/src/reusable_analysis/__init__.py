"""Cycle and shadowing analyses written once against small overlay structures
and reused by several language frontends."""

__version__ = "0.1.0"
