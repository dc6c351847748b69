"""Exact verification of Bailey pairs, multisum identities and strange identities at roots of unity."""

__version__ = "0.1.0"
