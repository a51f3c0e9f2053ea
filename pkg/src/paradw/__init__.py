"""Parabolic Dijkgraaf-Witten invariants of links over SL2(F_q)."""

__version__ = "0.1.0"
