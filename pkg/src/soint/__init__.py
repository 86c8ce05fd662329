"""Exact stable orbital integrals for gl_n, u_n and sp_2n with brute-force oracles."""

__version__ = "0.1.0"
