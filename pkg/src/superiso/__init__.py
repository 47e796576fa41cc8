"""Exact computations with finite-dimensional Lie superalgebras.

Isoclinism witnesses, factor sets, stem decompositions, multipliers and
stem covers over the rationals and prime fields GF(p), p >= 5.
"""

__version__ = "0.1.0"
