"""Exact checks of the Pfaffian-Grassmannian frame-bundle identities.

Two independent routes are provided: symbolic algebra in Z[L] (``motivic``)
and exact point counts over prime fields (``census``).
"""

__version__ = "0.1.0"
