"""resupal

Exact computations with restricted Lie superalgebras over F_p and F_{p^2},
p odd: axiom checks for brackets and p|2p-maps, ordinary and restricted
cohomology, central extensions, automorphism orbits and the invariant tables
of the low-dimensional nilpotent classification.

The ``resupal`` CLI wraps the library; the modules can also be used directly.
"""

try:
    from ._version import version as __version__
except Exception:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = ["__version__"]
