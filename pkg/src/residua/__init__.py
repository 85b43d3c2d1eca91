"""residua: exact commutative algebra for residue-current computations.

Polynomial rings over Q, Groebner bases and syzygies (also over quotient
rings), free resolutions and their rank loci, Koszul and tensor complexes,
comparison morphisms with homotopy certificates, Poincare residues,
structure-form shapes, and current recipes with annihilator oracles.
"""

from residua.kernel import BACKEND
from residua.polyring import (
    GREVLEX,
    GRLEX,
    LEX,
    MonomialOrder,
    ParseError,
    Polynomial,
    PolynomialRing,
    PolyVector,
    RingMismatchError,
    compare_monomials,
    divide,
    poly_parse,
)

__version__ = "0.1.0"
