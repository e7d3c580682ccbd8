"""Explicit 3XOR instances from simplicial cohomology, with exact desk-scale oracles.

Modules: :mod:`f2` (GF(2) linear algebra), :mod:`complex` (simplicial
complexes and chains), :mod:`zoo` (small complexes), :mod:`cohomology`,
:mod:`xorsys` (instances), :mod:`resolution` (XOR-resolution),
:mod:`sos` (SoS vector certificates) and :mod:`cli`.
"""

from .complex import Chain, SimplicialComplex
from .f2 import BitMatrix, BitVec
from .xorsys import XorSystem

__all__ = ["BitMatrix", "BitVec", "Chain", "SimplicialComplex", "XorSystem"]
__version__ = "0.1.0"
