"""fgkit: functional-group perception, reaction change annotation, and
chemical corpus construction."""

from .mol import Atom, Bond, Molecule, SmilesError, parse_smiles, ring_info
from .canon import enumerate_random, random_render, write_canonical

__version__ = "0.1.0"

__all__ = [
    "Atom", "Bond", "Molecule", "SmilesError",
    "parse_smiles", "ring_info", "write_canonical",
    "enumerate_random", "random_render",
    "__version__",
]
