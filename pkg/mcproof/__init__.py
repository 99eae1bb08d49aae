"""Interactive proofs for first-order model checking over GF(q^4)."""

__version__ = "0.1.0"
