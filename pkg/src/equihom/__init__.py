"""Equivariant homology of free spectra over cyclic p-groups.

Finite G-sets, RO(G)-graded degrees, Mackey-functor coefficient tables,
free bases with box products, norms and duals, ring models for
homologically pure spectra, and E2 pages of Tor spectral sequences.
"""

__version__ = "1.0.0"
