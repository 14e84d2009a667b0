"""Exact computations with prolonged vector fields on frame bundles.

Submodules: ``algebra`` (exact polynomials, rational functions, matrices),
``geometry`` (fields, forms, maps), ``jets`` (frame bundles, prolongation),
``integrals`` (first-integral search), ``painleve`` (catalog and checks)
and ``cli`` (grammar, job files, command line).
"""

__version__ = "0.1.0"
