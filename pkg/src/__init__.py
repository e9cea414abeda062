"""
Henson graph workbench: a computable presentation of H_n, Folkman witness
search and a finite-injury priority 2-coloring with trace verification.
"""

__version__ = "0.1.0"
