"""
PO-QA - portfolio optimization with quantum algorithms.

This package encodes a budget-constrained mean-variance portfolio problem as a
diagonal Ising Hamiltonian and compares VQE and QAOA solutions, simulated on a
dense statevector, against the exact classical ground state.
"""

__version__ = "1.0.0"
__author__ = "PO-QA contributors"
