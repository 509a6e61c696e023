"""Computation: market data, encodings, simulation, optimizers, solvers and the sweep."""
