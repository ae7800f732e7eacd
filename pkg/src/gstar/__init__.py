"""Exact finite models of the pointed indexing categories F and G*, and of the
coend-defined left adjoint to restriction along the length-one inclusion."""

__version__ = "0.1.0"
