"""Multiplicities of modules, polar varieties and singularity invariants in exact arithmetic."""

__version__ = "0.1.0"
