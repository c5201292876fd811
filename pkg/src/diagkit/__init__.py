"""Combinatorics of diagrammatic sets: molecules, diagrams, structure cells, contexts."""

__version__ = "0.1.0"
