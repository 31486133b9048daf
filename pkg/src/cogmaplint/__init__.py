"""Lint brainstormed cognitive maps into well-formed causal diagrams."""

__version__ = "0.1.0"
