"""Interactive multi-objective linear optimization with the reference point method."""

__version__ = "0.1.0"
