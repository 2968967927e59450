"""Numerical checks of Ostrowski-type inequalities for preinvex derivatives."""

__version__ = "0.1.0"
