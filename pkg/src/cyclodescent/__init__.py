"""Cohomology of Tate twists over the cyclotomic Z_p-tower, computed branch by branch."""

__version__ = "0.1.0"
