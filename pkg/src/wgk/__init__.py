"""W-graph ideals, their dual modules and Kazhdan-Lusztig style tables for weighted Coxeter groups."""

__version__ = "0.1.0"
