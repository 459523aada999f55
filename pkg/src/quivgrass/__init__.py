"""Exact computations with bound quiver algebras, their modules and quiver
Grassmannians over prime fields."""

__version__ = "0.1.0"
