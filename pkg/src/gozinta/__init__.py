"""Exact modelling and search for Gozinta Boxes.

A Gozinta Box is a box that can lengthen one side, which lets two (or more)
boxes each appear to contain the other. The package verifies concrete
nestings, decides which permutations of a box set are realisable, and
implements the constructions that turn one valid set into another.
"""

__version__ = "0.1.0"
