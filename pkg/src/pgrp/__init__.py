"""Desk-scale verification toolkit for finite p-groups and their modules."""

__version__ = "0.1.0"
