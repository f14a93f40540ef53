"""Farey fractions of order γ and the mediant dissection of the unit circle."""

from farey.dissection import (
    FareyArc,
    arc_containing,
    dissection,
    farey_fractions,
    locate,
    locate_many,
    write_arcs_csv,
)

__all__ = [
    "FareyArc",
    "arc_containing",
    "dissection",
    "farey_fractions",
    "locate",
    "locate_many",
    "write_arcs_csv",
]
