"""Projective dimension of ideals generated by quadrics: polynomial rings over
prime fields, Groebner bases, minimal free resolutions, matrices of linear
forms and verification campaigns."""

from .ring import Field, Polynomial, Ring
from .ideal import Ideal
from .resolution import betti_table, minimal_free_resolution, projective_dimension
from .linmat import LinearMatrix, canonical_form, find_generalized_zero

__version__ = "0.1.0"

__all__ = ["Field", "Polynomial", "Ring", "Ideal", "betti_table", "minimal_free_resolution",
           "projective_dimension", "LinearMatrix", "canonical_form", "find_generalized_zero"]
