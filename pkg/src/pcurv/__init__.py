"""Exact p-curvature of pencils of flat connections and difference connections over finite fields."""

__version__ = "0.1.0"

from .field import PrimeField, ExtField, FieldElement, find_order_p_element, sampling_field  # noqa: E402
from .poly import PolyRing, MultiPoly  # noqa: E402
from .ratfunc import RatFunc, RatFuncField, PoleError  # noqa: E402
from .matrix import (RingMatrix, CharPoly, char_poly, trace_wedge, is_nilpotent, isospectral,  # noqa: E402
                     pencil_isospectral, matrix_frobenius_twist, Strategy)
from .connection import ConnectionFamily, Kind, trivializable_at_zero_test  # noqa: E402
from .difference import ShiftConnection, p_curvature_additive, p_curvature_multiplicative  # noqa: E402

__all__ = [
    "PrimeField", "ExtField", "FieldElement", "find_order_p_element", "sampling_field",
    "PolyRing", "MultiPoly", "RatFunc", "RatFuncField", "PoleError",
    "RingMatrix", "CharPoly", "char_poly", "trace_wedge", "is_nilpotent", "isospectral",
    "pencil_isospectral", "matrix_frobenius_twist", "Strategy",
    "ConnectionFamily", "Kind", "trivializable_at_zero_test",
    "ShiftConnection", "p_curvature_additive", "p_curvature_multiplicative",
]
