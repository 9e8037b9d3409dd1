"""Difference, c-difference and boomerang analysis of functions over GF(p^n), p odd."""

from .field import Field, FieldError, make_field
from .funcrep import FnTable, PowerMap, Poly, Lut, CycleComposed, TraceSwitched, catalog, materialize
from .tables import (
    bct,
    boomerang_uniformity,
    c_differential_uniformity,
    cddt,
    ddt,
    differential_uniformity,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "FieldError",
    "make_field",
    "FnTable",
    "PowerMap",
    "Poly",
    "Lut",
    "CycleComposed",
    "TraceSwitched",
    "catalog",
    "materialize",
    "cddt",
    "ddt",
    "bct",
    "c_differential_uniformity",
    "differential_uniformity",
    "boomerang_uniformity",
]
