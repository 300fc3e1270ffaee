"""Prototype sets, cylinder sets and their exact geometry."""

from .arrangement import Arrangement
from .loci import GenCircle
from .regions import (
    Constraint,
    PrototypeClass,
    Region,
    canonical_text,
    classify,
    cylinder_region,
    domain_region,
    invert_region,
    prototype_set,
    region_contains,
    translate_region,
)

__all__ = [
    "Arrangement",
    "GenCircle",
    "Constraint",
    "PrototypeClass",
    "Region",
    "canonical_text",
    "classify",
    "cylinder_region",
    "domain_region",
    "invert_region",
    "prototype_set",
    "region_contains",
    "translate_region",
]

from .area import AreaResult, cylinder_area, level1_tail_area, region_area  # noqa: E402

__all__ += ["AreaResult", "cylinder_area", "level1_tail_area", "region_area"]
