"""trisect: exact curves on surfaces and trisection diagrams of 4-manifolds."""

from .surface import (HomologyClass, Triangulation, algebraic_intersection,
                      standard_triangulation, symplectic_form)
from .curves import (MappingClassWord, NormalMultiCurve, SimpleClosedCurve,
                     algebraic_class, apply_mapping_class, dehn_twist,
                     geometric_intersection, is_isotopic, named_curve,
                     slope_curve)

__all__ = [
    "HomologyClass", "Triangulation", "algebraic_intersection",
    "standard_triangulation", "symplectic_form",
    "MappingClassWord", "NormalMultiCurve", "SimpleClosedCurve",
    "algebraic_class", "apply_mapping_class", "dehn_twist",
    "geometric_intersection", "is_isotopic", "named_curve", "slope_curve",
]
