"""
weylcones
- exact enumeration of Weyl tessellations of types A_(n-1) and B_n
- closed-form counts and expectations of Weyl random cones and their duals
- Monte Carlo estimators of conic functionals
"""
from .combinatorics import (
    acceptance_probability,
    expected_face_count,
    expected_intrinsic_volume,
    expected_quermass,
    expected_size_functional,
    formula_table,
    region_count,
    stirling,
)
from .models import Distribution, Estimate, ExperimentSpec, Family, PointConfig, RngSpec, SignedOrdering, StirlingKind
from .tessellation import enumerate_cones, enumerate_faces, incidence_sum

__version__ = '0.1.0'
