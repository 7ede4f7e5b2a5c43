"""Hypoelliptic heat kernels on unimodular 3D Lie groups.

Evaluates the heat kernel of the intrinsic sub-Laplacian on H2 (Heisenberg),
SU(2), SO(3), SL(2) and SE(2) through their generalized Fourier transforms,
plus a Lie-algebra toolkit (Popp volume, unimodularity, intrinsic-Laplacian
coefficients) and a verification harness.
"""

from .algebras import (algebra, aff_r_spec, grushin_frame, heisenberg_spec,
                       martinet_frame, se2_spec, sl2_spec, so3_spec, su2_spec)
from .frameio import FrameFile, load_frame_file, parse_frame_file
from .groups import (GROUP_TAGS, H2Element, SE2Element, SL2Element,
                     SO3Element, SU2Element, SU11Element, ad_cover,
                     element_from_json, element_from_point, element_to_json,
                     exp_map, haar_quadrature, identity, inverse, multiply,
                     su2_preimage)
from .kernels import (gaveau_kernel, h2_kernel, h2_kernel_points, kernel,
                      se2_kernel, se2_kernel_points, sl2_kernel, so3_kernel,
                      su2_kernel)
from .lie import (FramePointData, LieAlgebraSpec, SingularPointError, bracket,
                  growth_vector, intrinsic_laplacian_coeffs_at_point,
                  is_unimodular, laplacian_coeffs_fd, laplacian_first_order,
                  popp_density, trace_ad)
from .policy import (DEFAULT_POLICY, AccuracyError, InputError, KernelResult,
                     TruncationPolicy)
from .specfun import MathieuBasis, mathieu_char_cf, mathieu_spectrum

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # policy
    "TruncationPolicy", "DEFAULT_POLICY", "KernelResult",
    "InputError", "AccuracyError",
    # lie core
    "LieAlgebraSpec", "FramePointData", "SingularPointError",
    "bracket", "trace_ad", "is_unimodular", "laplacian_first_order",
    "growth_vector", "popp_density", "intrinsic_laplacian_coeffs_at_point",
    "laplacian_coeffs_fd",
    # algebras and singular frames
    "algebra", "heisenberg_spec", "su2_spec", "so3_spec", "sl2_spec",
    "se2_spec", "aff_r_spec", "martinet_frame", "grushin_frame",
    # groups
    "GROUP_TAGS", "H2Element", "SU2Element", "SO3Element", "SL2Element",
    "SU11Element", "SE2Element", "identity", "multiply", "inverse",
    "exp_map", "ad_cover", "su2_preimage", "haar_quadrature",
    "element_from_point", "element_to_json", "element_from_json",
    # kernels
    "kernel", "h2_kernel", "h2_kernel_points", "gaveau_kernel", "su2_kernel",
    "so3_kernel", "sl2_kernel", "se2_kernel", "se2_kernel_points",
    # special functions
    "MathieuBasis", "mathieu_spectrum", "mathieu_char_cf",
    # frame files
    "FrameFile", "parse_frame_file", "load_frame_file",
]
