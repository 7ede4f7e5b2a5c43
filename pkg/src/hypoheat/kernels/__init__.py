"""Heat-kernel evaluators for the five model groups."""

from __future__ import annotations

from ..groups import (H2Element, SE2Element, SL2Element, SO3Element,
                      SU2Element)
from ..policy import DEFAULT_POLICY, InputError, KernelResult
from .h2 import gaveau_kernel, h2_kernel, h2_kernel_points
from .se2 import se2_basis, se2_kernel, se2_kernel_points, se2_lambda_term
from .sl2 import sl2_discrete_elements, sl2_kernel, sl2_principal_elements
from .so3 import so3_kernel, so3_kernel_covering, so3_kernel_direct
from .su2 import su2_kernel, su2_kernel_alphas, su2_level_cut, su2_matrix_diag

_DISPATCH = {
    "h2": (H2Element, h2_kernel),
    "su2": (SU2Element, su2_kernel),
    "so3": (SO3Element, so3_kernel),
    "sl2": (SL2Element, sl2_kernel),
    "se2": (SE2Element, se2_kernel),
}


def kernel(tag, g, t, policy=DEFAULT_POLICY) -> KernelResult:
    """Evaluate the heat kernel p_t(g) for the group named by `tag`."""
    try:
        eltype, fn = _DISPATCH[tag]
    except KeyError:
        raise InputError(f"unknown group tag {tag!r}; choose from {sorted(_DISPATCH)}")
    if not isinstance(g, eltype):
        raise InputError(f"{tag} kernel expects a {eltype.__name__}, got {type(g).__name__}")
    return fn(g, t, policy)


__all__ = [
    "kernel", "h2_kernel", "h2_kernel_points", "gaveau_kernel",
    "su2_kernel", "su2_kernel_alphas", "su2_level_cut", "su2_matrix_diag",
    "so3_kernel", "so3_kernel_direct", "so3_kernel_covering",
    "sl2_kernel", "sl2_principal_elements", "sl2_discrete_elements",
    "se2_kernel", "se2_kernel_points", "se2_basis", "se2_lambda_term",
]
