"""Truncation policies and kernel results shared by all evaluators."""

from __future__ import annotations

from dataclasses import dataclass, field, replace


class InputError(ValueError):
    """Bad arguments (dimension mismatch, t <= 0, unknown group tag...)."""


class AccuracyError(RuntimeError):
    """Requested tolerance unreachable within the node/series budget."""

    def __init__(self, msg, tail_estimate=None):
        super().__init__(msg)
        self.tail_estimate = tail_estimate


@dataclass(frozen=True)
class TruncationPolicy:
    """All cutoffs used to make the infinite sums/integrals finite.

    series_cut: degree cut for the discrete duals (SU(2)/SO(3) degree,
        SL(2) discrete weight, SE(2) Mathieu order).  None = adaptive.
    spectral_box: lambda_max / v_max for the continuous duals.  None =
        adaptive, starting from 8/sqrt(t).
    quad_nodes: node count per compact quadrature direction.
    box: half-width (in units of sqrt(t)) of the truncation box used for
        noncompact group directions in Haar quadrature.
    """

    series_cut: int | None = None
    spectral_box: float | None = None
    quad_nodes: int = 64
    abs_tol: float = 1e-8
    rel_tol: float = 1e-10
    box: float = 8.0
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.series_cut is not None and self.series_cut <= 0:
            raise InputError("series_cut must be positive")
        if self.spectral_box is not None and self.spectral_box <= 0:
            raise InputError("spectral_box must be positive")
        if self.quad_nodes <= 0:
            raise InputError("quad_nodes must be positive")
        for tol in (self.abs_tol, self.rel_tol):
            if not 0.0 < tol < 1.0:
                raise InputError("tolerances must lie in (0, 1)")

    def with_(self, **kw):
        return replace(self, **kw)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class KernelResult:
    """A kernel value with the truncation error estimate that produced it."""

    value: float
    imag_residual: float
    tail_estimate: float
    policy_used: TruncationPolicy = field(repr=False, default=DEFAULT_POLICY)

    def __float__(self):
        return self.value
