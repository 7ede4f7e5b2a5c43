"""Lie-algebra layer: brackets, adjoint traces, growth vectors, Popp density.

Conventions
-----------
* A :class:`LieAlgebraSpec` stores structure constants ``c[i, j, k]`` with
  ``[p_i, p_j] = sum_k c[i,j,k] p_k`` and a list of horizontal generator
  indices; the horizontal generators are declared orthonormal.
* Point data for a frame on a coordinate chart is a :class:`FramePointData`:
  the values of the orthonormal frame columns plus the values of iterated
  brackets, tagged by their bracket word.  A word ``(i1, ..., ik)`` means the
  left-nested bracket ``[X_i1, [X_i2, [..., X_ik]]]`` (0-based frame indices).
  Each length-2 word should be supplied once, with ``i1 < i2``; the Popp
  construction treats the supplied words of a given length as an orthonormal
  basis of the tensor slot they span, which reproduces the 3D-contact
  normalization ``mu = dX1 ^ dX2 ^ d[X1,X2]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .policy import InputError

JACOBI_TOL = 1e-12
RANK_RTOL = 1e-10


class SingularPointError(RuntimeError):
    """The flag does not reach full dimension at the requested point."""


def _rank(cols, rtol=RANK_RTOL):
    if cols.size == 0:
        return 0
    s = np.linalg.svd(cols, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Finite-dimensional Lie algebra with a distinguished horizontal basis."""

    structure_constants: np.ndarray  # c[i, j, k]
    horizontal: tuple
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "horizontal", tuple(int(i) for i in self.horizontal))
        n = self.dim
        if c.shape != (n, n, n):
            raise InputError("structure constants must be an (n, n, n) array")
        if not self.horizontal:
            raise InputError("at least one horizontal generator required")
        if any(not 0 <= i < n for i in self.horizontal):
            raise InputError("horizontal index out of range")
        anti = np.max(np.abs(c + np.transpose(c, (1, 0, 2))))
        if anti > JACOBI_TOL:
            raise InputError(f"structure constants not antisymmetric (residual {anti:.2e})")
        # Jacobi: [[pi,pj],pk] + [[pj,pk],pi] + [[pk,pi],pj] = 0
        t = np.einsum("ijm,mkl->ijkl", c, c)
        jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        res = np.max(np.abs(jac))
        if res > JACOBI_TOL:
            raise InputError(f"Jacobi identity fails (residual {res:.2e})")

    @property
    def dim(self):
        return int(np.asarray(self.structure_constants).shape[0])

    @property
    def m(self):
        return len(self.horizontal)


def bracket(spec: LieAlgebraSpec, u, v):
    """[u, v] in coefficient coordinates."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = spec.dim
    if u.shape != (n,) or v.shape != (n,):
        raise InputError(f"coefficient vectors must have length {n}")
    return np.einsum("i,j,ijk->k", u, v, spec.structure_constants)


def trace_ad(spec: LieAlgebraSpec, i):
    """Tr(ad p_i) = sum_j c[i, j, j]."""
    n = spec.dim
    if not 0 <= i < n:
        raise InputError("basis index out of range")
    return float(np.trace(spec.structure_constants[i]))


def is_unimodular(spec: LieAlgebraSpec, tol=1e-12):
    return all(abs(trace_ad(spec, i)) <= tol for i in range(spec.dim))


def laplacian_first_order(spec: LieAlgebraSpec):
    """First-order coefficients (Tr(ad p_1), ..., Tr(ad p_m)) of the
    left-invariant Laplacian sum_i L_{X_i}^2 + sum_i Tr(ad p_i) L_{X_i}."""
    return np.array([trace_ad(spec, i) for i in spec.horizontal])


def growth_vector_spec(spec: LieAlgebraSpec):
    """Flag dimensions generated by the horizontal subspace of a spec."""
    n = spec.dim
    c = spec.structure_constants
    gens = np.eye(n)[:, list(spec.horizontal)]  # columns
    span = gens
    dims = [_rank(span)]
    while True:
        # brackets of current span with horizontal generators
        new = np.einsum("im,ihk->khm", span, c[:, list(spec.horizontal), :]).reshape(n, -1)
        cand = np.hstack([span, new])
        r = _rank(cand)
        if r == dims[-1]:
            break
        dims.append(r)
        span = cand
        if r == n:
            break
    return tuple(dims)


@dataclass(frozen=True)
class FramePointData:
    """Values at a point of an orthonormal frame and its iterated brackets."""

    frame: np.ndarray  # (n, m) columns X_1..X_m
    bracket_closure: dict = field(default_factory=dict)  # word -> vector

    def __post_init__(self):
        f = np.atleast_2d(np.asarray(self.frame, dtype=float))
        object.__setattr__(self, "frame", f)
        closure = {tuple(int(i) for i in w): np.asarray(v, dtype=float)
                   for w, v in self.bracket_closure.items()}
        object.__setattr__(self, "bracket_closure", closure)
        n, m = f.shape
        if m > n:
            raise InputError("more frame columns than coordinates")
        if _rank(f) < m:
            raise InputError("frame columns are linearly dependent")
        for w, v in closure.items():
            if len(w) < 2:
                raise InputError(f"bracket word {w} too short")
            if v.shape != (n,):
                raise InputError(f"bracket value for word {w} has wrong length")

    @property
    def coords_dim(self):
        return self.frame.shape[0]

    @property
    def m(self):
        return self.frame.shape[1]

    def words_of_length(self, k):
        return sorted(w for w in self.bracket_closure if len(w) == k)

    @property
    def max_word_length(self):
        return max((len(w) for w in self.bracket_closure), default=1)


def _flag_spans(data: FramePointData):
    """Column blocks spanning Delta_1 <= Delta_2 <= ... at the point."""
    spans = [data.frame]
    cols = data.frame
    for k in range(2, data.max_word_length + 1):
        words = data.words_of_length(k)
        if not words:
            break
        cols = np.hstack([cols] + [data.bracket_closure[w][:, None] for w in words])
        spans.append(cols)
    return spans


def growth_vector_data(data: FramePointData):
    # the flag may stall at a point and still grow at the next step (e.g.
    # Martinet at y=0, where [L1,L2] vanishes but [L2,[L1,L2]] does not),
    # so scan every supplied bracket length instead of stopping on a repeat
    n = data.coords_dim
    dims = []
    for cols in _flag_spans(data):
        r = _rank(cols)
        dims.append(r)
        if r == n:
            break
    return tuple(dims)


def growth_vector(obj):
    """Flag dimensions (n_1, ..., n_k); dispatches on the input type."""
    if isinstance(obj, LieAlgebraSpec):
        return growth_vector_spec(obj)
    if isinstance(obj, FramePointData):
        return growth_vector_data(obj)
    raise InputError("growth_vector expects a LieAlgebraSpec or FramePointData")


def popp_density(data: FramePointData):
    """Density of the Popp volume against the coordinate volume at the point.

    Builds the layer maps from the tagged bracket words, puts the quotient
    Euclidean structure on each layer through minimal-norm preimages
    (pseudo-inverse with the shared rank cutoff), and assembles the wedge of
    the layer volume forms in an adapted basis.
    """
    n = data.coords_dim
    spans = _flag_spans(data)
    dims = growth_vector_data(data)
    if dims[-1] < n:
        step = len(dims)
        raise SingularPointError(
            f"flag stabilizes at dimension {dims[-1]} < {n} (step {step})")

    # adapted basis: frame columns, then greedily chosen bracket vectors
    adapted = [data.frame[:, j] for j in range(data.m)]
    layer_slices = [list(range(data.m))]
    layer_words = [None]
    for k in range(2, len(spans) + 1):
        words = data.words_of_length(k)
        if not words:
            break
        chosen = []
        base = np.column_stack(adapted)
        r0 = _rank(base)
        if r0 == n:
            break
        for w in words:
            v = data.bracket_closure[w]
            cand = np.column_stack(adapted + [v])
            if _rank(cand) > _rank(np.column_stack(adapted)):
                adapted.append(v)
                chosen.append(len(adapted) - 1)
        if chosen:
            layer_slices.append(chosen)
            layer_words.append(words)

    Z = np.column_stack(adapted)
    if Z.shape[1] != n:
        raise SingularPointError("adapted basis incomplete; flag degenerate")
    Zinv = np.linalg.inv(Z)

    density = 1.0  # layer 1 is orthonormal by convention
    for layer, (idx, words) in enumerate(zip(layer_slices[1:], layer_words[1:]), start=2):
        # B maps word coordinates (orthonormal) to quotient coordinates in
        # the representatives of this layer; quotient metric G = (B B^T)^-1.
        B = np.empty((len(idx), len(words)))
        for col, w in enumerate(words):
            a = Zinv @ data.bracket_closure[w]
            B[:, col] = a[idx]
        gram = B @ B.T
        det = np.linalg.det(gram)
        if det <= 0:
            raise SingularPointError(f"degenerate layer map at step {layer}")
        density /= np.sqrt(det)
    return float(density / abs(np.linalg.det(Z)))


def intrinsic_laplacian_coeffs_at_point(data: FramePointData, popp_jet,
                                        frame_divergence=None):
    """First-order coefficients c_i of Delta = sum L_i^2 + sum c_i L_i.

    popp_jet: pair (rho, drho) with rho the Popp density at the point and
    drho[i] its directional derivative along frame column i.
    frame_divergence: coordinate divergences of the frame columns at the
    point (defaults to zero, which covers coordinate-divergence-free frames
    such as the Martinet, Grushin and left-invariant nilpotent ones).
    """
    rho, drho = popp_jet
    drho = np.asarray(drho, dtype=float)
    if rho <= 0:
        raise SingularPointError("nonpositive density: singular point")
    if drho.shape != (data.m,):
        raise InputError("popp_jet derivatives must have one entry per frame column")
    div = np.zeros(data.m) if frame_divergence is None else np.asarray(frame_divergence, float)
    return div + drho / rho


def laplacian_coeffs_fd(frame_fn, point, step=1e-5):
    """Finite-difference driver for the first-order coefficients.

    frame_fn(point) must return a FramePointData; central differences with
    the given step supply the Popp-density jet and the frame divergences.
    """
    point = np.asarray(point, dtype=float)
    data = frame_fn(point)
    n, m = data.coords_dim, data.m
    rho = popp_density(data)

    def density_at(q):
        return popp_density(frame_fn(q))

    def frame_at(q):
        return frame_fn(q).frame

    drho = np.empty(m)
    for i in range(m):
        xi = data.frame[:, i]
        drho[i] = (density_at(point + step * xi) - density_at(point - step * xi)) / (2 * step)
    div = np.zeros(m)
    for a in range(n):
        e = np.zeros(n)
        e[a] = step
        df = (frame_at(point + e) - frame_at(point - e)) / (2 * step)
        div += df[a, :]
    return intrinsic_laplacian_coeffs_at_point(data, (rho, drho), div)


def frame_from_spec(spec: LieAlgebraSpec):
    """Left-invariant FramePointData of a spec, in the algebra's own
    coordinates at the identity (structure constants give the brackets)."""
    n = spec.dim
    frame = np.eye(n)[:, list(spec.horizontal)]
    closure = {}
    for a, i in enumerate(spec.horizontal):
        for b, j in enumerate(spec.horizontal):
            if a < b:
                closure[(a, b)] = spec.structure_constants[i, j]
    return FramePointData(frame=frame, bracket_closure=closure)
