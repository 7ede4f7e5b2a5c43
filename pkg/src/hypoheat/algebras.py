"""Predefined Lie algebras and the singular example frames.

Structure constants follow the bracket tables of the basis matrices listed in
groups.py; the matrix-commutator cross-checks live in the tests.
"""

from __future__ import annotations

import numpy as np

from .lie import FramePointData, LieAlgebraSpec
from .policy import InputError


def _spec(brackets, n, horizontal, name):
    """brackets: {(i, j): coeff-vector} with i < j; antisymmetry is filled in."""
    c = np.zeros((n, n, n))
    for (i, j), v in brackets.items():
        c[i, j] = v
        c[j, i] = -np.asarray(v, dtype=float)
    return LieAlgebraSpec(structure_constants=c, horizontal=horizontal, name=name)


def heisenberg_spec():
    """[p1,p2] = k, everything else commutes."""
    return _spec({(0, 1): [0, 0, 1]}, 3, (0, 1), "heisenberg")


def su2_spec():
    """Cyclic brackets [p1,p2]=k, [p2,k]=p1, [k,p1]=p2."""
    return _spec({(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]},
                 3, (0, 1), "su2")


def so3_spec():
    # same structure constants as su(2): ad is a Lie-algebra isomorphism
    spec = su2_spec()
    return LieAlgebraSpec(spec.structure_constants, (0, 1), "so3")


def sl2_spec():
    """[p1,p2] = -k, [p2,k] = p1, [k,p1] = p2."""
    return _spec({(0, 1): [0, 0, -1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]},
                 3, (0, 1), "sl2")


def se2_spec():
    """Basis (p0, p1, p2): [p0,p1] = p2, [p0,p2] = -p1, [p1,p2] = 0."""
    return _spec({(0, 1): [0, 0, 1], (0, 2): [0, -1, 0]}, 3, (0, 1), "se2")


def aff_r_spec():
    """A+(R) (+) R, basis (p1, p2, k): [p1,p2] = k, [p2,k] = 0, [k,p1] = -k.

    The standard non-unimodular 3D example: Tr(ad p1) = 1.
    """
    return _spec({(0, 1): [0, 0, 1], (0, 2): [0, 0, 1]}, 3, (0, 1), "aff_r")


ALGEBRAS = {
    "h2": heisenberg_spec,
    "su2": su2_spec,
    "so3": so3_spec,
    "sl2": sl2_spec,
    "se2": se2_spec,
    "aff_r": aff_r_spec,
}


def algebra(tag):
    try:
        return ALGEBRAS[tag]()
    except KeyError:
        raise InputError(f"unknown algebra tag {tag!r}; choose from {sorted(ALGEBRAS)}")


def martinet_frame(point):
    """Martinet structure on R^3: L1 = dx + (y^2/2) dz, L2 = dy.

    Supplies brackets through length 3 so the y=0 stratum is resolved:
    [L1,L2] = -y dz, [L2,[L1,L2]] = -dz.
    """
    x, y, z = np.asarray(point, dtype=float)
    frame = np.array([[1.0, 0.0],
                      [0.0, 1.0],
                      [y * y / 2.0, 0.0]])
    closure = {
        (0, 1): np.array([0.0, 0.0, -y]),
        (0, 0, 1): np.array([0.0, 0.0, 0.0]),
        (1, 0, 1): np.array([0.0, 0.0, -1.0]),
    }
    return FramePointData(frame=frame, bracket_closure=closure)


def grushin_frame(point):
    """Grushin structure on R^2: L1 = dx, L2 = x dy (Riemannian where x != 0)."""
    x, y = np.asarray(point, dtype=float)
    frame = np.array([[1.0, 0.0],
                      [0.0, x]])
    return FramePointData(frame=frame, bracket_closure={})


def heisenberg_chart_frame(point):
    """Left-invariant Heisenberg frame in exponential coordinates:
    L1 = dx - (y/2) dz, L2 = dy + (x/2) dz, [L1,L2] = dz."""
    x, y, z = np.asarray(point, dtype=float)
    frame = np.array([[1.0, 0.0],
                      [0.0, 1.0],
                      [-y / 2.0, x / 2.0]])
    closure = {(0, 1): np.array([0.0, 0.0, 1.0])}
    return FramePointData(frame=frame, bracket_closure=closure)
