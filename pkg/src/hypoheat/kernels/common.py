"""Shared numerics for the kernel evaluators."""

from __future__ import annotations

import numpy as np

from ..policy import AccuracyError


def panel_gauss(a, b, width, nodes_per_panel=16, max_panels=5000):
    """Gauss-Legendre panels covering [a, b] with panels of at most `width`."""
    if b <= a:
        raise ValueError("empty quadrature interval")
    npanels = int(np.ceil((b - a) / width))
    if npanels > max_panels:
        raise AccuracyError(
            f"quadrature needs {npanels} panels (cap {max_panels}); "
            "integrand oscillates too fast for the current policy")
    x0, w0 = np.polynomial.legendre.leggauss(nodes_per_panel)
    edges = np.linspace(a, b, npanels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def kahan_add(acc, comp, term):
    """One compensated-summation step; acc/comp are arrays updated in place."""
    y = term - comp
    tnew = acc + y
    comp[...] = (tnew - acc) - y
    acc[...] = tnew
