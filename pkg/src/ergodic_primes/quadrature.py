"""Polar-coordinate quadrature over dilated convex regions.

Integrals over Omega_t are written as an angular integral of a radial one,
with the radial upper limit t * rho(theta) read off the region's gauge, so
the boundary is resolved exactly instead of being masked on a grid.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError, QuadratureError

MAX_NODES = 1 << 22


def _gauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def sphere_rule(k, n, breaks=(), smooth=True):
    """Directions and weights integrating functions on S^{k-1} (surface measure)."""
    if k == 1:
        return np.array([[-1.0], [1.0]]), np.array([1.0, 1.0])
    if k == 2:
        if breaks:
            b = sorted(breaks)
            panels = list(zip(b, b[1:] + [b[0] + 2 * math.pi]))
        elif smooth:
            th = 2 * math.pi * (np.arange(n) + 0.5) / n
            return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(n, 2 * math.pi / n)
        else:
            edges = np.linspace(0, 2 * math.pi, 9)
            panels = list(zip(edges[:-1], edges[1:]))
        x, w = _gauss(max(n // len(panels), 4))
        th, wt = [], []
        for a, c in panels:
            th.append(0.5 * (c - a) * x + 0.5 * (c + a))
            wt.append(0.5 * (c - a) * w)
        th = np.concatenate(th)
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.concatenate(wt)
    # hyperspherical coordinates: k-2 polar angles in [0, pi], one azimuth
    m = max(4, int(round(n ** (1 / (k - 1)) * 2)))
    x, w = _gauss(m)
    phi = 0.5 * math.pi * (x + 1)
    wphi = 0.5 * math.pi * w
    az = 2 * math.pi * (np.arange(2 * m) + 0.5) / (2 * m)
    waz = np.full(2 * m, math.pi / m)
    grids = np.meshgrid(*([phi] * (k - 2) + [az]), indexing="ij")
    wgrids = np.meshgrid(*([wphi] * (k - 2) + [waz]), indexing="ij")
    angles = [g.ravel() for g in grids]
    weight = np.prod([g.ravel() for g in wgrids], axis=0)
    dirs = np.empty((len(weight), k))
    s = np.ones(len(weight))
    for i, a in enumerate(angles[:-1]):
        dirs[:, i] = s * np.cos(a)
        weight = weight * np.sin(a) ** (k - 2 - i)
        s = s * np.sin(a)
    dirs[:, k - 2] = s * np.cos(angles[-1])
    dirs[:, k - 1] = s * np.sin(angles[-1])
    return dirs, weight


def polar_nodes(region, t, n_ang, n_rad, inner=0.0):
    """Cartesian nodes and weights for the integral over Omega_t minus Omega_inner."""
    dirs, wdir = sphere_rule(region.k, n_ang, region.angular_breaks, region.smooth)
    rho = region.radial(dirs)
    x, w = _gauss(n_rad)
    lo = inner * rho
    hi = t * rho
    r = lo[:, None] + (hi - lo)[:, None] * 0.5 * (x[None, :] + 1)
    wr = (hi - lo)[:, None] * 0.5 * w[None, :] * r ** (region.k - 1)
    pts = dirs[:, None, :] * r[:, :, None]
    return pts.reshape(-1, region.k), (wdir[:, None] * wr).ravel()


def polar_integrate(region, g, t, inner=0.0, tol=1e-10, atol=1e-13, n_start=16, max_nodes=MAX_NODES):
    """Integrate g over Omega_t (minus Omega_inner), doubling node counts until stable.

    Raises QuadratureError carrying the last estimate when the node budget
    runs out first.
    """
    if t <= 0 or inner < 0 or inner >= t:
        raise ParameterError("need 0 <= inner < t")
    n_ang = n_rad = n_start
    prev = err = None
    while True:
        pts, w = polar_nodes(region, t, n_ang, n_rad, inner)
        val = complex(np.sum(np.asarray(g(pts)) * w))
        if prev is not None:
            err = abs(val - prev)
            if err <= max(tol * abs(val), atol):
                return val
        prev = val
        if region.k == 1:
            n_rad *= 2
        else:
            n_ang *= 2
            n_rad *= 2
        size = (2 if region.k == 1 else n_ang) * n_rad
        if size > max_nodes:
            raise QuadratureError(
                f"quadrature did not settle below tol={tol} within {max_nodes} nodes",
                estimate=val,
                error=err,
            )
