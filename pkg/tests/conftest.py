"""Shared independent oracles for the test suite.

These deliberately recompute quantities through routes the production
code does not take: plain-loop dense assembly, quadrature of the matrix
exponential, and analytic antiderivatives for edge integrals.
"""

import numpy as np
import pytest

from etmfd.operators import local_W, local_curl
from etmfd.plasma import series_exp_oracle


def dense_operators(mesh, params):
    """Dense W and curl-curl assembled by explicit local-to-global loops."""
    n = mesh.n_edges
    Wd = np.zeros((n, n))
    Ad = np.zeros((n, n))
    Wl = local_W(params, mesh.dx, mesh.dy)
    c = local_curl(mesh.dx, mesh.dy)
    Al = np.outer(c, c) * mesh.dx * mesh.dy
    for f in range(mesh.n_faces):
        ed = mesh.face_edges(f)
        for i in range(4):
            for j in range(4):
                Wd[ed[i], ed[j]] += Wl[i, j]
                Ad[ed[i], ed[j]] += Al[i, j]
    if mesh.boundary == "pec":
        b = mesh.boundary_edge_mask
        for M in (Wd, Ad):
            M[b, :] = 0.0
            M[:, b] = 0.0
    return Wd, Ad


def quad_integral_exp(X, dt, panels=40, order=10):
    """int_0^dt exp(X s) ds by composite Gauss-Legendre quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    out = np.zeros_like(np.asarray(X, dtype=float))
    width = dt / panels
    for p in range(panels):
        mid = (p + 0.5) * width
        for xi, wi in zip(nodes, weights):
            out += 0.5 * width * wi * series_exp_oracle(X, mid + 0.5 * width * xi)
    return out


def bloch_edge_field(mesh, kx, ky, U1, U2):
    """Complex Bloch DoF field: two reference amplitudes plus phase shifts.

    Reference edges are the bottom and right edges of face (0, 0); the
    wave numbers must be periodic-compatible (kx*Lx, ky*Ly in 2*pi*Z).
    """
    mids = mesh.edge_midpoints
    m1 = mids[mesh.hedge_index(0, 0)]
    m2 = mids[mesh.vedge_index(1, 0)]
    out = np.empty(mesh.n_edges, dtype=complex)
    nh = mesh.n_hedges
    out[:nh] = U1 * np.exp(1j * (kx * (mids[:nh, 0] - m1[0])
                                 + ky * (mids[:nh, 1] - m1[1])))
    out[nh:] = U2 * np.exp(1j * (kx * (mids[nh:, 0] - m2[0])
                                 + ky * (mids[nh:, 1] - m2[1])))
    return out


def edge_average_oracle(mesh, kx, ky):
    """Exact edge averages of the standing-mode profile via antiderivatives.

    Profile: (-ky cos(kx x) sin(ky y), kx sin(kx x) cos(ky y)).
    """
    out = np.empty(mesh.n_edges)
    mids = mesh.edge_midpoints
    nh = mesh.n_hedges
    for e in range(nh):
        x0 = mids[e, 0] - 0.5 * mesh.dx
        x1 = mids[e, 0] + 0.5 * mesh.dx
        y = mids[e, 1]
        # (1/dx) int -ky cos(kx x) sin(ky y) dx
        out[e] = -ky * np.sin(ky * y) * (np.sin(kx * x1) - np.sin(kx * x0)) / (kx * mesh.dx)
    for e in range(nh, mesh.n_edges):
        x = mids[e, 0]
        y0 = mids[e, 1] - 0.5 * mesh.dy
        y1 = mids[e, 1] + 0.5 * mesh.dy
        out[e] = kx * np.sin(kx * x) * (np.sin(ky * y1) - np.sin(ky * y0)) / (ky * mesh.dy)
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250808)
