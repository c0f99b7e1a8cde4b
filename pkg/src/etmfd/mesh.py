"""Structured rectangular mesh with edge and face degrees of freedom.

A field of vectors is represented by one real DoF per edge: the average
tangential component along the edge, with global tangents fixed to +x for
horizontal edges and +y for vertical ones.  A scalar field carries one DoF
per face: its cell average.  Per-face orientation signs (counter-clockwise
circulation) live in the local curl vector, not in the DoF.

Edges are indexed horizontally-first.  On a PEC mesh the horizontal edge
(i, j) sits on the line y = j*dy spanning cells i, i in [0, nx), j in
[0, ny]; vertical edges follow, (i, j) on x = i*dx with i in [0, nx],
j in [0, ny).  Periodic meshes identify j = ny with j = 0 (and i = nx
with i = 0), so both orientations count nx*ny edges.
"""

from __future__ import annotations

import numpy as np

BOUNDARY_MODES = ("pec", "periodic")


class RectMesh:
    """Uniform rectangular mesh on [0, Lx] x [0, Ly] with nx*ny cells."""

    def __init__(self, nx: int, ny: int, Lx: float, Ly: float,
                 boundary: str = "pec"):
        if nx < 1 or ny < 1:
            raise ValueError(f"cell counts must be >= 1, got nx={nx}, ny={ny}")
        if Lx <= 0 or Ly <= 0:
            raise ValueError(f"domain extents must be > 0, got Lx={Lx}, Ly={Ly}")
        if boundary not in BOUNDARY_MODES:
            raise ValueError(f"boundary must be one of {BOUNDARY_MODES}, got {boundary!r}")
        self.nx = int(nx)
        self.ny = int(ny)
        self.Lx = float(Lx)
        self.Ly = float(Ly)
        self.boundary = boundary
        self.dx = self.Lx / self.nx
        self.dy = self.Ly / self.ny
        self.gamma = self.dy / self.dx

        if boundary == "pec":
            self.n_hedges = self.nx * (self.ny + 1)
            self.n_vedges = (self.nx + 1) * self.ny
        else:
            self.n_hedges = self.nx * self.ny
            self.n_vedges = self.nx * self.ny
        self.n_edges = self.n_hedges + self.n_vedges
        self.n_faces = self.nx * self.ny

        self._face_edges = self._build_face_edges()
        self._midpoints, self._tangents, self._lengths = self._build_geometry()
        self._boundary_mask = self._build_boundary_mask()

    # ---- indexing ---------------------------------------------------------

    def hedge_index(self, i: int, j: int) -> int:
        """Horizontal edge on y = j*dy spanning cell column i."""
        if self.boundary == "periodic":
            i, j = i % self.nx, j % self.ny
        return j * self.nx + i

    def vedge_index(self, i: int, j: int) -> int:
        """Vertical edge on x = i*dx spanning cell row j."""
        if self.boundary == "periodic":
            i, j = i % self.nx, j % self.ny
            return self.n_hedges + j * self.nx + i
        return self.n_hedges + j * (self.nx + 1) + i

    def face_index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def is_horizontal(self, e: int) -> bool:
        return e < self.n_hedges

    def face_edges(self, f: int) -> np.ndarray:
        """The four edges of face f in [bottom, right, top, left] order."""
        return self._face_edges[f]

    @property
    def face_edge_table(self) -> np.ndarray:
        """(n_faces, 4) edge indices, columns [bottom, right, top, left]."""
        return self._face_edges

    def _build_face_edges(self) -> np.ndarray:
        table = np.empty((self.n_faces, 4), dtype=np.int64)
        for j in range(self.ny):
            for i in range(self.nx):
                f = self.face_index(i, j)
                table[f, 0] = self.hedge_index(i, j)
                table[f, 1] = self.vedge_index(i + 1, j)
                table[f, 2] = self.hedge_index(i, j + 1)
                table[f, 3] = self.vedge_index(i, j)
        return table

    # ---- geometry ---------------------------------------------------------

    def _build_geometry(self):
        mids = np.empty((self.n_edges, 2))
        tangents = np.zeros((self.n_edges, 2))
        lengths = np.empty(self.n_edges)
        njh = self.ny + 1 if self.boundary == "pec" else self.ny
        for j in range(njh):
            for i in range(self.nx):
                e = self.hedge_index(i, j)
                mids[e] = ((i + 0.5) * self.dx, j * self.dy)
                tangents[e] = (1.0, 0.0)
                lengths[e] = self.dx
        niv = self.nx + 1 if self.boundary == "pec" else self.nx
        for j in range(self.ny):
            for i in range(niv):
                e = self.vedge_index(i, j)
                mids[e] = (i * self.dx, (j + 0.5) * self.dy)
                tangents[e] = (0.0, 1.0)
                lengths[e] = self.dy
        return mids, tangents, lengths

    @property
    def edge_midpoints(self) -> np.ndarray:
        return self._midpoints

    @property
    def edge_tangents(self) -> np.ndarray:
        return self._tangents

    @property
    def edge_lengths(self) -> np.ndarray:
        return self._lengths

    def face_center(self, f: int) -> tuple[float, float]:
        i, j = f % self.nx, f // self.nx
        return ((i + 0.5) * self.dx, (j + 0.5) * self.dy)

    # ---- boundary ---------------------------------------------------------

    def _build_boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_edges, dtype=bool)
        if self.boundary == "periodic":
            return mask
        for i in range(self.nx):
            mask[self.hedge_index(i, 0)] = True
            mask[self.hedge_index(i, self.ny)] = True
        for j in range(self.ny):
            mask[self.vedge_index(0, j)] = True
            mask[self.vedge_index(self.nx, j)] = True
        return mask

    @property
    def boundary_edge_mask(self) -> np.ndarray:
        """True for edges lying on the domain boundary (empty if periodic)."""
        return self._boundary_mask

    @property
    def interior_edge_mask(self) -> np.ndarray:
        return ~self._boundary_mask

    def __repr__(self):
        return (f"RectMesh(nx={self.nx}, ny={self.ny}, Lx={self.Lx}, "
                f"Ly={self.Ly}, boundary={self.boundary!r})")


def build_mesh(nx: int, ny: int, Lx: float, Ly: float,
               boundary: str = "pec") -> RectMesh:
    """Construct a rectangular mesh; rejects non-positive dimensions."""
    return RectMesh(nx, ny, Lx, Ly, boundary)


def _gauss_nodes_weights(n: int):
    # nodes on [-1, 1], weights normalized to sum to 1 (averaging rule)
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w / 2.0


def interpolate_edge_field(mesh: RectMesh, F, rule="midpoint") -> np.ndarray:
    """Edge DoF of a vector field F: average tangential component per edge.

    F must be vectorized: F(x, y) -> (fx, fy) for ndarray x, y.  With
    rule="midpoint" each DoF is the tangential component at the edge
    midpoint; an integer rule n uses n-point Gauss-Legendre along the edge.
    """
    mids = mesh.edge_midpoints
    nh = mesh.n_hedges
    out = np.empty(mesh.n_edges)
    if rule == "midpoint":
        fx, _ = F(mids[:nh, 0], mids[:nh, 1])
        _, fy = F(mids[nh:, 0], mids[nh:, 1])
        out[:nh] = fx
        out[nh:] = fy
        return out
    n = int(rule)
    nodes, weights = _gauss_nodes_weights(n)
    out[:] = 0.0
    for xi, wi in zip(nodes, weights):
        fx, _ = F(mids[:nh, 0] + 0.5 * mesh.dx * xi, mids[:nh, 1])
        _, fy = F(mids[nh:, 0], mids[nh:, 1] + 0.5 * mesh.dy * xi)
        out[:nh] += wi * fx
        out[nh:] += wi * fy
    return out


def interpolate_face_field(mesh: RectMesh, g, rule=2) -> np.ndarray:
    """Face DoF of a scalar field g: cell average per face.

    rule="midpoint" samples the cell center; an integer n uses a tensor
    n x n Gauss-Legendre average.
    """
    centers = np.array([mesh.face_center(f) for f in range(mesh.n_faces)])
    if rule == "midpoint":
        return np.asarray(g(centers[:, 0], centers[:, 1]), dtype=float)
    n = int(rule)
    nodes, weights = _gauss_nodes_weights(n)
    out = np.zeros(mesh.n_faces)
    for xi, wi in zip(nodes, weights):
        for yi, wj in zip(nodes, weights):
            out += wi * wj * g(centers[:, 0] + 0.5 * mesh.dx * xi,
                               centers[:, 1] + 0.5 * mesh.dy * yi)
    return out
