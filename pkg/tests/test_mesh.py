import numpy as np
import pytest

from etmfd.mesh import build_mesh, interpolate_edge_field, interpolate_face_field

from conftest import edge_average_oracle


def test_smallest_mesh():
    m = build_mesh(1, 1, 1.0, 1.0, "pec")
    assert m.n_edges == 4
    assert m.n_faces == 1
    assert m.boundary_edge_mask.all()


def test_counting_2x3():
    m = build_mesh(2, 3, 1.0, 1.0, "pec")
    assert m.n_hedges == 8
    assert m.n_vedges == 9
    assert m.n_edges == 17
    assert m.n_faces == 6


def test_boundary_count_2x2():
    m = build_mesh(2, 2, 1.0, 1.0, "pec")
    assert m.boundary_edge_mask.sum() == 8
    assert m.interior_edge_mask.sum() == 4


@pytest.mark.parametrize("nx", range(1, 17))
@pytest.mark.parametrize("ny", [1, 2, 5, 16])
def test_counting_formulas_exhaustive(nx, ny):
    m = build_mesh(nx, ny, 2.0, 3.0, "pec")
    assert m.n_hedges == nx * (ny + 1)
    assert m.n_vedges == (nx + 1) * ny
    assert m.n_faces == nx * ny
    p = build_mesh(nx, ny, 2.0, 3.0, "periodic")
    assert p.n_edges == 2 * nx * ny
    assert not p.boundary_edge_mask.any()


def test_face_edge_shift_vectors():
    m = build_mesh(3, 4, 1.5, 2.0, "pec")
    mids = m.edge_midpoints
    for f in range(m.n_faces):
        bottom, right, top, left = m.face_edges(f)
        assert np.allclose(mids[top] - mids[bottom], [0.0, m.dy])
        assert np.allclose(mids[left] - mids[right], [-m.dx, 0.0])
        # orientation of the four slots
        assert m.is_horizontal(bottom) and m.is_horizontal(top)
        assert not m.is_horizontal(right) and not m.is_horizontal(left)


def test_gamma_and_sizes():
    m = build_mesh(4, 8, 1.0, 4.0, "pec")
    assert m.dx == 0.25
    assert m.dy == 0.5
    assert m.gamma == m.dy / m.dx == 2.0


@pytest.mark.parametrize("bad", [(0, 1, 1.0, 1.0), (1, -2, 1.0, 1.0),
                                 (1, 1, 0.0, 1.0), (1, 1, 1.0, -3.0)])
def test_rejects_bad_dimensions(bad):
    with pytest.raises(ValueError):
        build_mesh(*bad)


def test_rejects_bad_boundary_mode():
    with pytest.raises(ValueError):
        build_mesh(2, 2, 1.0, 1.0, "dirichlet")


# ---- interpolation ----------------------------------------------------------

@pytest.mark.parametrize("rule", ["midpoint", 2, 4])
def test_constant_field(rule):
    m = build_mesh(3, 2, 1.0, 1.0, "pec")
    dof = interpolate_edge_field(m, lambda x, y: (1.0 + 0 * x, 0 * y), rule)
    assert np.allclose(dof[:m.n_hedges], 1.0)
    assert np.allclose(dof[m.n_hedges:], 0.0)


@pytest.mark.parametrize("rule", ["midpoint", 2])
def test_linear_field_on_axis_edge(rule):
    # F = (y, 0): zero on every horizontal edge lying on y=0
    m = build_mesh(4, 4, 1.0, 1.0, "pec")
    dof = interpolate_edge_field(m, lambda x, y: (y, 0 * x), rule)
    for i in range(m.nx):
        assert dof[m.hedge_index(i, 0)] == 0.0


def test_edge_gauss4_matches_analytic_integral():
    # standing-mode profile at t=0, kx = ky = pi, h = 1/8
    m = build_mesh(8, 8, 1.0, 1.0, "pec")
    kx = ky = np.pi

    def F(x, y):
        return (-ky * np.cos(kx * x) * np.sin(ky * y),
                kx * np.sin(kx * x) * np.cos(ky * y))

    dof = interpolate_edge_field(m, F, 4)
    ref = edge_average_oracle(m, kx, ky)
    assert np.abs(dof - ref).max() < 1e-12


def test_interpolation_linearity(rng):
    m = build_mesh(5, 3, 1.0, 1.0, "pec")
    a, b = 1.7, -0.4

    def F(x, y):
        return (np.sin(x) + y, x * y)

    def G(x, y):
        return (x ** 2, np.cos(y))

    def combo(x, y):
        fx, fy = F(x, y)
        gx, gy = G(x, y)
        return a * fx + b * gx, a * fy + b * gy

    for rule in ("midpoint", 3):
        lhs = interpolate_edge_field(m, combo, rule)
        rhs = (a * interpolate_edge_field(m, F, rule)
               + b * interpolate_edge_field(m, G, rule))
        assert np.abs(lhs - rhs).max() < 1e-14 * max(1.0, np.abs(rhs).max())


def test_face_constant():
    m = build_mesh(2, 2, 1.0, 1.0, "pec")
    assert np.allclose(interpolate_face_field(m, lambda x, y: 1.0 + 0 * x, 2), 1.0)
    assert np.allclose(interpolate_face_field(m, lambda x, y: 1.0 + 0 * x,
                                              "midpoint"), 1.0)


def test_face_linear_exact():
    h = 0.5
    m = build_mesh(2, 2, 2 * h, 2 * h, "pec")
    dof = interpolate_face_field(m, lambda x, y: x, 2)
    assert abs(dof[0] - h / 2) < 1e-15


def test_face_trig_average():
    # cell [0, 1/4]^2 of sin(pi x) sin(pi y); closed-form double integral
    m = build_mesh(4, 4, 1.0, 1.0, "pec")
    dof = interpolate_face_field(m, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y), 6)
    exact = 16.0 * ((1.0 - np.cos(np.pi / 4)) / np.pi) ** 2
    assert abs(dof[0] - exact) < 1e-12
