"""Plane-wave symbol analysis and dispersion-error evaluation.

The spatial symbol S_h is the single nonzero eigenvalue (= trace) of the
Bloch-reduced discrete curl-curl W_bar * A_bar; the temporal symbol T is
the 2x2 matrix by which the exponential two-step update acts on a
time-harmonic (E, J) amplitude pair.  The relative dispersion error of a
scheme at a frequency omega is det(T(omega) - S_h(k) * P1) / |omega|,
which vanishes exactly on roots of the discrete dispersion relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import MfdParams, local_W, local_curl
from .plasma import Medium, coupling_matrix, exp_operators

P1 = np.array([[1.0, 0.0], [0.0, 0.0]])


@dataclass(frozen=True)
class WaveVec:
    """Wave vector k*(cos(theta), sin(theta))."""
    k: float
    theta: float

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"wave number must be >= 0, got {self.k}")

    @property
    def kx(self) -> float:
        return self.k * np.cos(self.theta)

    @property
    def ky(self) -> float:
        return self.k * np.sin(self.theta)


def spatial_symbol(wv: WaveVec, h: float, gamma: float,
                   params: MfdParams, c0: float) -> float:
    """Discrete spatial symbol of c0^2 * curl curl on a dx=h, dy=gamma*h cell.

    The (4w-1) coupling signs are fixed by the Bloch reduction of the
    assembled local blocks and by the Taylor expansion
    S_h = -(c0 k)^2 {1 + [(w3-1/3)cos^4 + 2 gamma w2 cos^2 sin^2
    + gamma^2 (w1-1/3) sin^4] k^2 h^2 + O(h^4)}.
    """
    sx = np.sin(0.5 * wv.kx * h) ** 2
    sy = np.sin(0.5 * wv.ky * gamma * h) ** 2
    w1, w2, w3 = params.w1, params.w2, params.w3
    c2 = c0 * c0
    term_x = -(4.0 * c2 / h ** 2) * sx * (1.0 + (4.0 * w3 - 1.0) * sx)
    term_xy = -(32.0 * c2 / (gamma * h ** 2)) * w2 * sx * sy
    term_y = -(4.0 * c2 / (gamma * h) ** 2) * sy * (1.0 + (4.0 * w1 - 1.0) * sy)
    return term_x + term_xy + term_y


def s_matrix(kx: float, ky: float, dx: float, dy: float) -> np.ndarray:
    """Phase-shift matrix mapping the two reference DoF to a face's four DoF.

    Rows follow the [bottom, right, top, left] edge order: the top edge is
    the bottom shifted by (0, dy), the left edge is the right shifted by
    (-dx, 0).
    """
    return np.array([
        [1.0, 0.0],
        [0.0, 1.0],
        [np.exp(1j * ky * dy), 0.0],
        [0.0, np.exp(-1j * kx * dx)],
    ], dtype=complex)


def bloch_reduce(Z_local: np.ndarray, kx: float, ky: float,
                 dx: float, dy: float) -> np.ndarray:
    """Reduce a local 4x4 block to its 2x2 action on Bloch-wave amplitudes."""
    S = s_matrix(kx, ky, dx, dy)
    return S.conj().T @ Z_local @ S


def spatial_symbol_bloch(wv: WaveVec, h: float, gamma: float,
                         params: MfdParams, c0: float) -> complex:
    """Spatial symbol recomputed from assembled local blocks (oracle path)."""
    dx, dy = h, gamma * h
    c = local_curl(dx, dy)
    A_loc = np.outer(c, c) * (dx * dy)
    Wb = bloch_reduce(local_W(params, dx, dy), wv.kx, wv.ky, dx, dy)
    Ab = bloch_reduce(A_loc, wv.kx, wv.ky, dx, dy)
    return -c0 * c0 * np.trace(Wb @ Ab)


def temporal_symbol(omega: complex, medium: Medium, dt: float) -> np.ndarray:
    """Discrete temporal symbol of the exponential two-step update.

    T = Y^{-1} (e^{-i w dt} I - (I + e^{X dt}) + e^{i w dt} e^{X dt}) / dt
    with Y the exact integral of e^{X s} over one step.  Expands as
    (-w^2 I + i w X) + dt^2/12 (-w^2 I + i w X)^2 + O(dt^4).
    """
    ops = exp_operators(medium, dt)
    E = ops.exp_matrix.astype(complex)
    Y = ops.integral_matrix.astype(complex)
    det = Y[0, 0] * Y[1, 1] - Y[0, 1] * Y[1, 0]
    scale = np.abs(Y).max()
    # scale ~ dt for usable steps; a collapsed or rank-deficient integral
    # (e.g. a lossless medium over a full period) is unusable either way
    if scale < 1e-12 * dt or abs(det) < 1e-14 * scale * scale:
        raise np.linalg.LinAlgError(
            f"exponential integral matrix is singular at dt={dt}")
    Yinv = np.array([[Y[1, 1], -Y[0, 1]], [-Y[1, 0], Y[0, 0]]],
                    dtype=complex) / det
    I = np.eye(2, dtype=complex)
    bracket = np.exp(-1j * omega * dt) * I - (I + E) + np.exp(1j * omega * dt) * E
    return Yinv @ bracket / dt


def continuous_cubic_coeffs(k: float, medium: Medium,
                            form: str = "physical") -> np.ndarray:
    """Descending coefficients of the continuous dispersion cubic in omega.

    form="physical": from det(-w^2 I + i w X + c0^2 k^2 P1) = 0, the cubic
    w^3 + i*wi*w^2 - (wp^2 + c0^2 k^2) w - i*wi*c0^2 k^2 = 0, whose
    oscillatory roots are +-b + i*a with a <= 0 (decay on the imaginary
    axis, oscillation on the real axis).

    form="printed": the variant with the linear term's sign flipped,
    w^3 + i*wi*w^2 + (wp^2 + c0^2 k^2) w - i*wi*c0^2 k^2 = 0, kept for
    reference; its roots are purely imaginary for real k.
    """
    wi, wp, c0 = medium.omega_i, medium.omega_p, medium.c0
    ck2 = (c0 * k) ** 2
    if form == "physical":
        return np.array([1.0, 1j * wi, -(wp * wp + ck2), -1j * wi * ck2])
    if form == "printed":
        return np.array([1.0, 1j * wi, +(wp * wp + ck2), -1j * wi * ck2])
    raise ValueError(f"form must be 'physical' or 'printed', got {form!r}")


def continuous_roots(k: float, medium: Medium,
                     form: str = "physical") -> np.ndarray:
    """Three complex roots of the continuous dispersion cubic."""
    coeffs = continuous_cubic_coeffs(k, medium, form)
    roots = np.roots(coeffs)
    scale = max(np.abs(roots).max(), 1.0)
    for w in roots:
        res = abs(np.polyval(coeffs, w))
        if res > 1e-10 * max(abs(coeffs[2]) * scale, scale ** 3):
            raise ArithmeticError(f"cubic root residual too large: {res:.3e}")
    return roots


def oscillatory_root(k: float, medium: Medium) -> complex:
    """The propagating-mode root: maximal oscillatory part, positive sign."""
    roots = continuous_roots(k, medium, form="physical")
    return roots[np.argmax(roots.real)]


def relative_dispersion_error(omega: complex, wv: WaveVec, medium: Medium,
                              dt: float, h: float, gamma: float,
                              params: MfdParams, c0: float) -> complex:
    """det(T(omega) - S_h(k) P1) / |omega|, a local-truncation-style error."""
    T = temporal_symbol(omega, medium, dt)
    M = T - spatial_symbol(wv, h, gamma, params, c0) * P1
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return det / abs(omega)


def discrete_root_polish(wv: WaveVec, medium: Medium, dt: float, h: float,
                         gamma: float, params: MfdParams, c0: float,
                         omega_guess: complex, max_iter: int = 100) -> complex:
    """Newton-polish the discrete dispersion root starting from omega_guess.

    Iterates on f(w) = det(T(w) - S_h P1) until |f|/|w| < 1e-12; the
    derivative is a complex central difference (f is entire in omega).
    """
    def f(w):
        return relative_dispersion_error(w, wv, medium, dt, h, gamma,
                                         params, c0) * abs(w)

    w = complex(omega_guess)
    for _ in range(max_iter):
        fw = f(w)
        if abs(fw) / abs(w) < 1e-12:
            return w
        step = 1e-6 * max(1.0, abs(w))
        dfdw = (f(w + step) - f(w - step)) / (2.0 * step)
        if dfdw == 0:
            raise ArithmeticError("vanishing derivative during root polish")
        dw = fw / dfdw
        w = w - dw
        if abs(dw) < 1e-15 * max(1.0, abs(w)) and abs(f(w)) / abs(w) < 1e-12:
            return w
    if abs(f(w)) / abs(w) < 1e-12:
        return w
    raise ArithmeticError(
        f"root polish did not converge in {max_iter} iterations "
        f"(residual {abs(f(w)) / abs(w):.3e})")


def anisotropy_sweep(theta_grid, k: float, ppw_list, nu: float, gamma: float,
                     medium: Medium, schemes, h_ref: float | None = None):
    """Relative dispersion error over propagation angles.

    For each ppw the cell size is h = 2*pi/(k*ppw) unless h_ref overrides
    it (then h = h_ref/sqrt(gamma), fixing the cell area across aspect
    ratios); dt = nu*h/c0.  schemes is an iterable of (label, MfdParams).
    Returns rows (theta, k, ppw, scheme, abs_err, re_err, im_err).
    """
    omega = oscillatory_root(k, medium)
    rows = []
    for ppw in ppw_list:
        h = (2.0 * np.pi / (k * ppw)) if h_ref is None else h_ref / np.sqrt(gamma)
        dt = nu * h / medium.c0
        for theta in theta_grid:
            wv = WaveVec(k, theta)
            for label, params in schemes:
                err = relative_dispersion_error(
                    omega, wv, medium, dt, h, gamma, params, medium.c0)
                rows.append((theta, k, ppw, label,
                             abs(err), err.real, err.imag))
    return rows


def symbol_error_slope(k: float, nu: float, medium: Medium,
                       params_for_h, ppw_list=(12, 24, 48),
                       theta: float = 0.0, gamma: float = 1.0):
    """Least-squares slope of log|E| vs log h along the continuous root.

    params_for_h maps (nu, gamma) -> MfdParams per refinement level (the
    weights may depend on the Courant setup but not on h itself here).
    Returns (slope, errors) with one |E| per entry of ppw_list.
    """
    omega = oscillatory_root(k, medium)
    hs, errs = [], []
    for ppw in ppw_list:
        h = 2.0 * np.pi / (k * ppw)
        dt = nu * h / medium.c0
        params = params_for_h(nu, gamma)
        err = relative_dispersion_error(omega, WaveVec(k, theta), medium,
                                        dt, h, gamma, params, medium.c0)
        hs.append(h)
        errs.append(abs(err))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    return slope, np.array(errs)


def conductive_leapfrog_residual(omega: complex, tau: float, nu: float,
                                 gamma: float, w2: float | complex,
                                 c0: float) -> complex:
    """h^2 coefficient of the leapfrog dispersion residual in a conductor.

    (nu^2 w^2 (w^2 + 2i w/tau) - 12 gamma w2 (w^2 + i w/tau)^2) / (12 c0^2):
    no single real w2 zeroes it for all omega at finite tau, which is why
    leapfrog time stepping cannot be dispersion-optimized in lossy media.
    """
    a = omega * omega + 2j * omega / tau
    b = omega * omega + 1j * omega / tau
    return (nu * nu * omega * omega * a - 12.0 * gamma * w2 * b * b) / (12.0 * c0 * c0)


def leapfrog_zeroing_w2(omega: complex, tau: float, nu: float,
                        gamma: float) -> complex:
    """The (generally complex, omega-dependent) w2 zeroing the residual."""
    a = omega * omega + 2j * omega / tau
    b = omega * omega + 1j * omega / tau
    return nu * nu * omega * omega * a / (12.0 * gamma * b * b)
