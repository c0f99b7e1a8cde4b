"""Exact standing-mode solutions, mimetic error norms, and convergence runs.

The verification solution is a PEC-compatible standing mode on the unit
square: a divergence-free trigonometric profile times a damped cosine
whose decay/oscillation pair (a, b) comes from the propagating root of
the continuous dispersion cubic.  Accuracy is measured two ways: a
relative L2 error in the mimetic mass-matrix inner product, and a
relative dispersion error from nonlinear least-squares fits of probe
time traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dispersion import oscillatory_root
from .mesh import build_mesh, interpolate_edge_field
from .operators import MfdParams, assemble_M, params_for_scheme
from .plasma import Medium
from .stepper import SimConfig, run


class DegenerateFitError(ValueError):
    """Fit cannot start: zero amplitude or singular normal matrix."""


# ---- exact solution ---------------------------------------------------------

@dataclass(frozen=True)
class ExactSolution:
    """Standing-mode solution with wave numbers in pi*Z (PEC-compatible)."""
    kx: float
    ky: float
    a: float
    b: float
    medium: Medium

    @property
    def k(self) -> float:
        return math.hypot(self.kx, self.ky)


def make_exact_solution(kx: float, ky: float, medium: Medium) -> ExactSolution:
    for name, kv in (("kx", kx), ("ky", ky)):
        m = kv / math.pi
        if abs(m - round(m)) > 1e-9:
            raise ValueError(f"{name}={kv} is not an integer multiple of pi")
    w = oscillatory_root(math.hypot(kx, ky), medium)
    # decay on the imaginary axis, oscillation on the real axis
    return ExactSolution(kx=kx, ky=ky, a=w.imag, b=w.real, medium=medium)


def spatial_mode(sol: ExactSolution, x, y):
    """Divergence-free profile (-ky cos sin, kx sin cos); curlcurl = k^2 * it."""
    vx = -sol.ky * np.cos(sol.kx * x) * np.sin(sol.ky * y)
    vy = sol.kx * np.sin(sol.kx * x) * np.cos(sol.ky * y)
    return vx, vy


def e_time_factor(sol: ExactSolution, t, a=None, b=None):
    a = sol.a if a is None else a
    b = sol.b if b is None else b
    return np.exp(a * t) * np.cos(b * t)


def j_time_factor(sol: ExactSolution, t, a=None, b=None):
    a = sol.a if a is None else a
    b = sol.b if b is None else b
    med = sol.medium
    den = b * b + (a + med.omega_i) ** 2
    num = (a + med.omega_i) * np.cos(b * t) + b * np.sin(b * t)
    return med.eps0 * med.omega_p ** 2 * np.exp(a * t) * num / den


def exact_E(sol: ExactSolution, x, y, t):
    vx, vy = spatial_mode(sol, x, y)
    f = e_time_factor(sol, t)
    return f * vx, f * vy


def exact_J(sol: ExactSolution, x, y, t):
    vx, vy = spatial_mode(sol, x, y)
    f = j_time_factor(sol, t)
    return f * vx, f * vy


# ---- error norms ------------------------------------------------------------

def l2_relative_error(F_h: np.ndarray, F_interp: np.ndarray,
                      M: sp.spmatrix) -> float:
    """sqrt(d^T M d) / sqrt(I^T M I) with d = F_h - F_interp."""
    den2 = float(F_interp @ (M @ F_interp))
    if den2 <= 0.0:
        raise ZeroDivisionError("exact-field interpolant has zero M-norm")
    d = F_h - F_interp
    num2 = float(d @ (M @ d))
    return math.sqrt(max(num2, 0.0)) / math.sqrt(den2)


# ---- damped-cosine fitting ----------------------------------------------------

@dataclass
class FitResult:
    a_h: float
    b_h: float
    rms_residual: float
    iterations: int
    converged: bool


def _model_and_jacobian(model: str, t: np.ndarray, a: float, b: float,
                        medium: Medium | None):
    if model == "E":
        e = np.exp(a * t)
        c, s = np.cos(b * t), np.sin(b * t)
        f = e * c
        return f, t * f, -t * e * s
    if model == "J":
        if medium is None:
            raise ValueError("the J model needs the medium constants")
        wi = medium.omega_i
        scale = medium.eps0 * medium.omega_p ** 2
        e = np.exp(a * t)
        c, s = np.cos(b * t), np.sin(b * t)
        den = b * b + (a + wi) ** 2
        num = (a + wi) * c + b * s
        f = scale * e * num / den
        df_da = scale * e * (t * num / den + c / den
                             - num * 2.0 * (a + wi) / den ** 2)
        df_db = scale * e * ((-(a + wi) * t * s + s + b * t * c) / den
                             - num * 2.0 * b / den ** 2)
        return f, df_da, df_db
    raise ValueError(f"model must be 'E' or 'J', got {model!r}")


def fit_damped_cosine(trace: np.ndarray, dt: float, model: str = "E",
                      medium: Medium | None = None, amplitude: float = 1.0,
                      initial_guess: tuple[float, float] = (0.0, 1.0),
                      max_iter: int = 200) -> FitResult:
    """Levenberg-damped Gauss-Newton fit of (a_h, b_h) to a probe trace.

    The amplitude is fixed (the known spatial DoF factor at the probe);
    only the decay and frequency are free.  Accepts a step only when it
    lowers the residual; converges when the parameter update norm drops
    below 1e-12.  A non-converged fit is returned flagged, not raised.
    """
    trace = np.asarray(trace, dtype=float)
    if trace.size < 8:
        raise ValueError(f"trace too short to fit: {trace.size} < 8")
    t = dt * np.arange(trace.size)
    a, b = float(initial_guess[0]), float(initial_guess[1])

    def residual(a, b):
        f, _, _ = _model_and_jacobian(model, t, a, b, medium)
        return trace - amplitude * f

    r = residual(a, b)
    cost = float(r @ r)
    lam = 1e-3
    its = 0
    for its in range(1, max_iter + 1):
        f, df_da, df_db = _model_and_jacobian(model, t, a, b, medium)
        J = amplitude * np.column_stack([df_da, df_db])
        JtJ = J.T @ J
        g = J.T @ r
        scale = np.abs(JtJ).max()
        if scale <= 0.0 or np.linalg.det(JtJ) < 1e-30 * scale * scale:
            raise DegenerateFitError(
                "degenerate Jacobian (zero amplitude or flat model)")
        accepted = False
        for _ in range(50):
            A = JtJ + lam * np.diag(np.diag(JtJ))
            try:
                delta = np.linalg.solve(A, g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            r_new = residual(a + delta[0], b + delta[1])
            cost_new = float(r_new @ r_new)
            if cost_new <= cost:
                a, b = a + delta[0], b + delta[1]
                r, cost = r_new, cost_new
                lam = max(lam * 0.1, 1e-15)
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            break
        if np.linalg.norm(delta) < 1e-12:
            return FitResult(a, b, math.sqrt(cost / trace.size), its, True)
    return FitResult(a, b, math.sqrt(cost / trace.size), its, False)


def dispersion_error_metric(fit: FitResult, a_true: float,
                            b_true: float) -> float:
    """sqrt(((a-a_h)^2 + (b-b_h)^2) / (a^2 + b^2))."""
    num = (a_true - fit.a_h) ** 2 + (b_true - fit.b_h) ** 2
    return math.sqrt(num / (a_true ** 2 + b_true ** 2))


# ---- convergence study -------------------------------------------------------

def pick_probe_edge(mesh, sol: ExactSolution) -> int:
    """Interior edge with the largest |spatial DoF|, ties toward the center."""
    dof = interpolate_edge_field(mesh, lambda x, y: spatial_mode(sol, x, y),
                                 "midpoint")
    mids = mesh.edge_midpoints
    center = np.array([mesh.Lx / 2.0, mesh.Ly / 2.0])
    dist = np.hypot(mids[:, 0] - center[0], mids[:, 1] - center[1])
    score = np.abs(dof) - 1e-9 * dist / max(mesh.Lx, mesh.Ly)
    score[mesh.boundary_edge_mask] = -np.inf
    return int(np.argmax(score))


def convergence_study(h_list, scheme: str, medium: Medium,
                      sol: ExactSolution, nu: float, T: float,
                      e_error_rule="midpoint", j_error_rule=4,
                      max_workers: int = 1) -> list[dict]:
    """Run the standing-mode experiment over a mesh-size sweep.

    Returns one row per (h, field) with the relative L2 error at the
    final time and the relative dispersion error from the probe fit;
    rate columns hold log2 ratios between successive mesh sizes.
    """
    h_list = list(h_list)
    if not h_list:
        raise ValueError("h_list must not be empty")

    def one(h):
        n = round(1.0 / h)
        if abs(n * h - 1.0) > 1e-9:
            raise ValueError(f"1/h must be an integer, got h={h}")
        mesh = build_mesh(n, n, 1.0, 1.0, "pec")
        params = params_for_scheme(scheme, nu, mesh.gamma)
        probe = pick_probe_edge(mesh, sol)
        config = SimConfig(mesh=mesh, medium=medium, params=params,
                           nu=nu, T=T, probes=(probe,))
        result = run(config,
                     lambda x, y: exact_E(sol, x, y, 0.0),
                     lambda x, y: exact_E(sol, x, y, config.dt),
                     lambda x, y: exact_J(sol, x, y, 0.0))
        tf = result.t_final
        M = assemble_M(mesh, params)
        E_ref = interpolate_edge_field(
            mesh, lambda x, y: exact_E(sol, x, y, tf), e_error_rule)
        J_ref = interpolate_edge_field(
            mesh, lambda x, y: exact_J(sol, x, y, tf), j_error_rule)
        err_E = l2_relative_error(result.state.E_curr, E_ref, M)
        err_J = l2_relative_error(result.state.J_curr, J_ref, M)

        mode_dof_mid = interpolate_edge_field(
            mesh, lambda x, y: spatial_mode(sol, x, y), "midpoint")
        mode_dof_avg = interpolate_edge_field(
            mesh, lambda x, y: spatial_mode(sol, x, y), 4)
        guess = (sol.a, sol.b)
        fit_E = fit_damped_cosine(result.probe_E[probe], config.dt, "E",
                                  medium, amplitude=mode_dof_mid[probe],
                                  initial_guess=guess)
        fit_J = fit_damped_cosine(result.probe_J[probe], config.dt, "J",
                                  medium, amplitude=mode_dof_avg[probe],
                                  initial_guess=guess)
        disp_E = dispersion_error_metric(fit_E, sol.a, sol.b)
        disp_J = dispersion_error_metric(fit_J, sol.a, sol.b)
        return {"E": (err_E, disp_E), "J": (err_J, disp_J)}

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, h_list))
    else:
        results = [one(h) for h in h_list]

    rows = []
    for field in ("E", "J"):
        prev = None
        for h, res in zip(h_list, results):
            err_l2, err_disp = res[field]
            rate_l2 = rate_disp = float("nan")
            if prev is not None:
                h_prev, l2_prev, disp_prev = prev
                factor = math.log2(h_prev / h)
                rate_l2 = math.log2(l2_prev / err_l2) / factor
                rate_disp = math.log2(disp_prev / err_disp) / factor
            rows.append({"log2_h": math.log2(h), "scheme": scheme,
                         "field": field, "err_l2": err_l2,
                         "rate_l2": rate_l2, "err_disp": err_disp,
                         "rate_disp": rate_disp})
            prev = (h, err_l2, err_disp)
    return rows
