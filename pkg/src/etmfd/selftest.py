"""Fast built-in oracle and invariant checks, runnable from the CLI.

Each check recomputes a core identity through an independent route
(series exponential, Bloch reduction, dense assembly, analytic ODE
solution) and compares against the production path.  The whole battery
runs in a few seconds; it is a smoke screen, not the full test suite.
"""

from __future__ import annotations

import numpy as np

from . import dispersion, operators, plasma, stepper
from .mesh import build_mesh


def check_mesh_counts():
    for nx, ny in [(1, 1), (2, 3), (5, 4), (8, 8)]:
        m = build_mesh(nx, ny, 1.0, 1.0, "pec")
        if m.n_hedges != nx * (ny + 1) or m.n_vedges != (nx + 1) * ny:
            return False, f"edge counts wrong for {nx}x{ny}"
        if m.n_faces != nx * ny:
            return False, f"face count wrong for {nx}x{ny}"
    return True, "edge/face counting formulas hold"


def check_exp_operators():
    med = plasma.Medium(omega_i=1.0, omega_p=1.0)
    X = plasma.coupling_matrix(med)
    worst = 0.0
    for dt in (0.01, 0.1, 0.5):
        ops = plasma.exp_operators(med, dt)
        worst = max(worst, np.abs(ops.exp_matrix
                                  - plasma.series_exp_oracle(X, dt)).max())
        ident = X @ ops.integral_matrix - (ops.exp_matrix - np.eye(2))
        worst = max(worst, np.abs(ident).max())
    ok = worst < 1e-12
    return ok, f"exponential coefficients, worst deviation {worst:.2e}"


def check_optimal_W_identity():
    worst = 0.0
    for nu in (0.0, 0.25, 0.5, 1.0):
        for gamma in (0.25, 1.0, 4.0):
            dx = 0.37
            dy = gamma * dx
            A = operators.optimal_local_W(nu, nu / gamma, dx, dy)
            B = operators.local_W(operators.optimal_params(nu, gamma), dx, dy)
            worst = max(worst, np.abs(A - B).max())
    return worst < 1e-14, f"optimal W identity, worst deviation {worst:.2e}"


def check_symbol_reduction():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        wv = dispersion.WaveVec(rng.uniform(0.5, 8.0),
                                rng.uniform(0.0, 2.0 * np.pi))
        h = rng.uniform(0.02, 0.3)
        gamma = rng.uniform(0.3, 3.0)
        pars = operators.MfdParams(rng.uniform(0.1, 0.5),
                                   rng.uniform(-0.1, 0.1),
                                   rng.uniform(0.1, 0.5))
        s1 = dispersion.spatial_symbol(wv, h, gamma, pars, 1.0)
        s2 = dispersion.spatial_symbol_bloch(wv, h, gamma, pars, 1.0)
        worst = max(worst, abs(s1 - s2))
    return worst < 1e-12, f"symbol vs Bloch reduction, worst {worst:.2e}"


def check_one_step_dense():
    mesh = build_mesh(3, 3, 1.0, 1.0, "periodic")
    med = plasma.Medium()
    pars = operators.optimal_params(0.5, 1.0)
    config = stepper.SimConfig(mesh=mesh, medium=med, params=pars,
                               nu=0.5, T=1.0)
    ops = plasma.exp_operators(med, config.dt)
    rng = np.random.default_rng(3)
    st = stepper.SimState(E_curr=rng.standard_normal(mesh.n_edges),
                          E_prev=rng.standard_normal(mesh.n_edges),
                          J_curr=rng.standard_normal(mesh.n_edges),
                          J_prev=rng.standard_normal(mesh.n_edges), n=1)
    W_op = operators.assemble_W(mesh, pars)
    A_op = operators.assemble_curl_curl(mesh)
    new = stepper.step(st, W_op, A_op, ops, config)

    # dense scatter, plain loops
    Wd = np.zeros((mesh.n_edges, mesh.n_edges))
    Ad = np.zeros((mesh.n_edges, mesh.n_edges))
    Wl = operators.local_W(pars, mesh.dx, mesh.dy)
    c = operators.local_curl(mesh.dx, mesh.dy)
    Al = np.outer(c, c) * mesh.dx * mesh.dy
    for f in range(mesh.n_faces):
        ed = mesh.face_edges(f)
        for i in range(4):
            for j in range(4):
                Wd[ed[i], ed[j]] += Wl[i, j]
                Ad[ed[i], ed[j]] += Al[i, j]
    c2dt = med.c0 ** 2 * config.dt
    E_ref = ((1 + ops.alpha1) * st.E_curr + ops.alpha2 * st.J_curr
             - ops.alpha1 * st.E_prev - ops.alpha2 * st.J_prev
             - c2dt * ops.alpha3 * (Wd @ (Ad @ st.E_curr)))
    J_ref = (ops.beta1 * st.J_curr + ops.beta2 * st.E_curr
             + ops.beta3 / ops.alpha3
             * (E_ref - ops.alpha1 * st.E_curr - ops.alpha2 * st.J_curr))
    worst = max(np.abs(new.E_curr - E_ref).max(),
                np.abs(new.J_curr - J_ref).max())
    return worst < 1e-13, f"one step vs dense assembly, worst {worst:.2e}"


def check_ode_exactness():
    med = plasma.Medium()
    X = plasma.coupling_matrix(med)
    u0, v0 = 0.7, -0.3
    worst = 0.0
    for dt in (0.1, 0.01):
        mesh = build_mesh(1, 1, 1.0, 1.0, "periodic")
        pars = operators.yee_params()
        config = stepper.SimConfig(mesh=mesh, medium=med, params=pars,
                                   nu=dt * med.c0 / mesh.dx, T=1.0)
        e1 = plasma.series_exp_oracle(X, dt) @ np.array([u0, v0])
        res = stepper.run(config,
                          lambda x, y: (u0 + 0 * x, 0 * y),
                          lambda x, y: (e1[0] + 0 * x, 0 * y),
                          lambda x, y: (v0 + 0 * x, 0 * y))
        ref = plasma.series_exp_oracle(X, 1.0) @ np.array([u0, v0])
        worst = max(worst,
                    abs(res.state.E_curr[0] - ref[0]),
                    abs(res.state.J_curr[0] - ref[1]))
    return worst < 1e-12, f"k=0 exponential exactness, worst {worst:.2e}"


def check_fourth_order_symbol(params_fn=None):
    """Slope of |det(T - S P1)|/|w| vs h must reach 4 for optimal weights.

    Run off-axis so every weight (including the cross term w2) is live.
    """
    if params_fn is None:
        params_fn = operators.optimal_params
    med = plasma.Medium()
    slope, _ = dispersion.symbol_error_slope(4.0, 0.5, med, params_fn,
                                             theta=0.4)
    return slope >= 3.8, f"optimal symbol-error slope {slope:.3f} (need >= 3.8)"


def check_leapfrog_w2():
    w2_1 = dispersion.leapfrog_zeroing_w2(1.0, 1.0, 0.5, 1.0)
    w2_2 = dispersion.leapfrog_zeroing_w2(2.0, 1.0, 0.5, 1.0)
    w2_vac = dispersion.leapfrog_zeroing_w2(1.0, 1e12, 0.5, 1.0)
    ok = (abs(w2_1.imag) > 1e-3 and abs(w2_2.imag) > 1e-3
          and abs(w2_1 - w2_2) > 1e-3
          and abs(w2_vac - 0.25 / 12.0) < 1e-10)
    return ok, (f"leapfrog zeroing w2 is frequency-dependent and complex "
                f"({w2_1:.4f} vs {w2_2:.4f})")


ALL_CHECKS = [
    ("mesh-counts", check_mesh_counts),
    ("exp-operators", check_exp_operators),
    ("optimal-W-identity", check_optimal_W_identity),
    ("symbol-reduction", check_symbol_reduction),
    ("one-step-dense", check_one_step_dense),
    ("ode-exactness", check_ode_exactness),
    ("fourth-order-symbol", check_fourth_order_symbol),
    ("leapfrog-w2", check_leapfrog_w2),
]


def run_all(report=print):
    """Run every check; returns True only if all pass."""
    all_ok = True
    for name, fn in ALL_CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        report(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
