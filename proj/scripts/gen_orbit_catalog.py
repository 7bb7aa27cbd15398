#!/usr/bin/env python3
"""Generate data/orbits.txt: CR3BP initial conditions for the Earth-Moon system.

Periodic orbits are found by single-shooting differential correction on top of
scipy's DOP853 at tight tolerances. The output is consumed by the C++ geometry
module; rerun only if the mass ratio or orbit choices change.
"""
import math
import sys

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

GM_EARTH = 398600.4418  # km^3/s^2
GM_MOON = 4902.800066
LENGTH_KM = 384400.0
MU = GM_MOON / (GM_EARTH + GM_MOON)
TOL = dict(rtol=1e-13, atol=1e-14, method="DOP853")


def eom(_, s):
    x, y, z, vx, vy, vz = s
    r1 = math.sqrt((x + MU) ** 2 + y * y + z * z)
    r2 = math.sqrt((x - 1 + MU) ** 2 + y * y + z * z)
    c1 = (1 - MU) / r1 ** 3
    c2 = MU / r2 ** 3
    ax = 2 * vy + x - c1 * (x + MU) - c2 * (x - 1 + MU)
    ay = -2 * vx + y - c1 * y - c2 * y
    az = -c1 * z - c2 * z
    return [vx, vy, vz, ax, ay, az]


def y_cross(_, s):
    return s[1]


def half_period(state, min_t=0.05):
    """Integrate to the first y=0 crossing after min_t."""
    head = solve_ivp(eom, (0, min_t), state, **TOL)
    y_cross.terminal = True
    sol = solve_ivp(eom, (min_t, min_t + 20), head.y[:, -1], events=y_cross, **TOL)
    return sol.t_events[0][0], sol.y_events[0][0]


def collinear_point(which):
    def f(x):
        r1 = x + MU
        r2 = x - 1 + MU
        return x - (1 - MU) * r1 / abs(r1) ** 3 - MU * r2 / abs(r2) ** 3
    if which == 1:
        return brentq(f, 0.5, 1 - MU - 1e-6)
    if which == 2:
        return brentq(f, 1 - MU + 1e-6, 1.5)
    return brentq(f, -1.5, -MU - 1e-6)


def planar_correct(x0, vy0, min_t=0.05):
    """Find vy0 so the orbit crosses y=0 perpendicularly (vx=0)."""
    def resid(vy):
        _, s = half_period([x0, 0, 0, 0, vy, 0], min_t)
        return s[3]
    vy = vy0
    for _ in range(50):
        f = resid(vy)
        h = 1e-7
        df = (resid(vy + h) - f) / h
        step = f / df
        vy -= step
        if abs(step) < 1e-14:
            break
    t, _ = half_period([x0, 0, 0, 0, vy, 0], min_t)
    return [x0, 0.0, 0.0, 0.0, vy, 0.0], 2 * t


def halo_correct(x0, z0, vy0):
    """Fix z0; vary x0, vy0 so vx=vz=0 at the y=0 crossing."""
    p = np.array([x0, vy0])

    def resid(q):
        _, s = half_period([q[0], 0, z0, 0, q[1], 0], min_t=0.3)
        return np.array([s[3], s[5]])

    for _ in range(60):
        f = resid(p)
        jac = np.zeros((2, 2))
        for k in range(2):
            dq = np.zeros(2)
            dq[k] = 1e-8
            jac[:, k] = (resid(p + dq) - f) / 1e-8
        step = np.linalg.solve(jac, f)
        p = p - step
        if np.max(np.abs(step)) < 1e-13:
            break
    t, _ = half_period([p[0], 0, z0, 0, p[1], 0], min_t=0.3)
    return [p[0], 0.0, z0, 0.0, p[1], 0.0], 2 * t


def lyapunov_guess(xl, amplitude):
    """Linearised planar Lyapunov initial condition about collinear point xl."""
    r1 = abs(xl + MU)
    r2 = abs(xl - 1 + MU)
    c = (1 - MU) / r1 ** 3 + MU / r2 ** 3
    uxx = 1 + 2 * c
    uyy = 1 - c
    # characteristic polynomial of the planar linear system for an oscillatory mode
    b = 4 - uxx - uyy
    lam2 = (-b - math.sqrt(b * b - 4 * uxx * uyy)) / 2  # negative root -> -w^2
    w = math.sqrt(-lam2)
    kappa = (w * w + uxx) / (2 * w)
    # x = xl - A cos(wt), y = kappa A sin(wt)
    return xl - amplitude, kappa * amplitude * w, 2 * math.pi / w


def elfo_state(a_km, e, inc_deg, argp_deg):
    """Moon-centred Keplerian state at aposelene, converted to the rotating frame."""
    inc = math.radians(inc_deg)
    argp = math.radians(argp_deg)
    ra = a_km * (1 + e)
    va = math.sqrt(GM_MOON * (2 / ra - 1 / a_km))
    nu = math.pi
    # perifocal -> inertial with raan = 0
    u = argp + nu
    r_vec = ra * np.array([math.cos(u), math.sin(u) * math.cos(inc), math.sin(u) * math.sin(inc)])
    v_dir = np.array([-math.sin(u), math.cos(u) * math.cos(inc), math.cos(u) * math.sin(inc)])
    v_vec = va * v_dir
    tstar = math.sqrt(LENGTH_KM ** 3 / (GM_EARTH + GM_MOON))
    vstar = LENGTH_KM / tstar
    r_nd = r_vec / LENGTH_KM
    v_nd = v_vec / vstar
    # inertial velocity relative to Moon -> rotating frame: v_rot = v_in - w x r
    w = np.array([0.0, 0.0, 1.0])
    v_rot = v_nd - np.cross(w, r_nd)
    pos = np.array([1 - MU, 0, 0]) + r_nd
    period = 2 * math.pi * math.sqrt(a_km ** 3 / GM_MOON) / tstar
    return list(pos) + list(v_rot), period


def main(out_path):
    rows = []
    l1 = collinear_point(1)
    l2 = collinear_point(2)
    l3 = collinear_point(3)
    rows.append(("L3", "equilibrium", [l3, 0, 0, 0, 0, 0], 2 * math.pi))
    rows.append(("L4", "equilibrium", [0.5 - MU, math.sqrt(3) / 2, 0, 0, 0, 0], 2 * math.pi))
    rows.append(("L5", "equilibrium", [0.5 - MU, -math.sqrt(3) / 2, 0, 0, 0, 0], 2 * math.pi))

    dro, dro_t = planar_correct(1 - MU - 0.18, 0.5)
    rows.append(("DRO", "dro", dro, dro_t))
    dro_u, dro_u_t = planar_correct(1 - MU - 0.10, 0.5)
    rows.append(("DRO-U", "dro", dro_u, dro_u_t))

    for name, xl, amp in (("L1-LYAP", l1, 0.01), ("L2-LYAP", l2, 0.01)):
        x0, vy0, per0 = lyapunov_guess(xl, amp)
        orbit, per = planar_correct(x0, vy0, min_t=0.25 * per0)
        rows.append((name, "lyapunov", orbit, per))

    # vertical oscillations about L3/L4/L5 (linearly stable out of plane)
    for name, base in (("L3-VERT", [l3, 0]), ("L4-VERT", [0.5 - MU, math.sqrt(3) / 2]),
                       ("L5-VERT", [0.5 - MU, -math.sqrt(3) / 2])):
        rows.append((name, "vertical", [base[0], base[1], 0.03, 0, 0, 0], 2 * math.pi))

    nrho, nrho_t = halo_correct(1.0221, -0.1821, -0.1033)
    rows.append(("NRHO", "halo", nrho, nrho_t))

    elfo, elfo_t = elfo_state(6142.4, 0.6, 57.82, 90.0)
    rows.append(("ELFO", "elfo", elfo, elfo_t))

    with open(out_path, "w") as fh:
        fh.write("# Earth-Moon CR3BP orbit catalog (rotating frame, nondimensional)\n")
        fh.write(f"# mu {MU:.16e}\n")
        fh.write("# name family x y z vx vy vz period\n")
        for name, fam, s, per in rows:
            vals = " ".join(f"{v:.16e}" for v in s)
            fh.write(f"{name} {fam} {vals} {per:.16e}\n")

    # report periodicity residuals from the reference integrator
    for name, fam, s, per in rows:
        if fam in ("dro", "lyapunov", "halo"):
            sol = solve_ivp(eom, (0, per), s, **TOL)
            err = np.max(np.abs(sol.y[:, -1] - np.array(s)))
            print(f"{name}: period {per:.10f} closure {err:.3e}", file=sys.stderr)
    for name, fam, s, per in rows:
        sol = solve_ivp(eom, (0, 7.0), s, max_step=0.01, **TOL)
        rm = np.sqrt((sol.y[0] - 1 + MU) ** 2 + sol.y[1] ** 2 + sol.y[2] ** 2).min() * LENGTH_KM
        re_ = np.sqrt((sol.y[0] + MU) ** 2 + sol.y[1] ** 2 + sol.y[2] ** 2).min() * LENGTH_KM
        print(f"{name}: min moon dist {rm:.0f} km, min earth dist {re_:.0f} km", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/orbits.txt")
