"""Pure-numpy time integrators, used when the compiled core is unavailable.

Both backends expose the same two functions and must agree to roundoff;
the compiled module is a line-for-line translation of these loops.
"""

import numpy as np

BACKEND = "python"


def _burgers_rhs(u, nu, dx):
    # Conservative central flux for u_t + (u^2/2)_x = nu u_xx, periodic grid.
    w = 0.5 * u * u
    conv = (np.roll(w, -1) - np.roll(w, 1)) / (2.0 * dx)
    diff = (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / (dx * dx)
    return -conv + nu * diff


def integrate_burgers(u0, nu, dx, dt, n_steps, stride, cap):
    """RK4 time march; returns snapshots every `stride` steps (incl. t=0).

    Raises ValueError("unstable") when max|u| exceeds `cap`.
    """
    u = np.array(u0, dtype=float)
    n_snaps = n_steps // stride + 1
    out = np.empty((u.size, n_snaps))
    out[:, 0] = u
    snap = 1
    for step in range(1, n_steps + 1):
        if not np.all(np.isfinite(u)) or np.abs(u).max() > cap:
            raise ValueError("unstable")
        k1 = _burgers_rhs(u, nu, dx)
        k2 = _burgers_rhs(u + 0.5 * dt * k1, nu, dx)
        k3 = _burgers_rhs(u + 0.5 * dt * k2, nu, dx)
        k4 = _burgers_rhs(u + dt * k3, nu, dx)
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % stride == 0:
            if not np.all(np.isfinite(u)) or np.abs(u).max() > cap:
                raise ValueError("unstable")
            out[:, snap] = u
            snap += 1
    return out


def _rom_rhs(a, c, lin, quad):
    return c + lin @ a + np.einsum("mjk,j,k->m", quad, a, a)


def integrate_rom(c, lin, quad, a0, dt, n_steps, stride, cap):
    """RK4 march of da/dt = c + L a + a^T Q a; snapshots every `stride` steps."""
    a = np.array(a0, dtype=float)
    n_snaps = n_steps // stride + 1
    out = np.empty((a.size, n_snaps))
    out[:, 0] = a
    snap = 1
    for step in range(1, n_steps + 1):
        k1 = _rom_rhs(a, c, lin, quad)
        k2 = _rom_rhs(a + 0.5 * dt * k1, c, lin, quad)
        k3 = _rom_rhs(a + 0.5 * dt * k2, c, lin, quad)
        k4 = _rom_rhs(a + dt * k3, c, lin, quad)
        a = a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(a)) or np.abs(a).max() > cap:
            raise ValueError("unstable")
        if step % stride == 0:
            out[:, snap] = a
            snap += 1
    return out
