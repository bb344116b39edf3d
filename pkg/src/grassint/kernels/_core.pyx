# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 time integrators (hot loops of the solver and the ROM)."""

import numpy as np

cimport cython
from libc.math cimport fabs, isfinite

BACKEND = "compiled"


cdef void _burgers_rhs(double[::1] u, double nu, double dx,
                       double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i, ip, im
    cdef double wp, wm, conv, diff
    for i in range(n):
        ip = i + 1 if i + 1 < n else 0
        im = i - 1 if i > 0 else n - 1
        wp = 0.5 * u[ip] * u[ip]
        wm = 0.5 * u[im] * u[im]
        conv = (wp - wm) / (2.0 * dx)
        diff = (u[ip] - 2.0 * u[i] + u[im]) / (dx * dx)
        out[i] = -conv + nu * diff


def integrate_burgers(u0, double nu, double dx, double dt,
                      long n_steps, long stride, double cap):
    """RK4 time march; returns snapshots every `stride` steps (incl. t=0).

    Raises ValueError("unstable") when max|u| exceeds `cap`.
    """
    cdef double[::1] u = np.array(u0, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef long n_snaps = n_steps // stride + 1
    out_arr = np.empty((n, n_snaps))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef double[::1] tmp = np.empty(n)
    cdef Py_ssize_t i
    cdef long step, snap = 1
    cdef bint bad = 0
    cdef double umax

    for i in range(n):
        out[i, 0] = u[i]
    with nogil:
        for step in range(1, n_steps + 1):
            umax = 0.0
            for i in range(n):
                if not isfinite(u[i]):
                    bad = 1
                    break
                if fabs(u[i]) > umax:
                    umax = fabs(u[i])
            if bad or umax > cap:
                bad = 1
                break
            _burgers_rhs(u, nu, dx, k1)
            for i in range(n):
                tmp[i] = u[i] + 0.5 * dt * k1[i]
            _burgers_rhs(tmp, nu, dx, k2)
            for i in range(n):
                tmp[i] = u[i] + 0.5 * dt * k2[i]
            _burgers_rhs(tmp, nu, dx, k3)
            for i in range(n):
                tmp[i] = u[i] + dt * k3[i]
            _burgers_rhs(tmp, nu, dx, k4)
            for i in range(n):
                u[i] = u[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if step % stride == 0:
                umax = 0.0
                for i in range(n):
                    if not isfinite(u[i]):
                        bad = 1
                        break
                    if fabs(u[i]) > umax:
                        umax = fabs(u[i])
                if bad or umax > cap:
                    bad = 1
                    break
                for i in range(n):
                    out[i, snap] = u[i]
                snap += 1
    if bad:
        raise ValueError("unstable")
    return out_arr


cdef void _rom_rhs(double[::1] a, double[::1] c, double[:, ::1] lin,
                   double[:, :, ::1] quad, double[::1] out) noexcept nogil:
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(m):
        acc = c[i]
        for j in range(m):
            acc += lin[i, j] * a[j]
            for k in range(m):
                acc += quad[i, j, k] * a[j] * a[k]
        out[i] = acc


def integrate_rom(c, lin, quad, a0, double dt, long n_steps, long stride,
                  double cap):
    """RK4 march of da/dt = c + L a + a^T Q a; snapshots every `stride` steps."""
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef double[:, ::1] lv = np.ascontiguousarray(lin, dtype=np.float64)
    cdef double[:, :, ::1] qv = np.ascontiguousarray(quad, dtype=np.float64)
    cdef double[::1] a = np.array(a0, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0]
    cdef long n_snaps = n_steps // stride + 1
    out_arr = np.empty((m, n_snaps))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] k1 = np.empty(m)
    cdef double[::1] k2 = np.empty(m)
    cdef double[::1] k3 = np.empty(m)
    cdef double[::1] k4 = np.empty(m)
    cdef double[::1] tmp = np.empty(m)
    cdef Py_ssize_t i
    cdef long step, snap = 1
    cdef bint bad = 0
    cdef double amax

    for i in range(m):
        out[i, 0] = a[i]
    with nogil:
        for step in range(1, n_steps + 1):
            _rom_rhs(a, cv, lv, qv, k1)
            for i in range(m):
                tmp[i] = a[i] + 0.5 * dt * k1[i]
            _rom_rhs(tmp, cv, lv, qv, k2)
            for i in range(m):
                tmp[i] = a[i] + 0.5 * dt * k2[i]
            _rom_rhs(tmp, cv, lv, qv, k3)
            for i in range(m):
                tmp[i] = a[i] + dt * k3[i]
            _rom_rhs(tmp, cv, lv, qv, k4)
            amax = 0.0
            for i in range(m):
                a[i] = a[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                if not isfinite(a[i]):
                    bad = 1
                if fabs(a[i]) > amax:
                    amax = fabs(a[i])
            if bad or amax > cap:
                bad = 1
                break
            if step % stride == 0:
                for i in range(m):
                    out[i, snap] = a[i]
                snap += 1
    if bad:
        raise ValueError("unstable")
    return out_arr
