# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gillespie kernel. Mirrors ``_gillespie_py.advance`` operation for operation."""

from libc.math cimport log, INFINITY


cdef inline int _count_hops(signed char[::1] occ, Py_ssize_t L) noexcept nogil:
    cdef int hops = 0
    cdef Py_ssize_t j
    for j in range(L - 1):
        if occ[j] and not occ[j + 1]:
            hops += 1
    return hops


def advance(signed char[::1] occ, double alpha, double beta, double t, double t_end,
            const double[::1] u, Py_ssize_t pos):
    cdef Py_ssize_t L = occ.shape[0]
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t k
    cdef long long entries = 0
    cdef double occ1 = 0.0
    cdef double rate, dt, r
    cdef int hops = _count_hops(occ, L)
    cdef bint done
    with nogil:
        while pos + 1 < n:
            rate = hops
            if not occ[0]:
                rate += alpha
            if occ[L - 1]:
                rate += beta
            if rate > 0:
                dt = -log(1.0 - u[pos]) / rate
            else:
                dt = INFINITY
            if t + dt >= t_end:
                occ1 += occ[0] * (t_end - t)
                t = t_end
                pos += 1
                break
            occ1 += occ[0] * dt
            t += dt
            r = u[pos + 1] * rate
            pos += 2
            if not occ[0]:
                if r < alpha:
                    occ[0] = 1
                    entries += 1
                    if L > 1 and not occ[1]:
                        hops += 1
                    continue
                r -= alpha
            done = False
            for k in range(L - 1):
                if occ[k] and not occ[k + 1]:
                    if r < 1.0:
                        occ[k] = 0
                        occ[k + 1] = 1
                        done = True
                        break
                    r -= 1.0
            if done:
                hops = _count_hops(occ, L)
                continue
            if occ[L - 1]:
                occ[L - 1] = 0
                if L > 1 and occ[L - 2]:
                    hops += 1
                continue
            for k in range(L - 2, -1, -1):
                if occ[k] and not occ[k + 1]:
                    occ[k] = 0
                    occ[k + 1] = 1
                    break
            hops = _count_hops(occ, L)
    return t, pos, entries, occ1
