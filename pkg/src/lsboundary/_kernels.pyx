# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled frame-walk kernels; same contract as ``_kernels_py``."""
from libc.math cimport exp, cos, sin, log, log1p, fabs, cosh, INFINITY

cdef double RESCALE = 1e8


cdef inline void _walk(const signed char[:] codes, const double[:] values,
                       Py_ssize_t lo, Py_ssize_t hi, double* out) noexcept nogil:
    cdef double a = 1.0, b = 0.0, c = 0.0, d = 1.0, s = 0.0
    cdef double h, ep, em, co, si, m, t0, t1, t2, t3
    cdef Py_ssize_t i
    for i in range(lo, hi):
        h = 0.5 * values[i]
        if codes[i] == 0:
            if fabs(h) > 300.0:
                ep = exp(-2.0 * fabs(h))
                if h > 0:
                    b = b * ep
                    d = d * ep
                else:
                    a = a * ep
                    c = c * ep
                s += fabs(h)
            else:
                ep = exp(h)
                em = 1.0 / ep
                a = a * ep
                b = b * em
                c = c * ep
                d = d * em
        else:
            co = cos(h)
            si = sin(h)
            t0 = a * co - b * si
            t1 = a * si + b * co
            t2 = c * co - d * si
            t3 = c * si + d * co
            a = t0
            b = t1
            c = t2
            d = t3
        m = fabs(a)
        if fabs(b) > m:
            m = fabs(b)
        if fabs(c) > m:
            m = fabs(c)
        if fabs(d) > m:
            m = fabs(d)
        if m > RESCALE:
            a = a / m
            b = b / m
            c = c / m
            d = d / m
            s += log(m)
    out[0] = a
    out[1] = b
    out[2] = c
    out[3] = d
    out[4] = s


def walk_product(codes, values):
    cdef const signed char[:] cv = codes
    cdef const double[:] vv = values
    cdef double out[5]
    _walk(cv, vv, 0, cv.shape[0], out)
    return out[0], out[1], out[2], out[3], out[4]


def walk_products(codes, values, offsets):
    cdef const signed char[:] cv = codes
    cdef const double[:] vv = values
    cdef const long long[:] ov = offsets
    cdef Py_ssize_t n = ov.shape[0] - 1, i
    cdef double out[5]
    res = []
    for i in range(n):
        _walk(cv, vv, ov[i], ov[i + 1], out)
        res.append((out[0], out[1], out[2], out[3], out[4]))
    return res


cdef inline double _lae(double x, double y) noexcept nogil:
    cdef double t
    if x < y:
        t = x
        x = y
        y = t
    if y == -INFINITY:
        return x
    return x + log1p(exp(y - x))


cdef inline void _cross(const double[:] D, const double[:] lsh, const double[:] lch,
                        Py_ssize_t lo, Py_ssize_t hi, double* out) noexcept nogil:
    cdef double h = 0.5 * D[lo]
    cdef double a = h + lch[lo], b = h + lsh[lo], c = lsh[lo] - h, d = lch[lo] - h
    cdef double e, f, g, k, t0, t1, t2, t3
    cdef Py_ssize_t i
    for i in range(lo + 1, hi):
        h = 0.5 * D[i]
        e = h + lch[i]
        f = h + lsh[i]
        g = lsh[i] - h
        k = lch[i] - h
        t0 = _lae(a + e, b + g)
        t1 = _lae(a + f, b + k)
        t2 = _lae(c + e, d + g)
        t3 = _lae(c + f, d + k)
        a = t0
        b = t1
        c = t2
        d = t3
    out[0] = a
    out[1] = b
    out[2] = c
    out[3] = d


def crossing_product(D, lsh, lch):
    cdef const double[:] dv = D
    cdef double out[4]
    _cross(dv, lsh, lch, 0, dv.shape[0], out)
    return out[0], out[1], out[2], out[3]


def crossing_log_traces(D, lsh, lch, offsets):
    cdef const double[:] dv = D
    cdef const double[:] sv = lsh
    cdef const double[:] cv = lch
    cdef const long long[:] ov = offsets
    cdef Py_ssize_t n = ov.shape[0] - 1, i
    cdef double out[4]
    res = [0.0] * n
    for i in range(n):
        _cross(dv, sv, cv, ov[i], ov[i + 1], out)
        res[i] = _lae(out[0], out[3])
    return res


def twisted_traces(l, m, k1, k2):
    cdef const double[:] lv = l
    cdef const double[:] mv = m
    cdef const double[:] av = k1
    cdef const double[:] bv = k2
    cdef Py_ssize_t i, n = lv.shape[0]
    cdef double cm, cp
    res = [0.0] * n
    for i in range(n):
        cm = cosh((mv[i] - lv[i]) / 2.0)
        cp = cosh((mv[i] + lv[i]) / 2.0)
        res[i] = 2.0 * cm - (2.0 * av[i] / (bv[i] - av[i])) * (cp - cm)
    return res
