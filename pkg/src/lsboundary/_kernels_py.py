"""Pure-Python frame-walk kernels (fallback for the compiled module).

A walk is a sequence of steps ``(code, value)``: code 0 moves the frame
forward by ``value`` along its geodesic, code 1 turns it by angle ``value``.
Products are kept as ``scale * [[a, b], [c, d]]`` with ``log(scale)`` tracked
once any entry exceeds ``RESCALE``.

Curve holonomies use the crossing form instead: a product of factors
``-[[E ch, E sh], [sh / E, ch / E]]`` with ``E = exp(D / 2)`` and
``(sh, ch) = (sinh, cosh)(h / 2)``.  Every factor is minus a nonnegative
matrix, so the product is multiplied out in logs entry by entry with no
cancellation, overflow or underflow.
"""
import math

import numpy as np

RESCALE = 1e8


def walk_product(codes, values):
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    log_scale = 0.0
    for code, v in zip(codes, values):
        if code == 0:
            h = 0.5 * v
            if abs(h) > 300.0:
                # exp would overflow: split the factor into the tracked scale
                e = math.exp(-abs(h) * 2.0)
                if h > 0:
                    a, b, c, d = a, b * e, c, d * e
                else:
                    a, b, c, d = a * e, b, c * e, d
                log_scale += abs(h)
            else:
                ep = math.exp(h)
                em = 1.0 / ep
                a, b, c, d = a * ep, b * em, c * ep, d * em
        else:
            h = 0.5 * v
            co, si = math.cos(h), math.sin(h)
            a, b, c, d = a * co - b * si, a * si + b * co, c * co - d * si, c * si + d * co
        m = max(abs(a), abs(b), abs(c), abs(d))
        if m > RESCALE:
            a, b, c, d = a / m, b / m, c / m, d / m
            log_scale += math.log(m)
    return a, b, c, d, log_scale


def walk_products(codes, values, offsets):
    """Batch version: walk ``i`` uses ``codes[offsets[i]:offsets[i+1]]``."""
    out = []
    for i in range(len(offsets) - 1):
        lo, hi = offsets[i], offsets[i + 1]
        out.append(walk_product(codes[lo:hi], values[lo:hi]))
    return out


def _lae(x, y):
    if x < y:
        x, y = y, x
    if y == -math.inf:
        return x
    return x + math.log1p(math.exp(y - x))


def crossing_product(D, lsh, lch):
    """Log entries (l11, l12, l21, l22) of the product; its sign is (-1)^n."""
    h = 0.5 * D[0]
    a, b, c, d = h + lch[0], h + lsh[0], lsh[0] - h, lch[0] - h
    for i in range(1, len(D)):
        h = 0.5 * D[i]
        e, f, g, k = h + lch[i], h + lsh[i], lsh[i] - h, lch[i] - h
        a, b, c, d = (_lae(a + e, b + g), _lae(a + f, b + k),
                      _lae(c + e, d + g), _lae(c + f, d + k))
    return a, b, c, d


def crossing_log_traces(D, lsh, lch, offsets):
    """log |trace| of each walk ``D[offsets[i]:offsets[i+1]]``.

    Walks are advanced together, one step position at a time.
    """
    offsets = np.asarray(offsets)
    start, n = offsets[:-1], np.diff(offsets)
    if np.any(n < 1):
        raise ValueError("empty walk")
    h = 0.5 * np.asarray(D)
    E, F, G, K = h + lch, h + lsh, lsh - h, lch - h
    a, b, c, d = E[start], F[start], G[start], K[start]
    with np.errstate(invalid="ignore"):
        for j in range(1, int(n.max(initial=0))):
            live = np.nonzero(n > j)[0]
            at = start[live] + j
            e, f, g, k = E[at], F[at], G[at], K[at]
            al, bl, cl, dl = a[live], b[live], c[live], d[live]
            a[live], b[live] = np.logaddexp(al + e, bl + g), np.logaddexp(al + f, bl + k)
            c[live], d[live] = np.logaddexp(cl + e, dl + g), np.logaddexp(cl + f, dl + k)
        return np.logaddexp(a, d)


def twisted_traces(l, m, k1, k2):
    out = []
    for li, mi, a, b in zip(l, m, k1, k2):
        cm = math.cosh((mi - li) / 2.0)
        cp = math.cosh((mi + li) / 2.0)
        out.append(2.0 * cm - (2.0 * a / (b - a)) * (cp - cm))
    return out
