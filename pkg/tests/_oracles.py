"""Reference computations that share no code with the package kernels."""
import math

import mpmath as mp
import numpy as np
from scipy.optimize import least_squares

mp.mp.dps = 60


def _boost(d):
    c, s = mp.cosh(d), mp.sinh(d)
    return mp.matrix([[c, 0, s], [0, 1, 0], [s, 0, c]])


def _rot(theta):
    c, s = mp.cos(theta), mp.sin(theta)
    return mp.matrix([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def so21_walk(codes, values):
    """Frame walk in the hyperboloid model: code 0 boosts forward, code 1
    rotates left.  High precision, so long curves do not overflow."""
    m = mp.eye(3)
    for code, v in zip(codes, values):
        m = m * (_boost(mp.mpf(v)) if code == 0 else _rot(mp.mpf(v)))
    return m


def so21_length(codes, values):
    tr = sum(so21_walk(codes, values)[i, i] for i in range(3))
    return float(mp.acosh((tr - 1) / 2))


def _boost_np(d):
    c, s = math.cosh(d), math.sinh(d)
    return np.array([[c, 0, s], [0, 1, 0], [s, 0, c]])


def _rot_np(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def hexagon_seams(l1, l2, l3):
    """Seams (s12, s23, s31) of the right-angled hexagon with alternate sides
    l1/2, l2/2, l3/2, found by closing the boundary walk with a root finder."""
    h = (0.5 * l1, 0.5 * l2, 0.5 * l3)
    q = _rot_np(math.pi / 2)

    def walk(s):
        m = np.eye(3)
        for side, seam in zip(h, s):
            m = m @ _boost_np(side) @ q @ _boost_np(seam) @ q
        return m

    def resid(s):
        return (walk(s) - np.eye(3)).ravel()

    def mp_walk(*seams):
        m = mp.eye(3)
        qq = _rot(mp.pi / 2)
        for side, seam in zip(h, seams):
            m = m * _boost(mp.mpf(side)) * qq * _boost(seam) * qq
        return m

    def mp_resid(*seams):
        m = mp_walk(*seams)
        return [m[0, 2], m[1, 2], m[0, 1]]

    # a rough float fit, then polish at high precision where the walk is well
    # conditioned
    for start in (1.0, 0.3, 3.0, 0.05, 10.0):
        fit = least_squares(resid, [start] * 3, bounds=(1e-9, 60.0))
        try:
            root = mp.findroot(mp_resid, [mp.mpf(x) for x in fit.x], tol=mp.mpf(10) ** -50)
        except (ValueError, ZeroDivisionError):
            continue
        root = [root[i] for i in range(3)]
        if min(root) > 0 and mp.norm(mp_walk(*root) - mp.eye(3)) < mp.mpf(10) ** -30:
            return tuple(float(x) for x in root)
    raise RuntimeError("hexagon walk did not close")


def handle_length(d, twist):
    """Closed geodesic crossing a cuff once: cosh(l/2) = cosh(d/2) cosh(t/2)."""
    return 2.0 * math.acosh(math.cosh(0.5 * d) * math.cosh(0.5 * twist))


def collar_crossings(z1, z2, width):
    """Crossings of the segment [z1, z2] in the upper half plane with the
    geodesics |z| = exp(2 * width * k).  Each is met at most once, so only the
    endpoints matter."""
    a = math.log(abs(z1)) / (2.0 * width)
    b = math.log(abs(z2)) / (2.0 * width)
    return abs(math.floor(a) - math.floor(b))


def unit_geodesic_endpoint(z, angle, length=1.0):
    """Endpoint of the geodesic of given length from z in direction angle
    (measured from the upward vertical)."""
    x, y = z.real, z.imag
    # move to i, walk up by length, rotate, move back
    w = 1j * math.exp(length)
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    w = (c * w + s) / (-s * w + c)
    return x + y * w
