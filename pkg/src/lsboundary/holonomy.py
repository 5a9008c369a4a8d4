"""Hexagon trigonometry, frame-walk holonomy of curve words, geodesic lengths.

Geometry conventions
--------------------
Every pants is two right-angled hexagons glued along its three seams.  Each
cuff of a pants is oriented with the pants on its left.  On slot ``i`` the
seam foot towards slot ``i-1`` sits at position 0 and the foot towards slot
``i+1`` at position ``L_i / 2``.

A curve is realised as a piecewise geodesic along seams and cuffs and
evaluated as a frame walk in PSL(2, R): moving forward by ``d`` right
multiplies by ``diag(e^{d/2}, e^{-d/2})``, turning by ``theta`` right
multiplies by a rotation about ``i``.  Walking a seam from one foot to the
other is ``turn(+pi/2) move(s) turn(+pi/2)`` in either direction.

Across an interior cuff with twist ``tau`` the position ``y`` seen from one
side and ``x`` seen from the other satisfy ``y = tau - x``.  The frame slides
along the cuff by ``half + tau + k * L`` (``half`` is 0 or ``L/2`` so that at
zero twist the feet line up) and turns by ``pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .pants import CurveWord, MarkedSurface, resolve_path

LEFT = math.pi / 2
HALF_TURN = math.pi
NON_HYPERBOLIC_TOL = 1e-12
_LOG2 = math.log(2.0)


class HolonomyError(ValueError):
    pass


@dataclass(frozen=True)
class Mat2:
    """``exp(log_scale) * [[a, b], [c, d]]``."""

    a: float
    b: float
    c: float
    d: float
    log_scale: float = 0.0

    @classmethod
    def from_array(cls, m) -> "Mat2":
        return cls(float(m[0][0]), float(m[0][1]), float(m[1][0]), float(m[1][1]))

    def to_array(self) -> np.ndarray:
        return math.exp(self.log_scale) * np.array([[self.a, self.b], [self.c, self.d]])

    def det(self) -> float:
        return (self.a * self.d - self.b * self.c) * math.exp(2.0 * self.log_scale)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return Mat2(a, b, c, d, self.log_scale + other.log_scale)

    def log_abs_trace(self) -> float:
        t = abs(self.a + self.d)
        if t == 0.0:
            return -math.inf
        return math.log(t) + self.log_scale

    def abs_trace(self) -> float:
        return math.exp(self.log_abs_trace())


# ------------------------------------------------------------ trigonometry

def _log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - _LOG2


def _log_sinh(x: float) -> float:
    if x < 1.0:
        return math.log(math.sinh(x))
    return x + math.log1p(-math.exp(-2.0 * x)) - _LOG2


def _log_add(a: float, b: float) -> float:
    return max(a, b) + math.log1p(math.exp(-abs(a - b)))


def _sinh_from_log(ly: float) -> float:
    """asinh(exp(ly)), without overflow."""
    if ly > 300.0:
        return ly + _LOG2
    return math.asinh(math.exp(ly))


def _half_logs(ly: float) -> tuple[float, float]:
    """(log sinh, log cosh) of x from log sinh x."""
    return ly, 0.5 * _log_add(0.0, 2.0 * ly)


def _seam_log_sinh(li: float, lj: float, lk: float) -> float:
    """log sinh(s/2) for the seam between cuffs i and j.

    Uses cosh s - 1 = (cosh hk + cosh(hi - hj)) / (sinh hi sinh hj): positive
    terms only, so tiny seams between long cuffs keep full relative accuracy.
    """
    hi, hj, hk = 0.5 * li, 0.5 * lj, 0.5 * lk
    lx = _log_add(_log_cosh(hk), _log_cosh(hi - hj)) - _log_sinh(hi) - _log_sinh(hj)
    return 0.5 * (lx - _LOG2)


def _seam(li: float, lj: float, lk: float) -> float:
    """Common perpendicular between cuffs i and j."""
    return 2.0 * _sinh_from_log(_seam_log_sinh(li, lj, lk))


def _loop_logs(la: float, lx: float, ly: float) -> tuple[float, float]:
    """The essential arc from cuff a back to itself around cuff x.

    Returns (log sinh(h/2), p): h is the arc length and its ends sit at
    distance p on either side of the foot of the a-x seam.  From the
    pentagon relations, sinh^2(h/2) sinh^2 A = (cosh Y + e^-A cosh X)(cosh Y +
    e^A cosh X) and sinh p = cosh X / sinh(h/2), with A, X, Y the half lengths.
    """
    A, X, Y = 0.5 * la, 0.5 * lx, 0.5 * ly
    cx, cy = _log_cosh(X), _log_cosh(Y)
    lsh = 0.5 * (_log_add(cy, cx - A) + _log_add(cy, cx + A)) - _log_sinh(A)
    return lsh, _sinh_from_log(cx - lsh)


def seam_lengths(l1: float, l2: float, l3: float) -> tuple[float, float, float]:
    """Lengths (s12, s23, s31) of the seams of a pants with cuffs l1, l2, l3.

    ``s_ij`` is the common perpendicular between cuffs i and j.
    """
    if not (l1 > 0 and l2 > 0 and l3 > 0):
        raise ValueError(f"cuff lengths must be positive, got {(l1, l2, l3)}")
    return _seam(l1, l2, l3), _seam(l2, l3, l1), _seam(l3, l1, l2)


def seam_between(lengths, i: int, j: int) -> float:
    k = 3 - i - j
    return _seam(lengths[i], lengths[j], lengths[k])


def _foot(lengths, i: int, towards: int) -> float:
    return 0.0 if towards == (i - 1) % 3 else 0.5 * lengths[i]


# ------------------------------------------------------------ walks
#
# Step i of a walk is seam(h_i) then slide(D_i) and a half turn, where
# seam(h) = turn(pi/2) move(h) turn(pi/2) = [[sh, ch], [-ch, -sh]] and
# slide(D) half-turn = [[0, E], [-1/E, 0]].  A same-slot step, seam(s) around
# the cuff seam(s), equals move(-p) seam(h) move(-p); the move(-p) pieces are
# folded into the neighbouring slides.  Pairing slide_i with seam_{i+1} gives
# factors -[[E ch, E sh], [sh/E, ch/E]], all of one sign.

class _Template:
    """Twist-independent part of compiled walks plus the slide slots."""

    __slots__ = ("lsh", "lch", "offset", "slide_label", "slide_half", "slide_k")

    def __init__(self):
        self.lsh: list[float] = []
        self.lch: list[float] = []
        self.offset: list[float] = []
        self.slide_label: list[str] = []
        self.slide_half: list[bool] = []
        self.slide_k: list[float] = []


def _build_template(graph, fn, steps, out: _Template, cache: dict | None = None) -> None:
    """Append the steps of one walk.  ``cache`` shares per-pants geometry
    between walks compiled against the same FN data."""
    cache = {} if cache is None else cache

    def geom(st):
        key = (st.node, st.entry, st.exit, st.around)
        g = cache.get(key)
        if g is None:
            g = cache[key] = _geom(st)
        return g

    def _geom(st):
        lens = [fn.length(graph.label_at(st.node, i)) for i in range(3)]
        if st.entry != st.exit:
            i, j = st.entry, st.exit
            lsh = _seam_log_sinh(lens[i], lens[j], lens[3 - i - j])
            foot = _foot(lens, i, j)
            return lsh, 0.0, foot, _foot(lens, j, i), foot
        a, around = st.entry, st.around
        lsh, p = _loop_logs(lens[a], lens[around], lens[3 - a - around])
        f = _foot(lens, a, around)
        # windings are counted from the foot of the arc round the next cuff
        return lsh, p, f, f, 0.5 * lens[a]

    n = len(steps)
    info = [geom(st) for st in steps]
    for idx, st in enumerate(steps):
        _lsh, p, _entry, dep, _default = info[idx]
        nxt = info[(idx + 1) % n]
        sh, ch = _half_logs(nxt[0])
        out.lsh.append(sh)
        out.lch.append(ch)
        out.offset.append(nxt[1] - p)
        out.slide_label.append(graph.label_at(st.node, st.exit))
        out.slide_half.append((dep != 0.0) != (nxt[4] != 0.0))
        out.slide_k.append(0.5 * st.winding)


def _slides(half, lengths, twists, k, offset):
    """Slide amounts D; every caller goes through this one expression."""
    return (np.where(half, 0.5 * lengths, 0.0) + twists + k * lengths) + offset


def _template_slides(tpl: _Template, fn) -> np.ndarray:
    lab = tpl.slide_label
    return _slides(np.array(tpl.slide_half, dtype=bool), np.array([fn.length(x) for x in lab]),
                   np.array([fn.twist(x) for x in lab]), np.array(tpl.slide_k, dtype=float),
                   np.array(tpl.offset))


def _compile(surface, word, steps):
    steps = resolve_path(surface.graph, word) if steps is None else steps
    tpl = _Template()
    _build_template(surface.graph, surface.fn, steps, tpl)
    return _template_slides(tpl, surface.fn), np.array(tpl.lsh), np.array(tpl.lch)


def compile_walk(surface: MarkedSurface, word: CurveWord, steps=None) -> tuple[list[int], list[float]]:
    """Frame-walk step list (codes, values) conjugate to the holonomy of
    ``word``: code 0 moves forward, code 1 turns left."""
    if word.is_cuff:
        return [0], [surface.fn.length(word.cuff)]
    D, lsh, _ = _compile(surface, word, steps)
    codes, vals = [], []
    for d, ls in zip(D, lsh):
        codes += [0, 1, 0, 1]
        vals += [float(d), 1.5 * math.pi, 2.0 * _sinh_from_log(ls), LEFT]
    return codes, vals


def curve_holonomy(surface: MarkedSurface, word: CurveWord) -> Mat2:
    """Holonomy of ``word`` (up to conjugacy) on ``surface``."""
    if word.is_cuff:
        h = 0.5 * surface.fn.length(word.cuff)
        return Mat2(1.0, 0.0, 0.0, math.exp(-2.0 * h), log_scale=h)
    D, lsh, lch = _compile(surface, word, None)
    logs = kernels.crossing_product(D, lsh, lch)
    m = max(logs)
    sign = -1.0 if len(D) % 2 else 1.0
    return Mat2(*(sign * math.exp(x - m) for x in logs), log_scale=m)


def length_from_log_trace(lam: float) -> float:
    return float(lengths_from_log_traces(np.array([lam]))[0])


def lengths_from_log_traces(lam: np.ndarray) -> np.ndarray:
    """2 arccosh(|tr| / 2) from log |tr|, elementwise."""
    lam = np.asarray(lam, dtype=np.float64)
    bad = ~(lam > math.log(2.0 + NON_HYPERBOLIC_TOL))
    if np.any(bad):
        x = float(lam[np.argmax(bad)])
        raise HolonomyError(f"non-hyperbolic element: |trace| = {math.exp(x)!r}")
    small = lam < 30.0
    out = np.empty_like(lam)
    out[small] = 2.0 * np.arccosh(0.5 * np.exp(lam[small]))
    x = lam[~small] - _LOG2
    out[~small] = 2.0 * (x + np.log1p(np.sqrt(-np.expm1(-2.0 * x))))
    return out


def geodesic_length(m: Mat2) -> float:
    """Translation length 2 arccosh(|tr|/2) of a hyperbolic element."""
    return length_from_log_trace(m.log_abs_trace())


def curve_length(surface: MarkedSurface, word: CurveWord) -> float:
    if word.is_cuff:
        return surface.fn.length(word.cuff)
    D, lsh, lch = _compile(surface, word, None)
    lam = kernels.crossing_log_traces(D, lsh, lch, [0, len(D)])
    return float(lengths_from_log_traces(lam)[0])


class CompiledFamily:
    """Words compiled once against a pants graph.

    Re-evaluating on surfaces that differ only in twists (earthquake sweeps)
    refills the slides instead of rebuilding the walks.
    """

    def __init__(self, graph, words, steps=None):
        self.graph = graph
        self.words = list(words)
        self.steps = [() if w.is_cuff else resolve_path(graph, w) for w in self.words] \
            if steps is None else list(steps)
        self._lengths_key = None

    def _compile(self, fn):
        tpl = _Template()
        offsets = [0]
        cache: dict = {}
        self._path_idx = []
        for i, (w, st) in enumerate(zip(self.words, self.steps)):
            if not w.is_cuff:
                _build_template(self.graph, fn, st, tpl, cache)
                self._path_idx.append(i)
                offsets.append(len(tpl.lsh))
        self._lsh = np.array(tpl.lsh, dtype=np.float64)
        self._lch = np.array(tpl.lch, dtype=np.float64)
        self._offsets = np.array(offsets, dtype=np.int64)
        index = {k: i for i, k in enumerate(self.graph.labels())}
        self._slide_idx = np.array([index[x] for x in tpl.slide_label], dtype=np.intp)
        self._slide_half = np.array(tpl.slide_half, dtype=bool)
        self._slide_k = np.array(tpl.slide_k, dtype=float)
        self._slide_len = np.array([fn.length(x) for x in tpl.slide_label])
        self._slide_off = np.array(tpl.offset, dtype=np.float64)
        self._lengths_key = dict(fn.lengths)

    def lengths(self, surface: MarkedSurface) -> np.ndarray:
        if surface.graph != self.graph:
            raise ValueError("surface graph differs from the compiled graph")
        fn = surface.fn
        if self._lengths_key is None or self._lengths_key != dict(fn.lengths):
            self._compile(fn)
        out = np.array([fn.length(w.cuff) if w.is_cuff else 0.0 for w in self.words])
        if self._path_idx:
            twists = np.array([fn.twist(k) for k in self.graph.labels()])
            D = _slides(self._slide_half, self._slide_len, twists[self._slide_idx], self._slide_k,
                        self._slide_off)
            lam = kernels.crossing_log_traces(D, self._lsh, self._lch, self._offsets)
            out[self._path_idx] = lengths_from_log_traces(lam)
        return out


def curve_lengths(surface: MarkedSurface, words, steps=None) -> np.ndarray:
    """Lengths of many words in one kernel call."""
    return CompiledFamily(surface.graph, words, steps).lengths(surface)


# ------------------------------------------------------------ twisted trace

@dataclass(frozen=True)
class TwistConfig:
    l: float
    m_t: float
    k1: float
    k2: float
    t: float = 0.0

    def __post_init__(self):
        if not (self.k1 < 0 < self.k2):
            raise ValueError("need k1 < 0 < k2")
        if not self.l > 0:
            raise ValueError("need l > 0")
        if not self.m_t >= 0:
            raise ValueError("need m_t >= 0")


def twisted_trace(cfg: TwistConfig) -> float:
    """Closed-form trace of the twisted covering transformation."""
    cm = math.cosh((cfg.m_t - cfg.l) / 2.0)
    cp = math.cosh((cfg.m_t + cfg.l) / 2.0)
    return 2.0 * cm - (2.0 * cfg.k1 / (cfg.k2 - cfg.k1)) * (cp - cm)


def twisted_trace_oracle(cfg: TwistConfig) -> float:
    """|trace| of A @ B with B(z) = e^{-l} z and A the translation of length
    m_t along the geodesic from k1 to k2, multiplied out as matrices."""
    b = np.diag([math.exp(-cfg.l / 2.0), math.exp(cfg.l / 2.0)])
    conj = np.array([[cfg.k2, cfg.k1], [1.0, 1.0]])
    a = conj @ np.diag([math.exp(cfg.m_t / 2.0), math.exp(-cfg.m_t / 2.0)]) @ np.linalg.inv(conj)
    return float(abs(np.trace(a @ b)))
