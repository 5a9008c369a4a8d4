"""Length-spectrum vectors over finite curve families, and the norms and
distances built on them.

Every supremum over simple closed curves is taken over an explicit finite
family, so the values reported here are lower bounds for the true suprema.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .holonomy import CompiledFamily
from .pants import CurveWord, MarkedSurface, MulticurveLamination, PantsGraph, surface_to_json


class SpectrumError(ValueError):
    pass


class CurveFamily:
    """Ordered family of distinct curve words; ids are the word strings."""

    def __init__(self, words, steps=None):
        self.words = tuple(words)
        if not self.words:
            raise SpectrumError("curve family must be nonempty")
        self.ids = tuple(str(w) for w in self.words)
        if len(set(self.ids)) != len(self.ids):
            raise SpectrumError("curve family has duplicate curves")
        self._steps = steps
        self._compiled: dict[PantsGraph, CompiledFamily] = {}
        self._crossings: dict[str, tuple[np.ndarray, np.ndarray]] | None = None

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def extended(self, words) -> "CurveFamily":
        extra = [w for w in words if str(w) not in set(self.ids)]
        return CurveFamily(self.words + tuple(extra))

    def compiled(self, graph: PantsGraph) -> CompiledFamily:
        cf = self._compiled.get(graph)
        if cf is None:
            cf = CompiledFamily(graph, self.words, self._steps)
            self._compiled[graph] = cf
        return cf

    def intersections(self, mu: MulticurveLamination) -> np.ndarray:
        """i(mu, w) for every word, from a cached cuff -> (rows, counts) index."""
        if self._crossings is None:
            acc: dict[str, tuple[list, list]] = {}
            for j, w in enumerate(self.words):
                for label, n in w.crossings().items():
                    rows, counts = acc.setdefault(label, ([], []))
                    rows.append(j)
                    counts.append(n)
            self._crossings = {k: (np.array(r, dtype=np.intp), np.array(c, dtype=float))
                               for k, (r, c) in acc.items()}
        out = np.zeros(len(self.words))
        for label, wt in mu.weights.items():
            if label in self._crossings:
                rows, counts = self._crossings[label]
                out[rows] += wt * counts
        return out

    def digest(self) -> str:
        return hashlib.sha256("\n".join(self.ids).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class LengthSpectrumVector:
    """Values and base lengths l_{X0} indexed by curve id."""

    ids: tuple[str, ...]
    values: np.ndarray
    base: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        b = np.asarray(self.base, dtype=float)
        if v.shape != (len(self.ids),) or b.shape != v.shape:
            raise SpectrumError("values, base and ids must have the same length")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise SpectrumError("spectrum values must be finite and >= 0")
        if not np.all(np.isfinite(b)) or np.any(b <= 0):
            raise SpectrumError("base lengths must be finite and > 0")
        v.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "base", b)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.ids, self.values.tolist()))

    def scaled(self, c: float) -> "LengthSpectrumVector":
        return LengthSpectrumVector(self.ids, c * self.values, self.base)

    def normalized_values(self) -> np.ndarray:
        return self.values / self.base


def length_spectrum(s: MarkedSurface, fam: CurveFamily) -> LengthSpectrumVector:
    cf = fam.compiled(s.graph)
    values = cf.lengths(s)
    base = values if (s.fn == s.base_fn) else cf.lengths(s.base())
    return LengthSpectrumVector(fam.ids, values, base)


def intersection_number(mu: MulticurveLamination, delta: CurveWord) -> float:
    """Sum of weights over the cuff crossings of ``delta``."""
    return float(sum(mu.weight(label) * n for label, n in delta.crossings().items()))


def intersection_vector(mu: MulticurveLamination, fam: CurveFamily, base: np.ndarray) -> LengthSpectrumVector:
    """i(mu, .) over ``fam`` as a spectrum vector normalised by ``base``."""
    return LengthSpectrumVector(fam.ids, fam.intersections(mu), base)


def _same_keys(u: LengthSpectrumVector, v: LengthSpectrumVector) -> None:
    if u.ids != v.ids:
        raise SpectrumError("spectrum vectors have different curve ids")


def normalized_norm(u: LengthSpectrumVector) -> float:
    return float(np.max(np.abs(u.values) / u.base))


def normalized_sup_distance(u: LengthSpectrumVector, v: LengthSpectrumVector) -> float:
    _same_keys(u, v)
    if not np.array_equal(u.base, v.base):
        raise SpectrumError("spectrum vectors have different base lengths")
    return float(np.max(np.abs(u.values - v.values) / u.base))


def dls_distance(u: LengthSpectrumVector, v: LengthSpectrumVector) -> float:
    """Length-spectrum distance: sup |log(v / u)|."""
    _same_keys(u, v)
    if np.any(u.values <= 0) or np.any(v.values <= 0):
        raise SpectrumError("length spectrum distance needs positive lengths")
    return float(np.max(np.abs(np.log(v.values) - np.log(u.values))))


def ls_norm(mu: MulticurveLamination, fam: CurveFamily, base: LengthSpectrumVector | np.ndarray) -> float:
    b = base.values if isinstance(base, LengthSpectrumVector) else np.asarray(base)
    return float(np.max(fam.intersections(mu) / b))


def collar_width(length: float) -> float:
    """Half-width of the standard collar about a geodesic of this length."""
    return math.asinh(1.0 / math.sinh(0.5 * length))


def crossing_cap(length: float) -> int:
    """Max number of times a unit arc can cross a geodesic of this length."""
    return math.floor(1.0 / (2.0 * collar_width(length))) + 1


def thurston_norm_bounds(mu: MulticurveLamination, s: MarkedSurface) -> tuple[float, float]:
    """Interval containing the Thurston norm of a cuff-supported multicurve.

    A short arc across any support cuff gives the lower bound.  Consecutive
    crossings of one cuff are at least a collar diameter apart, which gives
    the upper bound.
    """
    if not mu.weights:
        raise SpectrumError("Thurston norm bounds need a nonempty support")
    fn = s.base_fn
    lower = max(mu.weights.values())
    upper = sum(w * crossing_cap(fn.length(k)) for k, w in mu.weights.items())
    return lower, upper


def projective_normalize(u: LengthSpectrumVector) -> LengthSpectrumVector:
    n = normalized_norm(u)
    if n == 0:
        raise SpectrumError("cannot projectivise the zero vector")
    if n == 1.0:
        return u
    return LengthSpectrumVector(u.ids, u.values / n, u.base)


def projective_distance(u: LengthSpectrumVector, v: LengthSpectrumVector) -> float:
    return normalized_sup_distance(projective_normalize(u), projective_normalize(v))


def surface_digest(s: MarkedSurface) -> str:
    return hashlib.sha256(surface_to_json(s).encode()).hexdigest()[:16]


def spectrum_csv(u: LengthSpectrumVector) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve_id", "base_length", "length", "normalized_value"])
    for cid, b, v in zip(u.ids, u.base, u.values):
        w.writerow([cid, repr(float(b)), repr(float(v)), repr(float(v / b))])
    return buf.getvalue()


def spectrum_metadata(s: MarkedSurface, fam: CurveFamily, grid=None) -> str:
    return json.dumps({"surface_hash": surface_digest(s), "family_hash": fam.digest(),
                       "family_size": len(fam), "grid": list(grid) if grid is not None else None},
                      indent=2, sort_keys=True)
