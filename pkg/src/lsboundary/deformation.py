"""Earthquakes along cuff-supported multicurves as Fenchel-Nielsen twist flows."""
from __future__ import annotations

from dataclasses import dataclass

from .pants import MarkedSurface, MulticurveLamination


class EarthquakeError(ValueError):
    pass


def _check_support(s: MarkedSurface, mu: MulticurveLamination) -> None:
    for label in mu.support:
        if s.graph.cuff(label).free:
            raise EarthquakeError(f"lamination is supported on free boundary cuff {label}")


def twist_earthquake(s: MarkedSurface, mu: MulticurveLamination, t: float) -> MarkedSurface:
    """Left earthquake of time ``t`` along ``mu``: twist_n += t * w_n.

    Lengths and the base surface are untouched.  Repeated flows along the same
    lamination add their times, so ``twist(twist(s, mu, a), mu, b)`` and
    ``twist(s, mu, a + b)`` are the same object when ``s`` carries no earlier
    flow along ``mu``.
    """
    _check_support(s, mu)
    if t == 0 or not mu.weights:
        return s
    quakes = list(s.quakes)
    for i, (m, t0) in enumerate(quakes):
        if m == mu:
            quakes[i] = (m, t0 + t)
            break
    else:
        quakes.append((mu, float(t)))
    return MarkedSurface(s.graph, s.fn0, s.base_fn, tuple(quakes))


@dataclass(frozen=True)
class EarthquakePath:
    base: MarkedSurface
    mu: MulticurveLamination
    grid: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(t) for t in self.grid)
        object.__setattr__(self, "grid", grid)
        if any(t < 0 for t in grid):
            raise EarthquakeError("earthquake times must be >= 0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise EarthquakeError("grid must be strictly increasing")
        _check_support(self.base, self.mu)


def earthquake_path_sample(p: EarthquakePath) -> list[MarkedSurface]:
    return [twist_earthquake(p.base, p.mu, t) for t in p.grid]
