"""Experiment drivers.  Each returns an :class:`ExperimentReport` whose CSV
form depends only on the inputs and the seed."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .deformation import twist_earthquake
from .holonomy import CompiledFamily
from .pants import CurveWord, FNCoordinates, MarkedSurface, MulticurveLamination
from .spectra import (CurveFamily, intersection_number, intersection_vector, length_spectrum,
                      ls_norm, normalized_norm, normalized_sup_distance, projective_distance,
                      dls_distance, LengthSpectrumVector)
from .zoo import (K_CAP, ZooRule, check_lbound, enumerate_taut_words, enumerate_walks,
                  length_range, make_shiga_family, make_zoo_surface, parse_rule, star_curve,
                  sweep_growth_constant)

PROBE_HORIZON = 1000
METRIC_RANGE = 0.1


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    columns: tuple[str, ...]
    rows: list[dict]
    verdict: bool
    worst_margin: float
    runtime: float = field(default=0.0, compare=False)

    def to_csv(self) -> str:
        """Header comments, then one line per row.  Runtime is left out so
        that repeated runs produce identical bytes."""
        buf = io.StringIO()
        buf.write(f"# experiment: {self.name}\n")
        for k in sorted(self.parameters):
            buf.write(f"# {k}: {self.parameters[k]}\n")
        buf.write(f"# verdict: {'pass' if self.verdict else 'fail'}\n")
        buf.write(f"# worst_margin: {self.worst_margin!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(r.get(c, "")) for c in self.columns])
        return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _finish(name, params, columns, rows, verdict, margins, t0) -> ExperimentReport:
    worst = min(margins) if margins else 0.0
    return ExperimentReport(name, params, tuple(columns), rows, bool(verdict), float(worst),
                            time.perf_counter() - t0)


# ------------------------------------------------------------ earthquake limit

def run_earthquake_limit(surface: MarkedSurface, mu: MulticurveLamination, fam: CurveFamily,
                         grid=(1.0, 10.0, 100.0, 1000.0)) -> ExperimentReport:
    """Pointwise rows check |l_t/t - i| / l_0 <= 1/t, written as
    l_0 - |l_t - t i| >= 0 so that disjoint curves sit at margin 0 exactly.
    Projective rows bound the distance between the projectivised spectra by
    2 / (t * ||i(mu, .)||)."""
    t0 = time.perf_counter()
    base = length_spectrum(surface.base(), fam)
    inter = intersection_vector(mu, fam, base.values)
    inorm = normalized_norm(inter)
    rows, margins = [], []
    for t in grid:
        t = float(t)
        if t <= 0:
            raise ExperimentError("earthquake limit needs t > 0")
        spec = length_spectrum(twist_earthquake(surface, mu, t), fam)
        for cid, l0, lt, i in zip(fam.ids, base.values, spec.values, inter.values):
            gap = abs(lt - t * i)
            margin = (l0 - gap) / (t * l0)
            # (gap / l0) / t is exactly 1/t for curves the quake leaves alone
            rows.append({"kind": "pointwise", "t": t, "curve_id": cid, "base_length": l0,
                         "length": lt, "intersection": i, "value": (gap / l0) / t,
                         "bound": 1.0 / t, "margin": margin,
                         "lower_slack": lt - (t * i - l0), "upper_slack": t * i + l0 - lt})
            margins.append(margin)
        if inorm > 0:
            d = projective_distance(spec.scaled(1.0 / t), inter)
            bound = 2.0 / (t * inorm)
            rows.append({"kind": "projective", "t": t, "value": d, "bound": bound,
                         "margin": bound - d})
            margins.append(bound - d)
    params = {"mu": mu.to_text(), "grid": " ".join(repr(float(t)) for t in grid),
              "family_size": len(fam), "family_hash": fam.digest(), "ls_norm_mu": repr(inorm)}
    cols = ("kind", "t", "curve_id", "base_length", "length", "intersection", "value", "bound",
            "margin", "lower_slack", "upper_slack")
    return _finish("earthquake-limit", params, cols, rows, all(m >= 0 for m in margins), margins, t0)


# ------------------------------------------------------------ metric comparison

def perturb(s: MarkedSurface, rng: np.random.Generator, eps: float = METRIC_RANGE) -> MarkedSurface:
    """Scale every cuff length by exp(u) and shift interior twists by v, with
    |u|, |v| <= eps."""
    fn = s.fn
    labels = s.graph.labels()
    scale = np.exp(rng.uniform(-eps, eps, len(labels)))
    lengths = {k: fn.length(k) * float(f) for k, f in zip(labels, scale)}
    interior = s.graph.interior_labels()
    shift = rng.uniform(-eps, eps, len(interior))
    twists = {k: fn.twist(k) + float(v) for k, v in zip(interior, shift)}
    return MarkedSurface(s.graph, FNCoordinates(lengths, twists), s.base_fn)


def pair_constant(u: LengthSpectrumVector, v: LengthSpectrumVector) -> float:
    r = np.concatenate([u.base / u.values, u.values / u.base, v.base / v.values, v.values / v.base])
    return float(np.max(r))


def run_metric_comparison(surface: MarkedSurface, fam: CurveFamily, n_pairs: int = 100, seed: int = 0,
                          eps: float = METRIC_RANGE, pairs=None) -> ExperimentReport:
    """Compare dls with the normalised sup distance on pairs of nearby
    surfaces.  Pairs are (X1, X2) with X1 a perturbation of the base and X2 a
    perturbation of X1, unless ``pairs`` is given.  The bracket
    [1/(2M), 2M] is asserted on pairs with 0 < dls <= 0.1."""
    t0 = time.perf_counter()
    if pairs is None:
        rng = np.random.default_rng(seed)
        pairs = []
        for _ in range(n_pairs):
            x1 = perturb(surface, rng, eps)
            pairs.append((x1, perturb(x1, rng, eps)))
    rows, margins = [], []
    for j, (x1, x2) in enumerate(pairs):
        u, v = length_spectrum(x1, fam), length_spectrum(x2, fam)
        dls, sup = dls_distance(u, v), normalized_sup_distance(u, v)
        M = pair_constant(u, v)
        lo, hi = 1.0 / (2.0 * M), 2.0 * M
        degenerate = dls == 0.0 or sup == 0.0
        in_range = (not degenerate) and dls <= METRIC_RANGE
        row = {"pair": j, "dls": dls, "sup_distance": sup, "M": M, "lower": lo, "upper": hi,
               "degenerate": degenerate, "in_range": in_range}
        if not degenerate:
            ratio = dls / sup
            row["ratio"] = ratio
            row["margin"] = min(ratio - lo, hi - ratio)
            if in_range:
                margins.append(row["margin"])
        rows.append(row)
    params = {"seed": seed, "eps": eps, "pairs": len(pairs), "family_size": len(fam),
              "family_hash": fam.digest(), "asserted_pairs": len(margins)}
    cols = ("pair", "dls", "sup_distance", "ratio", "M", "lower", "upper", "degenerate", "in_range", "margin")
    return _finish("metric-compare", params, cols, rows, bool(margins) and all(m >= 0 for m in margins),
                   margins, t0)


# ------------------------------------------------------------ bounded norm check

def boundedness_probe(rule: ZooRule, M: float | None = None, horizon: int = PROBE_HORIZON) -> tuple[float, bool]:
    """Evaluate the cuff rule far past the truncation.  M defaults to twice
    the truncation's own constant max(max l, 1/min l); the rule counts as
    bounded when every probed length stays in [1/M, M]."""
    s = make_zoo_surface(rule)
    lo, hi = length_range(s)
    if M is None:
        M = 2.0 * max(hi, 1.0 / lo)
    probe = [rule.cuff_rule(n) for n in range(1, horizon + 1)]
    if rule.free_rule is not None:
        probe += [rule.free_rule(n) for n in range(1, horizon + 1)]
    ok = all(math.isfinite(x) and 1.0 / M <= x <= M for x in probe)
    return float(M), ok


def random_multicurves(s: MarkedSurface, n: int, rng: np.random.Generator, max_support: int = 3):
    interior = s.graph.interior_labels()
    out = []
    for _ in range(n):
        k = int(rng.integers(1, min(max_support, len(interior)) + 1))
        picks = rng.choice(len(interior), size=k, replace=False)
        w = rng.uniform(0.1, 2.0, size=k)
        out.append(MulticurveLamination({interior[int(p)]: float(x) for p, x in zip(sorted(picks), w)}))
    return out


def run_bounded_norm_check(rule: ZooRule, fam: CurveFamily | None = None, betas=None, seed: int = 0,
                           n_betas: int = 20, max_segments: int = 2, M: float | None = None) -> ExperimentReport:
    """For multicurves beta on a bounded surface report sup_n i(beta, a_n),
    sup_n i(beta, a*_n) and the inferred constant C; pass iff C is finite and
    C <= N max(M, sup l(a*)) with N the largest ls_norm in the sample."""
    t0 = time.perf_counter()
    M, bounded = boundedness_probe(rule, M)
    if not bounded:
        raise ExperimentError(f"rule is not bounded: lengths leave [1/{M:g}, {M:g}] within {PROBE_HORIZON} cuffs")
    s = make_zoo_surface(rule)
    interior = s.graph.interior_labels()
    stars = [star_curve(s, k) for k in interior]
    if fam is None:
        fam = CurveFamily(enumerate_taut_words(s, max_segments, 1))
    fam = fam.extended(stars)
    base = length_spectrum(s.base(), fam)
    star_len = base.values[[fam.ids.index(str(w)) for w in stars]]
    if betas is None:
        betas = random_multicurves(s, n_betas, np.random.default_rng(seed))
    rows = []
    for j, beta in enumerate(betas):
        nrm = ls_norm(beta, fam, base)
        i_cuff = max(intersection_number(beta, CurveWord.of_cuff(k)) for k in interior)
        i_star = max(intersection_number(beta, w) for w in stars)
        rows.append({"beta": j, "lamination": beta.to_text(), "ls_norm": nrm, "max_i_cuff": i_cuff,
                     "max_i_star": i_star, "star_bound": nrm * float(np.max(star_len))})
    Nn = max((r["ls_norm"] for r in rows), default=0.0)
    C = max((max(r["max_i_cuff"], r["max_i_star"]) for r in rows), default=0.0)
    cap = Nn * max(M, float(np.max(star_len)))
    for r in rows:
        r["margin"] = cap - max(r["max_i_cuff"], r["max_i_star"])
    margins = [r["margin"] for r in rows]
    params = {"seed": seed, "M": repr(M), "N": repr(Nn), "C": repr(C), "cap": repr(cap),
              "star_length_min": repr(float(np.min(star_len))), "star_length_max": repr(float(np.max(star_len))),
              "family_size": len(fam), "family_hash": fam.digest(), "rule": rule.names or rule.kind}
    cols = ("beta", "lamination", "ls_norm", "max_i_cuff", "max_i_star", "star_bound", "margin")
    verdict = math.isfinite(C) and C <= cap
    return _finish("bounded-norm", params, cols, rows, verdict, margins, t0)


# ------------------------------------------------------------ Shiga boundary

def run_shiga_boundary(N: int = 10, growth=None, max_segments: int = 4,
                       max_winding: int = K_CAP) -> ExperimentReport:
    """``growth`` is a rule string, a callable, or None to sweep exp:c for
    the smallest passing c.  Aborts if the lbound check fails."""
    t0 = time.perf_counter()
    # the flute's combinatorics do not depend on the growth rule
    template = make_shiga_family(N, lambda n: float(n))
    curves, steps = enumerate_walks(template.surface, max_segments, max_winding)
    if growth is None:
        c, fam, lb = sweep_growth_constant(N, max_segments, max_winding, walks=(curves, steps))
        growth_name = f"exp:{c!r}"
    else:
        g = parse_rule(growth) if isinstance(growth, str) else growth
        growth_name = growth if isinstance(growth, str) else getattr(growth, "__name__", "custom")
        fam = make_shiga_family(N, g)
        lb = check_lbound(fam, curves, CompiledFamily(fam.surface.graph, curves, steps).lengths(fam.surface))
        if not lb["pass"]:
            bad = min(lb["rows"], key=lambda r: r["margin"])
            raise ExperimentError(f"lbound check fails for {growth_name}: curve {bad['curve']} has length "
                                  f"{bad['length']:.6g} < {bad['rhs']:.6g}")
    lengths = CompiledFamily(fam.surface.graph, curves, steps).lengths(fam.surface)
    gl = np.array(fam.gamma_lengths)
    cross = np.array([[w.crossings().get(g.cuff, 0) for g in fam.gammas] for w in curves], dtype=float)
    weighted = cross * gl  # i(gamma_k, delta) l(gamma_k)
    rows, margins = [], []
    for n in range(1, N + 1):
        diff = weighted[:, n:].sum(axis=1)  # i(beta_*, delta) - i(beta_n, delta)
        ratio = diff / lengths
        j = int(np.argmax(ratio))
        bound = 1.0 / (n + 1)
        rows.append({"n": n, "sup_ratio": float(ratio[j]), "argmax_curve": str(curves[j]),
                     "bound": bound, "margin": bound - float(ratio[j])})
        margins.append(bound - float(ratio[j]))
    params = {"N": N, "growth": growth_name, "max_segments": max_segments, "max_winding": max_winding,
              "family_size": len(curves), "lbound_pass": lb["pass"],
              "lbound_worst_margin": repr(lb["worst_margin"])}
    cols = ("n", "sup_ratio", "argmax_curve", "bound", "margin")
    return _finish("shiga", params, cols, rows, lb["pass"] and all(m >= 0 for m in margins), margins, t0)
