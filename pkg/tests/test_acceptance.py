"""Acceptance suite.  Each criterion is a function returning (passed, detail);
the tests assert them and a summary line per criterion is printed at the end
of the session (``python3 tests/test_acceptance.py`` prints the same lines)."""
import math
import time

import numpy as np
import pytest

from lsboundary import (CurveFamily, MulticurveLamination, TwistConfig, ZooRule, curve_lengths,
                        dependent_cuffs, length_spectrum, ls_norm, make_zoo_surface, thurston_norm_bounds,
                        twist_earthquake, twisted_trace, twisted_trace_oracle)
from lsboundary.cli import default_mu
from lsboundary.experiments import (random_multicurves, run_earthquake_limit, run_metric_comparison,
                                    run_shiga_boundary)
from lsboundary.spectra import normalized_norm
from lsboundary.zoo import enumerate_taut_words, enumerate_walks, parse_rule

RESULTS: dict[int, str] = {}


def bounded_flute(N=20):
    return make_zoo_surface(ZooRule("flute", parse_rule("const:2"), N=N))


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok, detail


def criterion_1():
    rng = np.random.default_rng(1)
    cfgs = [TwistConfig(l=float(rng.uniform(0, 10)) or 10.0, m_t=float(rng.uniform(0, 20)),
                        k1=-float(10 ** rng.uniform(-3, 3)), k2=float(10 ** rng.uniform(-3, 3)))
            for _ in range(1000)]
    t0 = time.perf_counter()
    worst = max(abs(twisted_trace(c) - twisted_trace_oracle(c)) / abs(twisted_trace_oracle(c)) for c in cfgs)
    dt = time.perf_counter() - t0
    return record(1, worst <= 1e-9 and dt < 1.0, f"max rel err {worst:.2e} (<= 1e-9), runtime {dt:.2f}s (< 1s)")


_QUAKE = {}


def earthquake_report():
    if not _QUAKE:
        s = bounded_flute()
        t0 = time.perf_counter()
        fam = CurveFamily(*enumerate_walks(s, 4))
        rep = run_earthquake_limit(s, default_mu(s), fam, (1.0, 10.0, 100.0, 1000.0))
        _QUAKE.update(rep=rep, runtime=time.perf_counter() - t0, fam=fam, surface=s)
    return _QUAKE


def criterion_2():
    q = earthquake_report()
    rep = q["rep"]
    weights = sorted(default_mu(q["surface"]).weights.values())
    point = [r for r in rep.rows if r["kind"] == "pointwise"]
    worst = max(r["value"] * r["t"] for r in point)  # deviation in units of 1/t
    ok = weights == [0.5, 1.0, 2.0] and all(r["value"] <= 1.0 / r["t"] for r in point) and q["runtime"] < 10
    return record(2, ok, f"{len(q['fam'])} curves x 4 times, max t*deviation {worst:.6f} (<= 1), "
                         f"runtime {q['runtime']:.2f}s (< 10s)")


def criterion_3():
    rep = earthquake_report()["rep"]
    slack = min(min(r["lower_slack"], r["upper_slack"]) for r in rep.rows if r["kind"] == "pointwise")
    return record(3, slack >= -1e-9, f"min sandwich slack {slack:.3e} (>= -1e-9)")


def criterion_4():
    s = bounded_flute()
    words = [w for w in enumerate_taut_words(s, 4) if not w.is_cuff]
    base = curve_lengths(s, words)
    rng = np.random.default_rng(4)
    interior = set(s.graph.interior_labels())
    changed = 0
    for _ in range(100):
        j = int(rng.integers(len(words)))
        dep = dependent_cuffs(words[j], s.graph)
        far = [k for k in s.graph.labels() if k not in dep]
        picks = rng.choice(far, size=min(3, len(far)), replace=False)
        lengths = {str(k): float(rng.uniform(0.1, 5.0)) for k in picks}
        twists = {str(k): float(rng.uniform(-5, 5)) for k in picks if k in interior}
        s2 = s.with_fn(s.fn.replace(lengths, twists))
        if curve_lengths(s2, [words[j]])[0] != base[j]:
            changed += 1
    return record(4, changed == 0, f"{changed} of 100 trials changed a length (must be 0)")


def criterion_5():
    t0 = time.perf_counter()
    rep = run_shiga_boundary(N=10)
    dt = time.perf_counter() - t0
    rows_ok = all(r["sup_ratio"] <= 1.0 / (r["n"] + 1) for r in rep.rows) and len(rep.rows) == 10
    ok = rep.parameters["lbound_pass"] and rows_ok and dt < 30
    return record(5, ok, f"growth {rep.parameters['growth']}, {rep.parameters['family_size']} curves, "
                         f"worst margin {rep.worst_margin:.4f}, runtime {dt:.2f}s (< 30s)")


def criterion_6():
    families = []
    for rule in ("const:2", "wave:2:1"):
        s = make_zoo_surface(ZooRule("flute", parse_rule(rule), N=20))
        families.append((s, CurveFamily(enumerate_taut_words(s, 4))))
    worst = 0.0
    for s, fam in families:
        base = length_spectrum(s.base(), fam)
        for mu in random_multicurves(s, 50, np.random.default_rng(6)):
            _, upper = thurston_norm_bounds(mu, s)
            worst = max(worst, ls_norm(mu.scaled(1.0 / upper), fam, base))
    return record(6, worst <= 2.0, f"max ls_norm {worst:.4f} (<= 2) over 2 families x 50 multicurves")


def criterion_7():
    s = bounded_flute()
    fam = CurveFamily(enumerate_taut_words(s, 2))
    rep = run_metric_comparison(s, fam, n_pairs=100, seed=7)
    live = [r for r in rep.rows if not r["degenerate"]]
    ok = bool(live) and all(r["lower"] <= r["ratio"] <= r["upper"] for r in live)
    worst = min(min(r["ratio"] - r["lower"], r["upper"] - r["ratio"]) for r in live)
    return record(7, ok, f"{len(live)} non-degenerate pairs, worst bracket margin {worst:.4f}")


def criterion_8():
    s = bounded_flute()
    mu = default_mu(s)
    fam = CurveFamily(enumerate_taut_words(s, 2))
    u0 = length_spectrum(s, fam)
    zero = twist_earthquake(s, mu, 0.0)
    same = zero == s and np.array_equal(length_spectrum(zero, fam).values, u0.values)
    ab = twist_earthquake(twist_earthquake(s, mu, 0.3), mu, 1.7)
    c = twist_earthquake(s, mu, 0.3 + 1.7)
    additive = ab == c and np.array_equal(length_spectrum(ab, fam).values, length_spectrum(c, fam).values)
    norm = normalized_norm(u0)
    return record(8, same and additive and norm == 1.0,
                  f"t=0 identical: {same}, additive flow exact: {additive}, identity norm {norm!r}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_acceptance_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert ok, detail


if __name__ == "__main__":
    for f in CRITERIA:
        f()
    for n in sorted(RESULTS):
        print(RESULTS[n])
