"""Generators for flute and ladder surfaces, canonical curves and Shiga-type
families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .holonomy import CompiledFamily, curve_lengths
from .pants import (Cuff, CurveWord, FNCoordinates, MarkedSurface, MulticurveLamination,
                    PantsGraph, Segment, Slot, SurfaceSpecError, resolve_path)

K_CAP = 3

Rule = Callable[[int], float]


def parse_rule(text: str) -> Rule:
    """Rule vocabulary: ``const:x``, ``harmonic``, ``exp:c``, ``log-shrink``,
    ``wave:a:b`` (a + b sin n)."""
    head, _, arg = str(text).partition(":")
    try:
        if head == "const":
            x = float(arg)
            return lambda n: x
        if head == "harmonic":
            return lambda n: 1.0 / n
        if head == "exp":
            c = float(arg)
            return lambda n: math.exp(c * n)
        if head == "log-shrink":
            return lambda n: 1.0 / math.log(n + 2)
        if head == "wave":
            a, b = (float(v) for v in arg.split(":"))
            return lambda n: a + b * math.sin(n)
    except ValueError:
        pass
    raise SurfaceSpecError(f"unknown rule {text!r}")


@dataclass(frozen=True)
class ZooRule:
    kind: str
    cuff_rule: Rule
    twist_rule: Rule = lambda n: 0.0
    N: int = 20
    free_rule: Rule | None = None
    names: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in ("flute", "ladder"):
            raise SurfaceSpecError(f"unknown zoo kind {self.kind!r}")
        if self.N < 2:
            raise SurfaceSpecError("zoo rule needs N >= 2")

    @classmethod
    def from_doc(cls, doc: dict) -> "ZooRule":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise SurfaceSpecError(f"malformed rule {doc!r}")
        free = doc.get("free")
        return cls(kind=doc["kind"], cuff_rule=parse_rule(doc.get("cuff", "const:2")),
                   twist_rule=parse_rule(doc.get("twist", "const:0")), N=int(doc.get("N", 20)),
                   free_rule=parse_rule(free) if free else None,
                   names={k: doc[k] for k in ("cuff", "twist", "free") if k in doc})


def _flute(rule: ZooRule):
    n = rule.N
    pants = [f"P{i}" for i in range(1, n + 1)]
    cuffs, lengths, twists = [], {}, {}
    free_rule = rule.free_rule or rule.cuff_rule
    for i in range(0, n + 1):
        lab = f"a{i}"
        if i == 0:
            cuffs.append(Cuff(lab, Slot("P1", 0)))
        elif i == n:
            cuffs.append(Cuff(lab, Slot(f"P{n}", 1)))
        else:
            cuffs.append(Cuff(lab, Slot(f"P{i}", 1), Slot(f"P{i + 1}", 0)))
            twists[lab] = float(rule.twist_rule(i))
        lengths[lab] = float(rule.cuff_rule(max(i, 1)))
    for i in range(1, n + 1):
        cuffs.append(Cuff(f"b{i}", Slot(f"P{i}", 2)))
        lengths[f"b{i}"] = float(free_rule(i))
    return pants, cuffs, lengths, twists


def _ladder(rule: ZooRule):
    n = rule.N
    pants = [f"P{i}" for i in range(1, n + 1)]
    gl = []  # (end_a, end_b or None)
    gl.append((Slot("P1", 0), None))
    for i in range(1, n + 1, 2):
        if i + 1 <= n:
            gl.append((Slot(f"P{i}", 1), Slot(f"P{i + 1}", 1)))
            gl.append((Slot(f"P{i}", 2), Slot(f"P{i + 1}", 2)))
            if i + 2 <= n:
                gl.append((Slot(f"P{i + 1}", 0), Slot(f"P{i + 2}", 0)))
            else:
                gl.append((Slot(f"P{i + 1}", 0), None))
        else:
            gl.append((Slot(f"P{i}", 1), None))
            gl.append((Slot(f"P{i}", 2), None))
    cuffs, lengths, twists = [], {}, {}
    free_rule = rule.free_rule or rule.cuff_rule
    for k, (a, b) in enumerate(gl, start=1):
        lab = f"a{k}"
        cuffs.append(Cuff(lab, a, b))
        lengths[lab] = float((rule.cuff_rule if b is not None else free_rule)(k))
        if b is not None:
            twists[lab] = float(rule.twist_rule(k))
    return pants, cuffs, lengths, twists


def make_zoo_surface(rule: ZooRule) -> MarkedSurface:
    """Flute: chain P1..PN, pants Pi has slots (a{i-1}, a{i}, b{i}); a0, aN and
    the b's are free.  Ladder: pairs of pants glued along two cuffs, pairs
    linked by single cuffs, cuffs a1, a2, ... along the chain."""
    build = _flute if rule.kind == "flute" else _ladder
    pants, cuffs, lengths, twists = build(rule)
    for k, v in lengths.items():
        if not (v > 0) or not math.isfinite(v):
            raise SurfaceSpecError(f"invalid rule: nonpositive length {v} on {k}")
    graph = PantsGraph(pants, cuffs)
    fn = FNCoordinates(lengths, twists)
    return MarkedSurface(graph, fn, fn)


def length_range(s: MarkedSurface, interior_only: bool = False) -> tuple[float, float]:
    """(min, max) cuff length on the truncation: the probe for (m, M)."""
    labels = s.graph.interior_labels() if interior_only else s.graph.labels()
    vals = [s.base_fn.length(k) for k in labels]
    return min(vals), max(vals)


def is_bounded(s: MarkedSurface, M: float) -> bool:
    lo, hi = length_range(s)
    return 1.0 / M <= lo and hi <= M


# ------------------------------------------------------------ curves

def companion_curve(s: MarkedSurface, label: str) -> CurveWord:
    """Curve meeting ``label`` twice (two distinct pants) or once (handle),
    with zero windings."""
    c = s.graph.cuff(label)
    if c.free:
        raise SurfaceSpecError(f"{label} is a free boundary cuff")
    if c.end_a.node == c.end_b.node:
        return CurveWord.path([Segment(label, label, 0)])
    return CurveWord.path([Segment(label, label, 0), Segment(label, label, 0)])


star_curve = companion_curve


def _transitions(graph: PantsGraph, node: str, entry: int):
    entry_label = graph.label_at(node, entry)
    self_glued = len(graph.slots_with(node, entry_label)) == 2
    for ex in range(3):
        c = graph.cuff_at(Slot(node, ex))
        if c.free:
            continue
        if ex == entry and self_glued:
            continue
        yield ex, c


def enumerate_walks(s: MarkedSurface, max_segments: int, max_winding: int = K_CAP):
    """Words and their resolved steps: all cuffs plus every primitive closed
    walk with 1..max_segments segments and windings in
    [-max_winding, max_winding], one per rotation class, deterministic order."""
    graph = s.graph
    order = {p: i for i, p in enumerate(graph.pants)}
    walks: set[tuple] = set()
    windings = range(-max_winding, max_winding + 1)

    def extend(path, node, entry, start):
        if path and (node, entry) == start:
            n = len(path)
            # the closing winding sits in front of the first arc
            if (path[0][2] == path[0][3] or path[-1][4] % 2 == 0) and \
                    not any(n % d == 0 and path == path[d:] + path[:d] for d in range(1, n)):
                walks.add(min(tuple(path[i:] + path[:i]) for i in range(n)))
        if len(path) == max_segments:
            return
        for ex, c in _transitions(graph, node, entry):
            if path and ex != entry and path[-1][4] % 2:
                continue  # arcs between distinct cuffs start at a seam foot
            nxt = c.other(Slot(node, ex))
            if order[nxt.node] < order[start[0]]:
                continue  # the rotation starting at the lowest pants covers it
            for k in windings:
                path.append((order[node], node, entry, ex, k))
                extend(path, nxt.node, nxt.index, start)
                path.pop()

    for p in graph.pants:
        for i in range(3):
            if not graph.cuff_at(Slot(p, i)).free:
                extend([], p, i, (p, i))

    words = [CurveWord.of_cuff(k) for k in graph.labels()]
    steps: list[tuple] = [() for _ in words]
    for key in sorted(walks, key=lambda w: (len(w), w)):
        target = {tuple((nd, en, ex, k) for _, nd, en, ex, k in key[i:] + key[:i])
                  for i in range(len(key))}
        # labels may place a word elsewhere; use a rotation that names this walk
        for i in range(len(key)):
            rot = key[i:] + key[:i]
            word = CurveWord.path([Segment(graph.label_at(nd, en), graph.label_at(nd, ex), k)
                                   for _, nd, en, ex, k in rot])
            st = resolve_path(graph, word)
            if tuple(tuple(x)[:4] for x in st) in target:
                words.append(word)
                steps.append(st)
                break
    return words, steps


def enumerate_taut_words(s: MarkedSurface, max_segments: int, max_winding: int = K_CAP) -> list[CurveWord]:
    return enumerate_walks(s, max_segments, max_winding)[0]


# ------------------------------------------------------------ Shiga family

@dataclass(frozen=True)
class ShigaFamily:
    surface: MarkedSurface
    gammas: tuple[CurveWord, ...]
    gamma_lengths: tuple[float, ...]
    betas: tuple[MulticurveLamination, ...]
    beta_star: MulticurveLamination
    c: float | None = None


def shiga_rule(N: int, growth: Rule, spread: float = 2.0) -> ZooRule:
    """Flute whose interior cuffs a_k have length growth(k); free boundary b_k
    gets growth(k + spread), which keeps every crossing of a_k expensive."""
    return ZooRule("flute", cuff_rule=lambda n: growth(n), N=N + 1,
                   free_rule=lambda n: growth(n + spread))


def make_shiga_family(N: int, growth: Rule, c: float | None = None, spread: float = 2.0) -> ShigaFamily:
    """The curves gamma_k are the interior cuffs a_1..a_N of the flute; beta_n
    carries weight l(gamma_k) on gamma_k for k <= n and beta_* for all k <= N."""
    vals = [growth(n) for n in range(1, N + 2)]
    if any(not (v > 0) or not math.isfinite(v) for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
        raise SurfaceSpecError("invalid growth: must be positive and increasing")
    s = make_zoo_surface(shiga_rule(N, growth, spread))
    gammas = tuple(CurveWord.of_cuff(f"a{k}") for k in range(1, N + 1))
    glen = tuple(s.base_fn.length(g.cuff) for g in gammas)
    betas = tuple(MulticurveLamination({g.cuff: glen[k] for k, g in enumerate(gammas[:n])})
                  for n in range(1, N + 1))
    return ShigaFamily(s, gammas, glen, betas, betas[-1], c)


def check_lbound(fam: ShigaFamily, curves: list[CurveWord], lengths=None) -> dict:
    """Check l(delta) >= sum_k k l(gamma_k) i(gamma_k, delta) on ``curves``.
    ``lengths`` may carry precomputed base lengths of ``curves``."""
    if lengths is None:
        lengths = curve_lengths(fam.surface.base(), curves)
    rows = []
    for word, length in zip(curves, lengths):
        cross = word.crossings()
        rhs = sum((k + 1) * fam.gamma_lengths[k] * cross.get(g.cuff, 0)
                  for k, g in enumerate(fam.gammas))
        rows.append({"curve": str(word), "length": float(length), "rhs": float(rhs),
                     "margin": float(length - rhs), "pass": bool(length >= rhs)})
    worst = min((r["margin"] for r in rows), default=0.0)
    return {"c": fam.c, "rows": rows, "worst_margin": worst, "pass": all(r["pass"] for r in rows)}


def sweep_growth_constant(N: int = 10, max_segments: int = 4, max_winding: int = K_CAP,
                          c0: float = 0.25, step: float = 0.25, c_max: float = 6.0, walks=None):
    """Smallest c on the grid c0, c0+step, ... for which exp:c passes the
    finite lbound check.  Returns (c, family, report).  ``walks`` may carry
    the (words, steps) of an earlier enumeration on the same flute."""
    c = c0
    compiled = None
    if walks is not None:
        curves, steps = walks
    while c <= c_max + 1e-12:
        growth = (lambda cc: (lambda n: math.exp(cc * n)))(c)
        fam = make_shiga_family(N, growth, c=c)
        if compiled is None:
            if walks is None:
                curves, steps = enumerate_walks(fam.surface, max_segments, max_winding)
            compiled = CompiledFamily(fam.surface.graph, curves, steps)
        rep = check_lbound(fam, curves, compiled.lengths(fam.surface.base()))
        if rep["pass"]:
            return c, fam, rep
        c = round(c + step, 12)
    raise RuntimeError(f"no growth constant up to {c_max} passes the lbound check")

