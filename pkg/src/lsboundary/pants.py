"""Pants decompositions, Fenchel-Nielsen data, curve words and multicurves.

A surface is a finite truncation of a pants decomposition: a list of pants
nodes with three slots each, and a list of cuffs.  A cuff either glues two
slots together (possibly two slots of the same node) or marks a slot as free
boundary.  Slots are numbered 0, 1, 2 internally and 1, 2, 3 in documents.
"""
from __future__ import annotations

import functools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple


class SurfaceSpecError(ValueError):
    pass


class CurveWordError(ValueError):
    pass


class Slot(NamedTuple):
    node: str
    index: int

    def __str__(self):
        return f"{self.node}.{self.index + 1}"


@dataclass(frozen=True)
class Cuff:
    label: str
    end_a: Slot
    end_b: Slot | None = None

    @property
    def free(self) -> bool:
        return self.end_b is None

    def other(self, slot: Slot) -> Slot:
        if self.end_b is None:
            raise CurveWordError(f"cuff {self.label} is free boundary")
        if slot == self.end_a:
            return self.end_b
        if slot == self.end_b:
            return self.end_a
        raise KeyError(slot)


class PantsGraph:
    """Combinatorial pants decomposition (immutable after construction)."""

    def __init__(self, pants: Iterable[str], cuffs: Iterable[Cuff]):
        self.pants = tuple(pants)
        self.cuffs = tuple(cuffs)
        if len(set(self.pants)) != len(self.pants):
            raise SurfaceSpecError("duplicate pants id")
        self._cuff = {}
        self._slot = {}
        for c in self.cuffs:
            if c.label in self._cuff:
                raise SurfaceSpecError(f"duplicate cuff id {c.label}")
            self._cuff[c.label] = c
            for end in (c.end_a, c.end_b):
                if end is None:
                    continue
                if end.node not in self.pants or end.index not in (0, 1, 2):
                    raise SurfaceSpecError(f"dangling slot {end} on cuff {c.label}")
                if end in self._slot:
                    raise SurfaceSpecError(f"slot {end} used by two cuffs")
                self._slot[end] = c.label
            if c.end_a == c.end_b:
                raise SurfaceSpecError(f"cuff {c.label} glues a slot to itself")
        for p in self.pants:
            for i in range(3):
                if Slot(p, i) not in self._slot:
                    raise SurfaceSpecError(f"dangling slot {p}.{i + 1}: no cuff")
        if not self._connected():
            raise SurfaceSpecError("pants graph is not connected")
        order = {p: i for i, p in enumerate(self.pants)}
        self._node_slots: dict[tuple[str, str], list[int]] = {}
        for slot in sorted(self._slot, key=lambda sl: (order[sl.node], sl.index)):
            self._node_slots.setdefault((slot.node, self._slot[slot]), []).append(slot.index)
        self._ends = {c.label: sorted((e for e in (c.end_a, c.end_b) if e is not None),
                                      key=lambda sl: (order[sl.node], sl.index)) for c in self.cuffs}
        self._hash = hash((self.pants, self.cuffs))

    def _connected(self) -> bool:
        if not self.pants:
            return False
        seen = {self.pants[0]}
        stack = [self.pants[0]]
        while stack:
            p = stack.pop()
            for i in range(3):
                c = self.cuff_at(Slot(p, i))
                if not c.free:
                    q = c.other(Slot(p, i)).node
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
        return len(seen) == len(self.pants)

    def cuff(self, label: str) -> Cuff:
        try:
            return self._cuff[label]
        except KeyError:
            raise CurveWordError(f"unknown cuff label {label!r}") from None

    def cuff_at(self, slot: Slot) -> Cuff:
        return self._cuff[self._slot[slot]]

    def label_at(self, node: str, index: int) -> str:
        return self._slot[Slot(node, index)]

    def labels(self) -> list[str]:
        return [c.label for c in self.cuffs]

    def interior_labels(self) -> list[str]:
        return [c.label for c in self.cuffs if not c.free]

    def pants_of(self, label: str) -> tuple[str, ...]:
        c = self.cuff(label)
        nodes = [c.end_a.node] if c.free else [c.end_a.node, c.end_b.node]
        return tuple(dict.fromkeys(nodes))

    def slots_with(self, node: str, label: str) -> list[int]:
        return self._node_slots.get((node, label), [])

    def ends_of(self, label: str) -> list[Slot]:
        """Slots carrying ``label``, in graph order."""
        self.cuff(label)
        return self._ends[label]

    def __eq__(self, other):
        return isinstance(other, PantsGraph) and (self.pants, self.cuffs) == (other.pants, other.cuffs)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PantsGraph({len(self.pants)} pants, {len(self.cuffs)} cuffs)"


@dataclass(frozen=True)
class FNCoordinates:
    """Per-cuff lengths (all cuffs) and twists (interior cuffs only)."""

    lengths: Mapping[str, float]
    twists: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "lengths", MappingProxyType(dict(self.lengths)))
        object.__setattr__(self, "twists", MappingProxyType(dict(self.twists)))
        for k, v in self.lengths.items():
            if not (v > 0) or not math.isfinite(v):
                raise SurfaceSpecError(f"nonpositive length {v!r} on cuff {k}")
        for k, v in self.twists.items():
            if not math.isfinite(v):
                raise SurfaceSpecError(f"non-finite twist on cuff {k}")

    def length(self, label: str) -> float:
        return self.lengths[label]

    def twist(self, label: str) -> float:
        return self.twists.get(label, 0.0)

    def replace(self, lengths=None, twists=None) -> "FNCoordinates":
        ln = dict(self.lengths)
        tw = dict(self.twists)
        ln.update(lengths or {})
        tw.update(twists or {})
        return FNCoordinates(ln, tw)

    def __eq__(self, other):
        return (isinstance(other, FNCoordinates) and dict(self.lengths) == dict(other.lengths)
                and dict(self.twists) == dict(other.twists))

    def __hash__(self):
        return hash((tuple(sorted(self.lengths.items())), tuple(sorted(self.twists.items()))))


@dataclass(frozen=True)
class MulticurveLamination:
    """Weighted multicurve supported on cuffs; zero weights are dropped."""

    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        w = {}
        for k, v in dict(self.weights).items():
            v = float(v)
            if v < 0 or not math.isfinite(v):
                raise ValueError(f"weight on {k} must be finite and >= 0, got {v}")
            if v > 0:
                w[k] = v
        object.__setattr__(self, "weights", MappingProxyType(w))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.weights)

    def weight(self, label: str) -> float:
        return self.weights.get(label, 0.0)

    def scaled(self, t: float) -> "MulticurveLamination":
        return MulticurveLamination({k: t * v for k, v in self.weights.items()})

    def __add__(self, other: "MulticurveLamination") -> "MulticurveLamination":
        w = dict(self.weights)
        for k, v in other.weights.items():
            w[k] = w.get(k, 0.0) + v
        return MulticurveLamination(w)

    def __eq__(self, other):
        return isinstance(other, MulticurveLamination) and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash(tuple(sorted(self.weights.items())))

    def check(self, graph: PantsGraph) -> None:
        for k in self.weights:
            graph.cuff(k)

    def to_text(self) -> str:
        return "".join(f"{k} {v!r}\n" for k, v in sorted(self.weights.items()))


@dataclass(frozen=True)
class MarkedSurface:
    """A point of the (truncated) Teichmueller space: graph, FN data, base X0.

    ``quakes`` records cuff-supported earthquakes applied on top of ``fn0`` as
    ``(lamination, t)`` pairs; repeated flows along one lamination merge their
    times so that composition is exact.
    """

    graph: PantsGraph
    fn0: FNCoordinates
    base_fn: FNCoordinates
    quakes: tuple[tuple[MulticurveLamination, float], ...] = ()

    def __post_init__(self):
        labels = set(self.graph.labels())
        interior = set(self.graph.interior_labels())
        for name, fn in (("fn", self.fn0), ("base", self.base_fn)):
            if set(fn.lengths) != labels:
                missing = labels ^ set(fn.lengths)
                raise SurfaceSpecError(f"{name} lengths do not match cuffs: {sorted(missing)}")
            extra = set(fn.twists) - interior
            if extra:
                raise SurfaceSpecError(f"{name} twists on free cuffs {sorted(extra)}")

    @property
    def fn(self) -> FNCoordinates:
        if not self.quakes:
            return self.fn0
        tw = {k: self.fn0.twist(k) for k in self.graph.interior_labels()}
        for mu, t in self.quakes:
            for k, w in mu.weights.items():
                tw[k] = tw[k] + t * w
        return FNCoordinates(self.fn0.lengths, tw)

    def base(self) -> "MarkedSurface":
        return MarkedSurface(self.graph, self.base_fn, self.base_fn)

    def with_fn(self, fn: FNCoordinates) -> "MarkedSurface":
        return MarkedSurface(self.graph, fn, self.base_fn)


class Segment(NamedTuple):
    enter: str
    exit: str
    winding: int = 0

    def __str__(self):
        return f"{self.enter} {self.exit} {self.winding:+d}"


@dataclass(frozen=True)
class CurveWord:
    """A cuff, or a cyclic list of pants-traversal segments.

    Segment ``(enter, exit, k)`` runs through one pants from ``enter`` to
    ``exit`` and then crosses ``exit`` with ``k`` signed half-twists around
    it.  An arc between two distinct cuffs starts at a fixed seam foot, so
    the winding in front of it must be even.  An arc leaving through the cuff
    it entered by can go round either of the two other cuffs; an even winding
    in front of it selects the cuff after the entry slot, an odd one the
    cuff before.
    """

    cuff: str | None = None
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        if (self.cuff is None) == (not self.segments):
            if self.cuff is None:
                raise CurveWordError("empty curve word")
            raise CurveWordError("curve word is both a cuff and a path")
        segs = tuple(Segment(s[0], s[1], int(s[2])) for s in self.segments)
        object.__setattr__(self, "segments", segs)
        n = len(segs)
        for i, s in enumerate(segs):
            if s.exit != segs[(i + 1) % n].enter:
                raise CurveWordError(
                    f"segment {i} exits {s.exit} but segment {(i + 1) % n} enters {segs[(i + 1) % n].enter}")

    @classmethod
    def of_cuff(cls, label: str) -> "CurveWord":
        return cls(cuff=label)

    @classmethod
    def path(cls, segments) -> "CurveWord":
        return cls(segments=tuple(segments))

    @property
    def is_cuff(self) -> bool:
        return self.cuff is not None

    def rotate(self, k: int) -> "CurveWord":
        if self.is_cuff:
            return self
        k %= len(self.segments)
        return CurveWord(segments=self.segments[k:] + self.segments[:k])

    def reversed(self) -> "CurveWord":
        """Reverse traversal order; each crossing keeps its winding.

        Exact for words without same-slot arcs only. A same-slot arc
        reversed goes around the other cuff, so the reversed curve needs
        shifted windings that depend on the word.
        """
        if self.is_cuff:
            return self
        s = self.segments
        n = len(s)
        out = [Segment(s[i].exit, s[i].enter, s[(i - 1) % n].winding) for i in range(n - 1, -1, -1)]
        return CurveWord(segments=tuple(out))

    def crossings(self) -> Counter:
        if self.is_cuff:
            return Counter()
        return Counter(s.exit for s in self.segments)

    def has_same_slot_arcs(self) -> bool:
        return any(s.enter == s.exit for s in self.segments)

    def canonical(self) -> "CurveWord":
        """Least rotation, used for de-duplication."""
        if self.is_cuff:
            return self
        rots = [self.rotate(k) for k in range(len(self.segments))]
        return min(rots, key=lambda w: w.segments)

    def is_proper_power(self) -> bool:
        n = len(self.segments)
        return any(n % d == 0 and self.segments == self.segments[d:] + self.segments[:d]
                   for d in range(1, n))

    def __str__(self):
        if self.is_cuff:
            return f"cuff {self.cuff}"
        return "path " + " | ".join(str(s) for s in self.segments)


class Step(NamedTuple):
    """One resolved segment: pants node, entry slot, exit slot, winding in
    half-twists, and for same-slot arcs the slot of the cuff it goes round
    (-1 otherwise)."""
    node: str
    entry: int
    exit: int
    winding: int
    around: int = -1


@functools.lru_cache(maxsize=1 << 18)
def resolve_path(graph: PantsGraph, word: CurveWord) -> tuple[Step, ...]:
    """Locate each segment of a path word in the pants graph.

    The start node is the first candidate (in graph order) from which the
    traversal closes up.  When a node carries the exit label on two slots
    (a self-glued cuff), the slot different from the entry slot is used.
    """
    if word.is_cuff:
        graph.cuff(word.cuff)
        return ()
    segs = word.segments
    for s in segs:
        for lab in (s.enter, s.exit):
            if graph.cuff(lab).free:
                raise CurveWordError(f"curve crosses free boundary {lab}")
    first = segs[0]
    errors = []
    for node, entry in graph.ends_of(first.enter):
        try:
            return _walk(graph, segs, node, entry)
        except CurveWordError as exc:
            errors.append(str(exc))
    detail = errors[0] if errors else f"no pants bounded by {first.enter}"
    raise CurveWordError(f"adjacency violation in {word}: {detail}")


def _walk(graph, segs, node, entry):
    start = (node, entry)
    out = []
    for s in segs:
        exits = graph.slots_with(node, s.exit)
        if not exits:
            raise CurveWordError(f"{s.exit} does not bound the pants {node} entered through {s.enter}")
        ex = [i for i in exits if i != entry] or exits
        ex = ex[0]
        out.append(Step(node, entry, ex, s.winding))
        nxt = graph.cuff_at(Slot(node, ex)).other(Slot(node, ex))
        node, entry = nxt.node, nxt.index
    if (node, entry) != start:
        raise CurveWordError("word does not close up")
    n = len(out)
    for i, st in enumerate(out):
        odd = out[i - 1].winding % 2 == 1
        if st.entry != st.exit:
            if odd:
                raise CurveWordError(f"odd winding {out[i - 1].winding:+d} in front of the arc "
                                     f"{segs[i].enter} -> {segs[i].exit}")
        else:
            out[i] = st._replace(around=(st.entry + (2 if odd else 1)) % 3)
    return tuple(out)


def support_of(word: CurveWord, graph: PantsGraph) -> tuple[frozenset[str], frozenset[str]]:
    """(pants traversed, cuffs crossed or coinciding) for a curve word."""
    if word.is_cuff:
        return frozenset(graph.pants_of(word.cuff)), frozenset([word.cuff])
    steps = resolve_path(graph, word)
    return frozenset(s.node for s in steps), frozenset(s.exit for s in word.segments)


def dependent_cuffs(word: CurveWord, graph: PantsGraph) -> frozenset[str]:
    """Cuffs whose FN data can influence the length of ``word``."""
    if word.is_cuff:
        return frozenset([word.cuff])
    nodes, _ = support_of(word, graph)
    return frozenset(graph.label_at(p, i) for p in nodes for i in range(3))


# ---------------------------------------------------------------- documents

def _parse_slot(text, where):
    if not isinstance(text, str) or "." not in text:
        raise SurfaceSpecError(f"malformed slot reference {text!r} in {where}")
    node, _, idx = text.rpartition(".")
    try:
        i = int(idx)
    except ValueError:
        raise SurfaceSpecError(f"malformed slot reference {text!r} in {where}") from None
    if i not in (1, 2, 3):
        raise SurfaceSpecError(f"dangling slot {text!r} in {where}: slots are 1..3")
    return Slot(node, i - 1)


def _num(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SurfaceSpecError(f"malformed document: {what} must be a number")
    return float(v)


def parse_surface_spec(text: str | Mapping) -> MarkedSurface:
    """Parse a surface document (JSON text or an already-decoded mapping)."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SurfaceSpecError(f"malformed document: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SurfaceSpecError("malformed document: top level must be an object")
    if "rule" in doc and "pants" not in doc:
        from .zoo import ZooRule, make_zoo_surface
        return make_zoo_surface(ZooRule.from_doc(doc["rule"]))
    try:
        pants = doc["pants"]
        cuff_docs = doc["cuffs"]
    except KeyError as exc:
        raise SurfaceSpecError(f"malformed document: missing key {exc}") from None
    if not isinstance(pants, list) or not isinstance(cuff_docs, list):
        raise SurfaceSpecError("malformed document: pants and cuffs must be lists")
    cuffs, lengths, twists = [], {}, {}
    for cd in cuff_docs:
        if not isinstance(cd, dict) or "id" not in cd or "end_a" not in cd or "length" not in cd:
            raise SurfaceSpecError(f"malformed cuff entry {cd!r}")
        cid = str(cd["id"])
        a = _parse_slot(cd["end_a"], cid)
        eb = cd.get("end_b", "free")
        b = None if eb == "free" else _parse_slot(eb, cid)
        cuffs.append(Cuff(cid, a, b))
        length = _num(cd["length"], f"length of {cid}")
        if not length > 0:
            raise SurfaceSpecError(f"nonpositive length {length} on cuff {cid}")
        lengths[cid] = length
        if b is not None:
            twists[cid] = _num(cd.get("twist", 0.0), f"twist of {cid}")
        elif cd.get("twist", 0.0) != 0.0:
            raise SurfaceSpecError(f"free cuff {cid} cannot carry a twist")
    graph = PantsGraph([str(p) for p in pants], cuffs)
    fn = FNCoordinates(lengths, twists)
    base = fn
    if "base" in doc:
        bl, bt = dict(lengths), dict(twists)
        for cid, entry in doc["base"].items():
            graph.cuff(cid)
            if "length" in entry:
                bl[cid] = _num(entry["length"], f"base length of {cid}")
            if "twist" in entry:
                bt[cid] = _num(entry["twist"], f"base twist of {cid}")
        base = FNCoordinates(bl, bt)
    return MarkedSurface(graph, fn, base)


def surface_to_doc(s: MarkedSurface) -> dict:
    fn = s.fn
    cuffs = []
    for c in s.graph.cuffs:
        d = {"id": c.label, "end_a": str(c.end_a), "end_b": "free" if c.free else str(c.end_b),
             "length": fn.length(c.label)}
        if not c.free:
            d["twist"] = fn.twist(c.label)
        cuffs.append(d)
    doc = {"pants": list(s.graph.pants), "cuffs": cuffs}
    if s.base_fn != fn:
        doc["base"] = {c.label: ({"length": s.base_fn.length(c.label)} if c.free else
                                 {"length": s.base_fn.length(c.label), "twist": s.base_fn.twist(c.label)})
                       for c in s.graph.cuffs}
    return doc


def surface_to_json(s: MarkedSurface) -> str:
    return json.dumps(surface_to_doc(s), indent=2)


def parse_curve_word(line: str, graph: PantsGraph | None = None) -> CurveWord:
    toks = line.split()
    if not toks:
        raise CurveWordError("empty curve line")
    if toks[0] == "cuff":
        if len(toks) != 2:
            raise CurveWordError(f"malformed cuff line {line!r}")
        word = CurveWord.of_cuff(toks[1])
    elif toks[0] == "path":
        body = " ".join(toks[1:]).strip().rstrip("|")
        segs = []
        for part in body.split("|"):
            f = part.split()
            if len(f) != 3:
                raise CurveWordError(f"malformed segment {part.strip()!r}")
            try:
                k = int(f[2])
            except ValueError:
                raise CurveWordError(f"malformed winding {f[2]!r}") from None
            segs.append(Segment(f[0], f[1], k))
        word = CurveWord.path(segs)
    else:
        raise CurveWordError(f"unknown curve keyword {toks[0]!r}")
    if graph is not None:
        resolve_path(graph, word) if not word.is_cuff else graph.cuff(word.cuff)
    return word


def parse_curve_document(text: str, graph: PantsGraph | None = None) -> list[CurveWord]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_curve_word(line, graph))
    return out


def parse_lamination(text: str, graph: PantsGraph | None = None) -> MulticurveLamination:
    w = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        f = line.split()
        if len(f) != 2:
            raise ValueError(f"malformed lamination line {raw!r}")
        w[f[0]] = w.get(f[0], 0.0) + float(f[1])
    mu = MulticurveLamination(w)
    if graph is not None:
        mu.check(graph)
    return mu
