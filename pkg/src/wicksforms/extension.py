"""Extending an orientable word over a group.

Starting from an orientable quadratic word ``U`` with surface graph
``G``:

1. every edge ``e`` is doubled into ``e1, e2``; the boundary circuit
   reads ``e1`` where ``U`` read ``e`` and ``e2^-1`` where it read
   ``e^-1``;
2. every vertex of degree ``d`` is replaced by ``d`` new vertices, one
   per corner, joined in a cycle by the segments of a cyclic word;
3. each edge pair gets labels ``h1, h2`` with ``h1 = x h2 y`` in the
   group, where ``x`` and ``y`` are the vertex segments at its two ends.

The new circuit visits every corner once, and its label ``F`` is the
element the extension produces.

Orientation conventions. Corner ``c`` (between sides ``c - 1`` and
``c``) owns the segment ``seg[c]``, running from ``c`` to ``sigma(c)``
where ``sigma`` turns around the vertex (see
:func:`wicksforms.surface.corner_permutation`). A vertex word is the
product of its segments along the ``sigma`` cycle starting at its
least corner. For a letter with positive occurrence at ``p`` and
negative occurrence at ``q``::

    h1 = seg[q + 1]^-1 * h2 * seg[p + 1]^-1

and ``F`` is the product over positions of ``h1`` (positive letters)
and ``h2^-1`` (negative letters). A degree-one vertex has a single
corner ``c`` with ``sigma(c) = c``, so its segment is a loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainError
from .genus import GenusWitness, verify_genus_witness
from .oracle import BoundConstants, GroupOracle
from .surface import OrientableWord, SurfaceGraph, build_surface_graph, corner_permutation
from .words import _w, format_word, free_reduce, inverse, parse_word


def _parse_witness(data) -> GenusWitness:
    if isinstance(data, GenusWitness):
        return data
    return GenusWitness(
        [parse_word(h) for h in data.get("conjugators", [])],
        [(parse_word(x), parse_word(y)) for x, y in data.get("pairs", [])],
    )


@dataclass
class ExtensionPlan:
    """Everything step 2 and step 3 need, plus the genus bookkeeping.

    ``vertex_words[v]`` lists the segments of vertex ``v`` in turn order
    from its least corner (vertices are numbered as in
    :func:`build_surface_graph`). ``witnesses[i]`` certifies that the
    vertex words of ``partition[i]``, taken in the listed order, have
    genus ``genus_targets[i] - len(partition[i]) + 1``.
    """

    base: str
    partition: list[list[int]]
    vertex_words: dict[int, list[str]]
    genus_targets: list[int]
    witnesses: list[GenusWitness]
    edge_h2: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExtensionPlan":
        try:
            base = parse_word(data["base"])
            partition = [[int(v) for v in part] for part in data["partition"]]
            vw = {int(k): [parse_word(s) for s in segs] for k, segs in data["vertex_words"].items()}
            targets = [int(g) for g in data["genus_targets"]]
            witnesses = [_parse_witness(w) for w in data.get("witnesses", [])]
            h2 = {str(k): parse_word(v) for k, v in data.get("edge_h2", {}).items()}
        except KeyError as exc:
            raise DomainError(f"plan is missing {exc.args[0]!r}") from None
        return cls(base, partition, vw, targets, witnesses, h2)

    @classmethod
    def load(cls, path: str | Path) -> "ExtensionPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "partition": self.partition,
            "vertex_words": {str(k): [format_word(s) for s in v] for k, v in sorted(self.vertex_words.items())},
            "genus_targets": self.genus_targets,
            "witnesses": [
                {"conjugators": [format_word(h) for h in w.conjugators],
                 "pairs": [[format_word(x), format_word(y)] for x, y in w.pairs]}
                for w in self.witnesses
            ],
            "edge_h2": {k: format_word(v) for k, v in sorted(self.edge_h2.items())},
        }

    @property
    def declared_genus(self) -> int:
        return sum(self.genus_targets)


@dataclass
class ExtendedGraph:
    base: OrientableWord
    graph: SurfaceGraph
    sigma: list[int]
    # circuit of the doubled graph: (letter, copy) with copy 1 forwards, 2 backwards
    doubled: list[tuple[str, int]]
    segments: dict[int, str] = field(default_factory=dict)  # corner -> segment word
    h1: dict[str, str] = field(default_factory=dict)
    h2: dict[str, str] = field(default_factory=dict)

    def doubled_word(self) -> str:
        """The doubled circuit, e.g. ``a1 b1 A2 B2`` for ``abAB``."""
        return " ".join(f"{g}{k}" if k == 1 else f"{g.upper()}{k}" for g, k in self.doubled)

    def vertex_rotation(self, vertex: int) -> list[int]:
        corners = [c for c, v in enumerate(self.graph.corner_vertex) if v == vertex]
        c0 = min(corners)
        out, c = [c0], self.sigma[c0]
        while c != c0:
            out.append(c)
            c = self.sigma[c]
        return out

    def vertex_word(self, vertex: int) -> str:
        return "".join(self.segments.get(c, "") for c in self.vertex_rotation(vertex))

    def is_hamiltonian(self) -> bool:
        """The circuit meets each extended vertex (one per corner) exactly once."""
        L = len(self.doubled)
        visited = [(i + 1) % L for i in range(L)]  # after position i the circuit sits at corner i + 1
        return sorted(visited) == list(range(L))

    def label(self) -> str:
        """Label of the circuit: ``h1`` on forward copies, ``h2^-1`` on backward ones."""
        parts = []
        for g, k in self.doubled:
            parts.append(self.h1[g] if k == 1 else inverse(self.h2[g]))
        return free_reduce("".join(parts))


def double_edges(u) -> ExtendedGraph:
    ow = u if isinstance(u, OrientableWord) else OrientableWord.of(u)
    text = ow.text
    g = build_surface_graph(ow)
    doubled = [(ch, 1) if ch.islower() else (ch.lower(), 2) for ch in text]
    return ExtendedGraph(ow, g, corner_permutation(text), doubled)


def extend_vertices(g: ExtendedGraph, plan: ExtensionPlan) -> ExtendedGraph:
    """Attach the plan's vertex words, one segment per corner."""
    nverts = g.graph.v
    for vert in range(nverts):
        rot = g.vertex_rotation(vert)
        segs = plan.vertex_words.get(vert)
        if segs is None:
            raise DomainError(f"no word for vertex {vert}")
        if len(segs) != len(rot):
            raise DomainError(f"vertex {vert} has degree {len(rot)} but its word has {len(segs)} segments")
        for c, s in zip(rot, segs):
            g.segments[c] = _w(s)
    extra = set(plan.vertex_words) - set(range(nverts))
    if extra:
        raise DomainError(f"words given for unknown vertices {sorted(extra)}")
    return g


def edge_context(g: ExtendedGraph, letter: str) -> tuple[str, str]:
    """``(x, y)`` with ``h1 = x h2 y`` for the edge pair of ``letter``."""
    p, q = g.base.letter_index[letter]
    L = len(g.doubled)
    return inverse(g.segments[(q + 1) % L]), inverse(g.segments[(p + 1) % L])


def label_edge_pairs(g: ExtendedGraph, o: GroupOracle, choice: Mapping[str, str] | None = None) -> ExtendedGraph:
    """Fix ``h2`` per edge (default trivial) and set ``h1`` to a minimal word for ``x h2 y``."""
    choice = dict(choice or {})
    for letter in g.base.letter_index:
        h2 = o.check_word(choice.get(letter, ""))
        x, y = edge_context(g, letter)
        g.h2[letter] = h2
        g.h1[letter] = o.shortlex_geodesic(x + h2 + y)
    return g


def label_pair(o: GroupOracle, x: str, h2: str, y: str) -> str:
    return o.shortlex_geodesic(_w(x) + _w(h2) + _w(y))


@dataclass
class ExtensionReport:
    F: str
    length: int
    genus: int
    graph_genus: int

    @property
    def n(self) -> int:
        return self.genus + self.graph_genus

    def to_dict(self) -> dict:
        return {"F": format_word(self.F), "length": self.length, "genus": self.genus,
                "k": self.graph_genus, "n": self.n}


def extension_report(plan: ExtensionPlan, g: ExtendedGraph) -> ExtensionReport:
    length = sum(len(s) for s in g.segments.values())
    return ExtensionReport(g.label(), length, plan.declared_genus, g.graph.genus)


def build_extension(plan: ExtensionPlan, o: GroupOracle) -> ExtendedGraph:
    g = double_edges(plan.base)
    extend_vertices(g, plan)
    return label_edge_pairs(g, o, plan.edge_h2)


@dataclass
class Verification:
    clauses: dict[str, tuple[bool, str]]

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.clauses.values())

    def failed(self) -> list[str]:
        return [name for name, (ok, _) in self.clauses.items() if not ok]

    def to_list(self) -> list[dict]:
        return [{"clause": k, "ok": ok, "detail": d} for k, (ok, d) in self.clauses.items()]


def length_cap(n: int, c: BoundConstants) -> int:
    return 2 * (12 * n - 6) * c.edge_cap


def verify_extension(plan: ExtensionPlan, g: ExtendedGraph | None, o: GroupOracle, n: int,
                     c: BoundConstants) -> tuple[Verification, ExtensionReport | None]:
    """Check a plan clause by clause.

    Clauses: ``structure`` (segments match degrees, partition is exact),
    ``hamiltonian``, ``witnesses``, ``degree`` (genus-0 singletons need
    degree at least 3), ``labels`` (minimal ``h1, h2`` with
    ``h1 = x h2 y``), ``length`` and ``genus``.
    """
    clauses: dict[str, tuple[bool, str]] = {}
    try:
        if g is None:
            g = build_extension(plan, o)
    except DomainError as exc:
        clauses["structure"] = (False, str(exc))
        return Verification(clauses), None
    nverts = g.graph.v
    flat = sorted(v for part in plan.partition for v in part)
    if flat != list(range(nverts)):
        clauses["structure"] = (False, f"partition {plan.partition} does not cover vertices 0..{nverts - 1} once")
    elif len(plan.genus_targets) != len(plan.partition) or len(plan.witnesses) != len(plan.partition):
        clauses["structure"] = (False, "need one genus target and one witness per part")
    else:
        clauses["structure"] = (True, "")
    clauses["hamiltonian"] = (g.is_hamiltonian(), "")
    if not clauses["structure"][0]:
        return Verification(clauses), None

    bad = []
    for i, (part, target, wit) in enumerate(zip(plan.partition, plan.genus_targets, plan.witnesses)):
        need = target - len(part) + 1
        words = [g.vertex_word(v) for v in part]
        if need < 0 or wit.k != need:
            bad.append(f"part {i}: witness has k={wit.k}, need {need}")
        elif not verify_genus_witness(o, words, wit):
            bad.append(f"part {i}: witness does not verify for {words}")
    clauses["witnesses"] = (not bad, "; ".join(bad))

    bad = []
    for part, target in zip(plan.partition, plan.genus_targets):
        if len(part) == 1 and target == 0:
            d = len(g.vertex_rotation(part[0]))
            if d < 3:
                bad.append(f"vertex {part[0]} of degree {d} is a genus-0 singleton")
    clauses["degree"] = (not bad, "; ".join(bad))

    bad = []
    for letter in sorted(g.base.letter_index):
        h1, h2 = g.h1[letter], g.h2[letter]
        x, y = edge_context(g, letter)
        if not o.is_minimal(h1) or not o.is_minimal(h2):
            bad.append(f"{letter}: labels not minimal")
        elif not o.equal(h1, x + h2 + y):
            bad.append(f"{letter}: h1 != x h2 y")
    clauses["labels"] = (not bad, "; ".join(bad))

    report = extension_report(plan, g)
    cap = length_cap(n, c)
    clauses["length"] = (report.length <= cap, f"{report.length} <= {cap}")
    clauses["genus"] = (report.n == n, f"{report.genus} + {report.graph_genus} = {report.n}, expected {n}")
    return Verification(clauses), report


def example_plan(h2: Mapping[str, str] | None = None) -> ExtensionPlan:
    """A concrete plan on ``abcCBA`` over the free group on ``a, b``.

    Vertices: 0 = {0} and 3 = {3} are loops, 1 = {1, 5} and 2 = {2, 4}.
    The first part pairs vertices 0 and 1 with words ``ab`` and
    ``aBAA`` whose product ``abaBAA`` is the commutator ``[abA, a]``;
    the second pairs ``ab`` and ``BA`` whose product is trivial. The
    targets are 2 and 1, so the extension has genus 3 over a planar base.
    """
    g = build_surface_graph("abcCBA")
    # vertex numbering follows the least corner: corners 0, 1, 2, 3 open vertices 0, 1, 2, 3
    assert g.corner_vertex == [0, 1, 2, 3, 2, 1]
    return ExtensionPlan(
        base="abcCBA",
        partition=[[0, 1], [2, 3]],
        vertex_words={0: ["ab"], 1: ["aB", "AA"], 2: ["a", "b"], 3: ["BA"]},
        genus_targets=[2, 1],
        witnesses=[GenusWitness(["", ""], [("abA", "a")]), GenusWitness(["", ""], [])],
        edge_h2=dict(h2 or {}),
    )


def plan_from_segments(base: str, segments: Sequence[str], partition, targets, witnesses, h2=None) -> ExtensionPlan:
    """Plan given one segment per corner (corner order) instead of per vertex."""
    g = double_edges(base)
    words: dict[int, list[str]] = {}
    for vert in range(g.graph.v):
        words[vert] = [segments[c] for c in g.vertex_rotation(vert)]
    return ExtensionPlan(parse_word(base), partition, words, targets, witnesses, dict(h2 or {}))


def theorem_length_bound(n: int, c: BoundConstants) -> int:
    return length_cap(n, c)


