"""Orientable quadratic words, Wicks forms and their surface graphs.

Write a quadratic word ``U`` of length ``L`` around an ``L``-gon, one
letter per side, and glue the two sides carrying each letter. Corner
``i`` sits between sides ``i - 1`` and ``i``. Gluing side ``p`` (letter
``x``) to side ``q`` (letter ``x^-1``) identifies corner ``p`` with corner
``q + 1`` and corner ``p + 1`` with corner ``q``. The glued corners are
the vertices of the graph, the letters are its edges, and the boundary
of the polygon becomes a circuit using every edge once in each direction.

>>> g = build_surface_graph("abAB")
>>> (g.v, g.e, g.genus)
(1, 2, 1)
>>> is_wicks_form("abcABC"), is_wicks_form("aAbB")
(True, False)
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

from .errors import DomainError, LimitError
from .words import CyclicWord, _w, is_cyclically_reduced, parse_word


def _letter_positions(w: str) -> dict[str, tuple[int, int]] | None:
    """``{letter: (pos of x, pos of x^-1)}`` or ``None`` if ``w`` is not orientable quadratic."""
    seen: dict[str, list] = {}
    for i, ch in enumerate(w):
        slot = seen.setdefault(ch.lower(), [None, None])
        k = 0 if ch.islower() else 1
        if slot[k] is not None:
            return None
        slot[k] = i
    if any(a is None or b is None for a, b in seen.values()):
        return None
    return {g: (a, b) for g, (a, b) in seen.items()}


def is_orientable_quadratic(w: str | CyclicWord) -> bool:
    """Every letter occurs exactly twice, once with each sign."""
    if isinstance(w, CyclicWord):
        w = w.representative
    w = parse_word(w)
    return _letter_positions(w) is not None


@dataclass(frozen=True)
class OrientableWord:
    word: CyclicWord
    letter_index: dict = field(compare=False, hash=False)

    @classmethod
    def of(cls, w: str | CyclicWord) -> "OrientableWord":
        if isinstance(w, CyclicWord):
            w = w.representative
        w = parse_word(w)
        pos = _letter_positions(w)
        if pos is None:
            raise DomainError(f"{w!r} is not an orientable quadratic word")
        # keep the given rotation: positions refer to it
        return cls(CyclicWord(w, is_cyclically_reduced(w)), pos)

    @property
    def text(self) -> str:
        return self.word.representative

    def __len__(self) -> int:
        return len(self.text)

    def __str__(self) -> str:
        return self.text


def _as_orientable(w) -> OrientableWord:
    return w if isinstance(w, OrientableWord) else OrientableWord.of(w)


def _redundant_pairs(w: str) -> list[tuple[str, str]]:
    L = len(w)
    if L < 4:
        return []
    where = {ch: i for i, ch in enumerate(w)}
    out = []
    for p, x in enumerate(w):
        y = w[(p + 1) % L]
        if y.lower() == x.lower():  # degenerate pair: excluded
            continue
        q = where[y.swapcase()]
        if w[(q + 1) % L] == x.swapcase():
            out.append((x, y))
    return out


def is_redundant(w) -> bool:
    """Some pair ``x, y`` (``x != y^{+-1}``) appears only as ``xy`` and ``(xy)^-1``."""
    return bool(_redundant_pairs(_as_orientable(w).text))


def is_wicks_form(w: str | CyclicWord) -> bool:
    if isinstance(w, CyclicWord):
        w = w.representative
    w = parse_word(w)
    if not w or _letter_positions(w) is None:
        return False
    return is_cyclically_reduced(w) and not _redundant_pairs(w)


# -- surface graph -------------------------------------------------------------


def _edge_ids(w: str) -> dict[str, int]:
    return {g: i + 1 for i, g in enumerate(sorted({ch.lower() for ch in w}))}


def corner_permutation(w: str) -> list[int]:
    """``sigma[c]``: the next corner around the vertex of corner ``c``.

    Arriving at corner ``c`` along side ``c - 1`` and leaving along the
    reverse of that side puts you at the corner after the partner side.
    """
    L = len(w)
    where = {ch: i for i, ch in enumerate(w)}
    return [where[w[(c - 1) % L].swapcase()] for c in range(L)]


@dataclass
class SurfaceGraph:
    word: str
    corner_vertex: list[int]  # vertex id of each polygon corner
    circuit: list[int]  # signed edge ids in order along the polygon boundary

    @property
    def v(self) -> int:
        return len(set(self.corner_vertex))

    @property
    def e(self) -> int:
        return len(self.word) // 2

    @property
    def genus(self) -> int:
        twice = 1 - self.v + self.e
        if twice % 2 or twice < 0:
            raise DomainError(f"Euler count 1 - v + e = {twice} is not a nonnegative even number")
        return twice // 2

    def degrees(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for vert in self.corner_vertex:
            out[vert] = out.get(vert, 0) + 1
        return out

    def vertex_corners(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for c, vert in enumerate(self.corner_vertex):
            out.setdefault(vert, []).append(c)
        return out

    def rotation(self) -> dict[int, list[int]]:
        """Corners of each vertex in the order the circuit turns around it.

        Only meaningful for regular graphs; for others each vertex lists
        the orbit of its least corner.
        """
        sigma = corner_permutation(self.word)
        out = {}
        for vert, corners in self.vertex_corners().items():
            c0 = corners[0]
            orbit, c = [c0], sigma[c0]
            while c != c0 and len(orbit) <= len(self.word):
                orbit.append(c)
                c = sigma[c]
            out[vert] = orbit
        return out

    def circuit_word(self) -> str:
        names = {i: g for g, i in _edge_ids(self.word).items()}
        return "".join(names[abs(i)] if i > 0 else names[abs(i)].upper() for i in self.circuit)

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "e": self.e,
            "genus": self.genus,
            "circuit": list(self.circuit),
            "regular": has_regular_eulerian_circuit(self),
        }


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def build_surface_graph(w) -> SurfaceGraph:
    ow = _as_orientable(w)
    text = ow.text
    L = len(text)
    uf = _UnionFind(L)
    for p, q in ow.letter_index.values():
        uf.union(p, (q + 1) % L)
        uf.union((p + 1) % L, q)
    roots = [uf.find(c) for c in range(L)]
    relabel: dict[int, int] = {}
    corner_vertex = [relabel.setdefault(r, len(relabel)) for r in roots]
    ids = _edge_ids(text)
    circuit = [ids[ch] if ch.islower() else -ids[ch.lower()] for ch in text]
    return SurfaceGraph(text, corner_vertex, circuit)


def has_regular_eulerian_circuit(g: SurfaceGraph) -> bool:
    """Each vertex's corners form a single turn cycle of the boundary circuit.

    At corner ``c`` the circuit enters along side ``c - 1`` and leaves
    along side ``c``; the edge ends at a vertex can be numbered
    ``e1..ed`` with ``e_i^-1 e_{i+1}`` in the circuit exactly when the
    turns at that vertex chain its corners into one cycle.
    """
    sigma = corner_permutation(g.word)
    for corners in g.vertex_corners().values():
        members = set(corners)
        if any(sigma[c] not in members for c in corners):
            return False
        c0 = corners[0]
        length, c = 1, sigma[c0]
        while c != c0:
            length += 1
            c = sigma[c]
        if length != len(corners):
            return False
    return True


# -- enumeration -----------------------------------------------------------------


@dataclass(frozen=True)
class WicksForm:
    base: OrientableWord
    genus: int

    def __str__(self) -> str:
        return self.base.text


_ABSTRACT = string.ascii_lowercase


def relabel_first_occurrence(w: str) -> str:
    """Rename letters a, b, c, ... by first occurrence, first occurrence positive."""
    names: dict[str, str] = {}
    out = []
    for ch in w:
        g = ch.lower()
        if g not in names:
            names[g] = _ABSTRACT[len(names)] if ch.islower() else _ABSTRACT[len(names)].upper()
            out.append(_ABSTRACT[len(names) - 1])
            continue
        img = names[g]
        out.append(img if ch.islower() else img.swapcase())
    return "".join(out)


def canonical_quadratic(w: str) -> str:
    """Least rotation-and-relabeling of an orientable quadratic word."""
    w = _w(w)
    if not w:
        return w
    cands = (relabel_first_occurrence(w[k:] + w[:k]) for k in range(len(w)))
    return min(cands, key=lambda s: [_key(ch) for ch in s])


def _key(ch: str) -> int:
    return 2 * _ABSTRACT.index(ch.lower()) + (0 if ch.islower() else 1)


def _word_from_matching(mate: list[int]) -> str:
    out = []
    names = {}
    for i, j in enumerate(mate):
        if i < j:
            names[i] = _ABSTRACT[len(names)]
            out.append(names[i])
        else:
            out.append(names[j].upper())
    return "".join(out)


def enumerate_wicks_forms(genus: int, max_len: int | None = None, max_nodes: int = 20_000_000) -> list[WicksForm]:
    """All Wicks forms of the given genus up to relabeling and rotation.

    Chord diagrams are built by backtracking: position ``i`` is paired
    with a later position, the earlier end getting the positive letter.
    Relabeling may invert letters, so this choice loses nothing. Partial
    diagrams are pruned on adjacent chords (free cancellation), parallel
    neighbouring chords (redundancy) and on the vertex structure: corner
    orbits that are already closed must have at least three corners and
    there can be at most ``1 + e - 2 * genus`` of them.
    """
    if genus < 1:
        raise DomainError("genus must be at least 1")
    if max_len is None:
        max_len = 12 * genus - 6
    if max_len % 2:
        raise DomainError("max_len must be even")
    found: dict[str, WicksForm] = {}
    nodes = 0
    for e in range(2 * genus, max_len // 2 + 1):
        L = 2 * e
        v_target = 1 + e - 2 * genus
        if 3 * v_target > L:
            continue
        mate = [-1] * L

        def orbits_ok() -> bool:
            # sigma(c) = mate(c - 1); count closed orbits among assigned corners
            seen = [False] * L
            closed = 0
            for c0 in range(L):
                if seen[c0]:
                    continue
                c, size = c0, 0
                path = []
                while True:
                    path.append(c)
                    m = mate[(c - 1) % L]
                    if m == -1:
                        break
                    c = m
                    size += 1
                    if c == c0:
                        if size < 3:
                            return False
                        closed += 1
                        if closed > v_target:
                            return False
                        break
                    if seen[c] or size > L:
                        break
                for x in path:
                    seen[x] = True
            return True

        def parallel(i: int, j: int) -> bool:
            # chord {i, j} next to a chord {i+1, j-1} or {i-1, j+1}
            for a, b in (((i + 1) % L, (j - 1) % L), ((i - 1) % L, (j + 1) % L)):
                if mate[a] == b and a != j and a != i:
                    return True
            return False

        def place(i: int):
            nonlocal nodes
            while i < L and mate[i] != -1:
                i += 1
            if i == L:
                w = _word_from_matching(mate)
                g = build_surface_graph(w)
                if g.v == v_target and is_wicks_form(w) and min(g.degrees().values()) >= 3:
                    key = canonical_quadratic(w)
                    if key not in found:
                        found[key] = WicksForm(OrientableWord.of(key), genus)
                return
            for j in range(i + 2, L):
                if mate[j] != -1 or (i == 0 and j == L - 1):
                    continue
                nodes += 1
                if nodes > max_nodes:
                    raise LimitError(f"enumeration exceeded {max_nodes} search nodes", "max_nodes", max_nodes)
                mate[i], mate[j] = j, i
                if not parallel(i, j) and orbits_ok():
                    place(i + 1)
                mate[i] = mate[j] = -1

        place(0)
    return sorted(found.values(), key=lambda f: (len(f.base), [_key(ch) for ch in f.base.text]))
