"""Word problem, geodesics, balls and conjugacy for concrete groups.

Two backends are provided. ``free`` is the free group on the declared
generators and is exact. ``dehn`` runs Dehn's algorithm on the
symmetrised relator set; it decides the word problem only when the
presentation really is a Dehn presentation (for example a C'(1/6)
small cancellation presentation), and every result produced through it
carries the ``dehn-presentation-soundness`` assumption.

Balls are built breadth first in shortlex order, so the first word met
for each element is its shortlex-least geodesic representative.
Elements are bucketed by exact homomorphic invariants (abelianisation
and free quotients obtained by killing generators) and equality inside
a bucket is settled by the word problem solver.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, LimitError
from .words import Alphabet, _w, free_reduce, inverse, is_cyclically_reduced, parse_word

DEFAULT_MAX_RADIUS = 8
DEFAULT_MAX_BALL = 10**6
DEHN_ASSUMPTION = "dehn-presentation-soundness"


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...] = ()
    backend: str = "free"
    delta: int | None = None

    def __post_init__(self):
        if self.backend not in ("free", "dehn"):
            raise DomainError(f"unknown backend {self.backend!r}")
        alpha = Alphabet(self.generators)
        for r in self.relators:
            if not alpha.contains(r):
                raise DomainError(f"relator {r!r} uses letters outside the generators")
            if not is_cyclically_reduced(r) or not r:
                raise DomainError(f"relator {r!r} is not cyclically reduced")
        if self.backend == "free" and self.relators:
            raise DomainError("the free backend takes no relators")
        if self.delta is not None and self.delta < 0:
            raise DomainError("declared delta must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        try:
            gens = tuple(data["generators"])
        except KeyError:
            raise DomainError("presentation needs a 'generators' list") from None
        rels = tuple(parse_word(r) for r in data.get("relators", []))
        return cls(gens, rels, data.get("backend", "free" if not rels else "dehn"), data.get("delta"))

    @classmethod
    def load(cls, path: str | Path) -> "Presentation":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        out = {"generators": list(self.generators), "relators": list(self.relators), "backend": self.backend}
        if self.delta is not None:
            out["delta"] = self.delta
        return out


def free_group(generators: str | Sequence[str] = "ab") -> "GroupOracle":
    return GroupOracle(Presentation(tuple(generators)))


def surface_group(genus: int = 2) -> "GroupOracle":
    """Fundamental group of the closed orientable surface, Dehn backend."""
    if genus < 1 or genus > 6:
        raise DomainError("genus must be between 1 and 6")
    gens = "abcdefghijkl"[: 2 * genus]
    rel = "".join(x + y + x.upper() + y.upper() for x, y in zip(gens[::2], gens[1::2]))
    return GroupOracle(Presentation(tuple(gens), (rel,), "dehn"))


def _hermite_rows(vectors: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            pivot = nz[0]
            new = [pivot]
            for r in nz[1:]:
                q = r[col] // pivot[col]
                r2 = [a - q * b for a, b in zip(r, pivot)]
                (new if r2[col] != 0 else rest).append(r2)
            nz = new
        if nz:
            pivot = nz[0]
            if pivot[col] < 0:
                pivot = [-a for a in pivot]
            basis.append(pivot)
        rows = [r for r in rest if any(r)]
        col += 1
    return basis


class GroupOracle:
    """Word problem and metric services for one presentation."""

    def __init__(
        self,
        presentation: Presentation,
        max_radius: int = DEFAULT_MAX_RADIUS,
        max_ball: int = DEFAULT_MAX_BALL,
    ):
        self.presentation = presentation
        self.alphabet = Alphabet(presentation.generators)
        self.max_radius = max_radius
        self.max_ball = max_ball
        self.is_free = presentation.backend == "free"
        self._pieces: dict[str, str] = {}
        self._piece_lengths: list[int] = []
        if not self.is_free:
            self._build_dehn_table()
        self._build_invariants()
        self._geo_memo: dict[str, int] = {}
        self.parity = all(len(r) % 2 == 0 for r in presentation.relators)
        # ball state: element ids in shortlex order of their representatives
        self._letter_index = {ch: i for i, ch in enumerate(self.alphabet.letters)}
        self._reps: list[str] = [""]
        self._lengths: list[int] = [0]
        self._edges: list[list[int]] = [[-1] * len(self.alphabet.letters)]
        self._sphere_start: list[int] = [0, 1]
        self._buckets: dict[tuple, list[int]] = {self.fingerprint(""): [0]}

    # -- presentation data -------------------------------------------------

    @property
    def assumptions(self) -> list[str]:
        return [] if self.is_free else [DEHN_ASSUMPTION]

    def __repr__(self) -> str:
        p = self.presentation
        return f"GroupOracle({''.join(p.generators)!r}, relators={list(p.relators)!r}, backend={p.backend!r})"

    def check_word(self, w: str) -> str:
        w = _w(w)
        if not self.alphabet.contains(w):
            raise DomainError(f"word {w!r} uses letters outside {self.alphabet!r}")
        return w

    def _build_dehn_table(self) -> None:
        closure: set[str] = set()
        for r in self.presentation.relators:
            for base in (r, inverse(r)):
                for k in range(len(base)):
                    closure.add(base[k:] + base[:k])
        pieces: dict[str, str] = {}
        for r in sorted(closure, key=self.alphabet.key):
            n = len(r)
            for k in range(n // 2 + 1, n + 1):
                piece, rest = r[:k], r[k:]
                repl = inverse(rest)
                old = pieces.get(piece)
                if old is None or self.alphabet.key(repl) < self.alphabet.key(old):
                    pieces[piece] = repl
        self._pieces = pieces
        self._piece_lengths = sorted({len(p) for p in pieces}, reverse=True)
        self.relator_closure = frozenset(closure)

    def _build_invariants(self) -> None:
        gens = self.presentation.generators
        rels = self.presentation.relators
        vecs = []
        for r in rels:
            v = [0] * len(gens)
            for ch in r:
                v[gens.index(ch.lower())] += 1 if ch.islower() else -1
            vecs.append(v)
        self._abelian_basis = _hermite_rows(vecs)
        self._gen_index = {g: i for i, g in enumerate(gens)}
        # free quotients: keep a maximal set of generators whose deletion kills every relator
        kept_sets: list[frozenset[str]] = []
        if rels:
            for size in range(len(gens) - 1, 1, -1):
                for keep in itertools.combinations(gens, size):
                    ks = frozenset(keep)
                    if any(ks < other for other in kept_sets):
                        continue
                    if all(free_reduce("".join(ch for ch in r if ch.lower() in ks)) == "" for r in rels):
                        kept_sets.append(ks)
        self._free_quotients = [frozenset(k) for k in kept_sets]
        # str.translate tables deleting the generators outside each quotient
        self._quotient_tables = [
            {ord(ch): None for g in gens if g not in ks for ch in (g, g.upper())} for ks in self._free_quotients
        ]
        self._pivots = [next(i for i, a in enumerate(row) if a) for row in self._abelian_basis]

    # -- reduction and equality -------------------------------------------

    def dehn_reduce(self, w: str) -> str:
        """Free reduction followed by repeated shortening relator replacements."""
        w = free_reduce(w)
        if self.is_free or not w:
            return w
        pieces = self._pieces
        lengths = self._piece_lengths
        changed = True
        while changed and w:
            changed = False
            for k in lengths:
                if k > len(w):
                    continue
                for i in range(len(w) - k + 1):
                    repl = pieces.get(w[i:i + k])
                    if repl is not None:
                        w = free_reduce(w[:i] + repl + w[i + k:])
                        changed = True
                        break
                if changed:
                    break
        return w

    def reduce(self, w: str) -> str:
        return self.dehn_reduce(_w(w))

    def is_identity(self, w: str) -> bool:
        return self.dehn_reduce(_w(w)) == ""

    def equal(self, u: str, v: str) -> bool:
        return self.is_identity(_w(u) + inverse(v))

    def fingerprint(self, w: str) -> tuple:
        """Exact invariant of the element: equal elements share a fingerprint."""
        w = _w(w)
        if self.is_free:
            return (free_reduce(w),)
        vec = [w.count(g) - w.count(g.upper()) for g in self.presentation.generators]
        # reduce modulo the relator lattice
        for piv, row in zip(self._pivots, self._abelian_basis):
            q = vec[piv] // row[piv]
            if q:
                vec = [a - q * b for a, b in zip(vec, row)]
        parts: list = [tuple(vec)]
        for table in self._quotient_tables:
            parts.append(free_reduce(w.translate(table)))
        return tuple(parts)

    # -- balls -------------------------------------------------------------

    @property
    def radius_built(self) -> int:
        return len(self._sphere_start) - 2

    def _grow(self, r: int) -> None:
        if r > self.max_radius:
            raise LimitError(f"ball radius {r} exceeds cap {self.max_radius}", "max_radius", self.max_radius)
        letters = self.alphabet.letters
        inv_index = [self._letter_index[ch.swapcase()] for ch in letters]
        while self.radius_built < r:
            radius = self.radius_built + 1
            lo, hi = self._sphere_start[-2], self._sphere_start[-1]
            for i in range(lo, hi):
                u = self._reps[i]
                row = self._edges[i]
                for li, ch in enumerate(letters):
                    if row[li] != -1:
                        continue
                    cand = u + ch
                    j = None if self.is_free else self._find_id(cand)
                    if j is None:
                        j = len(self._reps)
                        self._reps.append(cand)
                        self._lengths.append(radius)
                        self._edges.append([-1] * len(letters))
                        self._buckets.setdefault(self.fingerprint(cand), []).append(j)
                    row[li] = j
                    self._edges[j][inv_index[li]] = i
            self._sphere_start.append(len(self._reps))
            if len(self._reps) > self.max_ball:
                raise LimitError(
                    f"ball of radius {radius} has more than {self.max_ball} elements", "max_ball", self.max_ball
                )

    def _find_id(self, w: str) -> int | None:
        """Id of the element of ``w`` if it lies in the ball built so far."""
        for j in self._buckets.get(self.fingerprint(w), ()):
            if self.is_free or self.is_identity(w + inverse(self._reps[j])):
                return j
        return None

    def _locate_cached(self, w: str) -> tuple[str, int] | None:
        j = self._find_id(w)
        return None if j is None else (self._reps[j], self._lengths[j])

    def sphere(self, r: int) -> list[str]:
        self._grow(r)
        return self._reps[self._sphere_start[r]:self._sphere_start[r + 1]]

    def ball(self, r: int) -> list[str]:
        """Shortlex-least representatives of all elements of length at most ``r``."""
        self._grow(r)
        return self._reps[: self._sphere_start[r + 1]]

    def ball_size(self, r: int) -> int:
        self._grow(r)
        return self._sphere_start[r + 1]

    def locate(self, w: str, radius: int) -> tuple[str, int] | None:
        """Representative and geodesic length of ``w`` if it lies in ``ball(radius)``."""
        self._grow(radius)
        found = self._locate_cached(self.reduce(self.check_word(w)))
        if found is not None and found[1] <= radius:
            return found
        return None

    def element_id(self, w: str) -> int | None:
        """Index of the element in the built ball, or ``None`` outside it."""
        return self._find_id(self.reduce(w))

    def step(self, i: int, ch: str) -> int:
        """Id of ``element(i) * ch``, or -1 when it lies outside the built ball."""
        li = self._letter_index[ch]
        j = self._edges[i][li]
        if j == -1 and not self.parity and self._lengths[i] == self.radius_built:
            found = self._find_id(self._reps[i] + ch)
            if found is not None:
                self._edges[i][li] = j = found
        return j

    # -- geodesics -----------------------------------------------------------

    def geodesic_length(self, w: str) -> int:
        """Length of a shortest word equal to ``w``."""
        w = self.check_word(w)
        if self.is_free:
            return len(free_reduce(w))
        red = self.dehn_reduce(w)
        L = len(red)
        if L == 0:
            return 0
        known = self._geo_memo.get(red)
        if known is not None:
            return known
        d = self._geodesic_length(red)
        if len(self._geo_memo) < 200_000:
            self._geo_memo[red] = d
        return d

    def _geodesic_length(self, red: str) -> int:
        L = len(red)
        if self.radius_built < min(L, 2):
            self._grow(min(L, 2))
        R = self.radius_built
        # lookups in ball(R) are exact; beyond it the answer is pinned by length and parity
        slack = 2 if self.parity else 1
        if L <= R + slack:
            j = self._find_id(red)
            return self._lengths[j] if j is not None else L
        # a shorter geodesic has length d <= L - slack and splits as a prefix of
        # length <= L - R - slack and a suffix in ball(R)
        k = L - R - slack
        if k > R:
            self._grow(min((L - slack + 1) // 2, self.max_radius))
            R = self.radius_built
            k = max(0, L - R - slack)
            if k > R:
                raise LimitError(f"word of reduced length {L} is beyond the ball cap", "max_radius", self.max_radius)
        best = L
        for i in range(self._sphere_start[k + 1]):
            j = self._find_id(inverse(self._reps[i]) + red)
            if j is not None:
                best = min(best, self._lengths[i] + self._lengths[j])
        return best

    def is_minimal(self, w: str) -> bool:
        w = self.check_word(w)
        return self.geodesic_length(w) == len(w)

    def shortlex_geodesic(self, w: str) -> str:
        """Shortlex-least minimal word equal to ``w``."""
        w = self.check_word(w)
        if self.is_free:
            return free_reduce(w)
        d = self.geodesic_length(w)
        if d <= self.radius_built:
            hit = self._locate_cached(self.dehn_reduce(w))
            if hit is not None:
                return hit[0]
        # otherwise spell it greedily: the least first letter that stays on a geodesic
        red = self.dehn_reduce(w)
        prefix = ""
        while d > self.radius_built:
            for ch in self.alphabet.letters:
                rest = self.dehn_reduce(inverse(ch) + red)
                if self.geodesic_length(rest) == d - 1:
                    prefix, red, d = prefix + ch, rest, d - 1
                    break
            else:  # pragma: no cover
                raise AssertionError("no geodesic continuation found")
        hit = self._locate_cached(red)
        if hit is None or hit[1] != d:  # pragma: no cover
            raise AssertionError("geodesic tail missing from the ball")
        return prefix + hit[0]

    def distance(self, u: str, v: str) -> int:
        return self.geodesic_length(inverse(u) + _w(v))

    # -- thinness and constants -----------------------------------------------

    def check_delta_thin(self, w: str, z: str, delta: int) -> bool:
        """Split-overlap form of the thin triangle condition for the pair ``w``, ``z``."""
        w, z = self.check_word(w), self.check_word(z)
        total = self.geodesic_length(w + z)
        limit = (len(w) + len(z) - total) // 2
        for j in range(1, min(limit, len(w), len(z)) + 1):
            if self.geodesic_length(w[len(w) - j:] + z[:j]) > delta:
                return False
        return True

    def thin_defect(self, w: str, z: str) -> int:
        """Largest overlap distance over admissible splits (0 when there are none)."""
        total = self.geodesic_length(w + z)
        limit = (len(w) + len(z) - total) // 2
        worst = 0
        for j in range(1, min(limit, len(w), len(z)) + 1):
            worst = max(worst, self.geodesic_length(w[len(w) - j:] + z[:j]))
        return worst

    def estimate_delta(self, radius: int) -> int:
        """Smallest delta making every pair from ``ball(radius)`` pass the thin check.

        This is a lower bound for any delta valid on the whole group.
        """
        from .thin import delta_scan  # local import: the scan lives with the geometry code

        return delta_scan(self, radius)

    def compute_M(self, delta: int) -> int:
        """Number of elements of length at most ``4 * delta``."""
        if delta < 0:
            raise DomainError("delta must be nonnegative")
        if self.is_free:
            r = 4 * delta
            k = len(self.alphabet.generators)
            if r == 0:
                return 1
            if k == 0:
                return 1
            if k == 1:
                return 2 * r + 1
            return 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2)
        return self.ball_size(4 * delta)

    # -- conjugacy ----------------------------------------------------------------

    def conjugacy_bound(self, h1: str, h2: str, M: int) -> int:
        return (len(_w(h1)) + len(_w(h2))) // 2 + M + 1

    def conjugacy_search(self, h1: str, h2: str, M: int) -> str | None:
        """Shortlex-least ``w`` with ``h1 = w h2 w^-1`` inside the conjugator bound.

        Returns ``None`` when no such ``w`` exists within the bound. The
        search stops with a :class:`LimitError` when the bound reaches past
        the ball radius cap before a conjugator is found.
        """
        h1, h2 = self.check_word(h1), self.check_word(h2)
        bound = self.conjugacy_bound(h1, h2, M)
        for w in self.iter_words(bound):
            if self.is_identity(w + h2 + inverse(w) + inverse(h1)):
                return w
        return None

    def iter_words(self, radius: int) -> Iterator[str]:
        """Shortlex representatives of the ball, one sphere at a time.

        For the free backend this never materialises the whole ball.
        """
        if self.is_free:
            for length in range(radius + 1):
                yield from self.alphabet.reduced_words(length)
            return
        for r in range(radius + 1):
            if r > self.max_radius:
                raise LimitError(f"search radius {radius} exceeds cap {self.max_radius}", "max_radius", self.max_radius)
            yield from self.sphere(r)


@dataclass(frozen=True)
class BoundConstants:
    """The constants feeding every length bound: delta, M, n and l."""

    delta: int
    M: int
    n: int
    l: int
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def edge_cap(self) -> int:
        """``12 l + M + 4``: the short-edge threshold."""
        return 12 * self.l + self.M + 4

    @property
    def culler(self) -> int:
        return 12 * self.n - 6

    def to_dict(self) -> dict:
        return {"l": self.l, "M": self.M, "delta": self.delta}


def depth_constant(delta: int, n: int) -> int:
    """``ceil(delta * (log2(12n - 6) + 1))``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if delta == 0:
        return 0
    return math.ceil(delta * (math.log2(12 * n - 6) + 1) - 1e-12)


def bound_constants(oracle: GroupOracle, n: int = 1, delta: int | None = None, radius: int = 4) -> BoundConstants:
    """Constants for ``oracle``: declared delta if present, else the radius-limited estimate."""
    notes: list[str] = []
    if delta is None:
        delta = oracle.presentation.delta
        if delta is None:
            delta = 0 if oracle.is_free else oracle.estimate_delta(radius)
            if not oracle.is_free:
                notes.append(f"delta-estimate-radius={radius}")
        else:
            notes.append("delta-declared")
    try:
        M = oracle.compute_M(delta)
    except LimitError:
        # M only enters upper bounds, so a smaller count makes every check stricter
        r = min(4 * delta, oracle.radius_built)
        M = oracle.ball_size(r)
        notes.append(f"M-lower-bound-radius={r}")
    return BoundConstants(delta, M, n, depth_constant(delta, n), tuple(notes))


# module level spellings of the oracle services


def equality(o: GroupOracle, u: str, v: str) -> bool:
    return o.equal(o.check_word(u), o.check_word(v))


def geodesic_length(o: GroupOracle, w: str) -> int:
    return o.geodesic_length(w)


def ball(o: GroupOracle, r: int) -> list[str]:
    return o.ball(r)


def check_delta_thin(o: GroupOracle, w: str, z: str, delta: int) -> bool:
    return o.check_delta_thin(w, z, delta)


def estimate_delta(o: GroupOracle, radius: int) -> int:
    return o.estimate_delta(radius)


def compute_M(o: GroupOracle, delta: int) -> int:
    return o.compute_M(delta)


def conjugacy_search(o: GroupOracle, h1: str, h2: str, M: int) -> str | None:
    return o.conjugacy_search(h1, h2, M)


def words_up_to(alphabet: Alphabet, length: int) -> Iterable[str]:
    for k in range(length + 1):
        yield from alphabet.reduced_words(k)
