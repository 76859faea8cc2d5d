"""Genus of tuples of group elements.

The genus of ``(g1, ..., gt)`` is the least ``k`` such that some product
of conjugates ``h1 g1 h1^-1 ... ht gt ht^-1`` equals a product of ``k``
commutators. The brute-force search here is the reference oracle used
by the form matchers and the acceptance checks.

Two reductions keep the search small:

* the first conjugator can be chosen freely (conjugate the whole
  identity by its inverse, and a conjugate of a product of ``k``
  commutators is again one), so the first element is replaced by its
  cyclic reduction;
* an element outside the commutator subgroup has a nonzero image in the
  abelianization, so such tuples are rejected before searching.

Commutators ``[x, y]`` with ``|x|, |y| <= cap`` are tabulated once per
oracle and cap; ``k = 1`` is then a lookup and ``k = 2`` a
meet-in-the-middle scan over the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, LimitError
from .oracle import GroupOracle
from .surface import OrientableWord, build_surface_graph
from .words import _w, commutator, cyclic_reduce, format_word, free_reduce, inverse

DEFAULT_MAX_K = 2
DEFAULT_TABLE_PAIRS = 3_000_000


@dataclass
class GenusWitness:
    conjugators: list[str]
    pairs: list[tuple[str, str]]

    @property
    def k(self) -> int:
        return len(self.pairs)

    def to_dict(self) -> dict:
        return {
            "conjugators": [format_word(h) for h in self.conjugators],
            "pairs": [[format_word(x), format_word(y)] for x, y in self.pairs],
            "k": self.k,
        }


def verify_genus_witness(o: GroupOracle, elements: Sequence[str], w: GenusWitness) -> bool:
    """Check ``prod h_i g_i h_i^-1 == prod [x_j, y_j]`` in the group."""
    elements = [o.check_word(g) for g in elements]
    if len(w.conjugators) != len(elements):
        return False
    lhs = "".join(_w(h) + g + inverse(h) for h, g in zip(w.conjugators, elements))
    rhs = "".join(_w(x) + _w(y) + inverse(x) + inverse(y) for x, y in w.pairs)
    return o.is_identity(lhs + inverse(rhs))


@dataclass
class GenusCaps:
    max_k: int = DEFAULT_MAX_K
    commutator_cap: int | None = None  # max |x|, |y|; default from the input length
    conjugator_cap: int | None = None  # max |h_i| for i >= 2
    table_pairs: int = DEFAULT_TABLE_PAIRS

    def to_dict(self) -> dict:
        return {
            "max_k": self.max_k,
            "commutator_cap": self.commutator_cap,
            "conjugator_cap": self.conjugator_cap,
        }


@dataclass
class GenusResult:
    k: int | None
    witness: GenusWitness | None
    caps: GenusCaps
    status: str  # "exact" or "unknown-beyond-caps"
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "witness": self.witness.to_dict() if self.witness else None,
            "caps": self.caps.to_dict(),
            "status": self.status,
            "reason": self.reason,
        }


class CommutatorTable:
    """All commutators ``[x, y]`` with ``x, y`` geodesic representatives of length ``<= cap``.

    Pairs are visited by increasing ``|x| + |y|``, then ``|x|``, then
    shortlex; each element keeps the first pair that produced it.
    """

    def __init__(self, o: GroupOracle, cap: int):
        self.oracle = o
        self.cap = cap
        self.reps = o.ball(cap)
        self._inv = [inverse(x) for x in self.reps]
        n = len(self.reps)
        self.n = n
        by_len: list[list[int]] = [[] for _ in range(cap + 1)]
        for i, x in enumerate(self.reps):
            by_len[len(x)].append(i)
        self._table: dict = {}
        free = o.is_free
        reps, inv = self.reps, self._inv
        for s in range(2 * cap + 1):
            for a in range(max(0, s - cap), min(s, cap) + 1):
                for i in by_len[a]:
                    x, X = reps[i], inv[i]
                    for j in by_len[s - a]:
                        word = x + reps[j] + X + inv[j]
                        if free:
                            key = free_reduce(word)
                            if key not in self._table:
                                self._table[key] = i * n + j
                        else:
                            word = o.dehn_reduce(word)
                            self._table.setdefault(o.fingerprint(word), []).append((word, i * n + j))

    def __len__(self) -> int:
        return len(self._table)

    def pair(self, code: int) -> tuple[str, str]:
        i, j = divmod(code, self.n)
        return self.reps[i], self.reps[j]

    def lookup(self, g: str) -> tuple[str, str] | None:
        """A pair with ``[x, y] = g``, or ``None`` if none is tabulated."""
        o = self.oracle
        if o.is_free:
            code = self._table.get(free_reduce(g))
            return None if code is None else self.pair(code)
        g = o.dehn_reduce(g)
        for word, code in self._table.get(o.fingerprint(g), ()):
            if o.is_identity(word + inverse(g)):
                return self.pair(code)
        return None

    def pairs_in_order(self):
        """Tabulated pairs in search order (duplicates of an element included)."""
        cap, reps = self.cap, self.reps
        by_len: list[list[int]] = [[] for _ in range(cap + 1)]
        for i, x in enumerate(reps):
            by_len[len(x)].append(i)
        for s in range(2 * cap + 1):
            for a in range(max(0, s - cap), min(s, cap) + 1):
                for i in by_len[a]:
                    for j in by_len[s - a]:
                        yield reps[i], reps[j]


_TABLES: dict[tuple[int, int], CommutatorTable] = {}


def commutator_table(o: GroupOracle, cap: int) -> CommutatorTable:
    key = (id(o), cap)
    t = _TABLES.get(key)
    if t is None or t.oracle is not o:
        t = CommutatorTable(o, cap)
        _TABLES[key] = t
    return t


def _in_commutator_subgroup(o: GroupOracle, g: str) -> bool:
    if o.is_free:
        return all(v == 0 for v in _exponents(g).values())
    return all(v == 0 for v in o.fingerprint(g)[0])


def _exponents(g: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for ch in g:
        out[ch.lower()] = out.get(ch.lower(), 0) + (1 if ch.islower() else -1)
    return out


def default_commutator_cap(o: GroupOracle, length: int, budget: int) -> int:
    """Half the input length plus two, lowered until the table fits the budget."""
    cap = max(1, length // 2 + 2)
    cap = min(cap, o.max_radius)
    while cap > 1:
        try:
            if o.ball_size(cap) ** 2 <= budget:
                break
        except LimitError:
            pass
        cap -= 1
    return cap


def _single(o: GroupOracle, g: str, k: int, table: CommutatorTable) -> list[tuple[str, str]] | None:
    """Pairs with ``g = [x1, y1]...[xk, yk]`` found through the table."""
    if k == 0:
        return [] if o.is_identity(g) else None
    if k == 1:
        hit = table.lookup(g)
        return None if hit is None else [hit]
    for x, y in table.pairs_in_order():
        rest = free_reduce(_w(y) + _w(x) + inverse(y) + inverse(x) + g)
        found = _single(o, rest, k - 1, table)
        if found is not None:
            return [(x, y)] + found
    return None


def brute_force_genus(o: GroupOracle, elements: Sequence[str] | str, caps: GenusCaps | None = None) -> GenusResult:
    """Least ``k`` with a witness inside the caps.

    ``elements`` is a tuple of words (a single word is a 1-tuple). When
    no witness exists within the caps the result is reported as unknown
    rather than infinite.
    """
    if isinstance(elements, str):
        elements = [elements]
    elements = [o.reduce(o.check_word(g)) for g in elements]
    if not elements:
        raise DomainError("need at least one element")
    caps = GenusCaps(**vars(caps)) if caps else GenusCaps()
    if caps.max_k < 0:
        raise DomainError("max_k must be nonnegative")
    total = "".join(elements)
    if not _in_commutator_subgroup(o, total):
        return GenusResult(None, None, caps, "unknown-beyond-caps", "nonzero image in the abelianization")
    longest = len(cyclic_reduce(elements[0])[0]) + sum(len(g) for g in elements[1:])
    if caps.commutator_cap is None:
        caps.commutator_cap = default_commutator_cap(o, longest, caps.table_pairs)
    if caps.conjugator_cap is None:
        caps.conjugator_cap = max((len(g) for g in elements), default=0) // 2 + 1
    table = None
    for k in range(caps.max_k + 1):
        if k >= 1 and table is None:
            table = commutator_table(o, caps.commutator_cap)
        for conj in _conjugator_choices(o, elements, caps.conjugator_cap):
            prod = "".join(h + g + inverse(h) for h, g in zip(conj, elements))
            prod = o.reduce(prod)
            pairs = _single(o, prod, k, table) if k else ([] if o.is_identity(prod) else None)
            if pairs is not None:
                w = GenusWitness(list(conj), pairs)
                if not verify_genus_witness(o, elements, w):  # pragma: no cover - table bug guard
                    raise AssertionError("genus witness failed verification")
                return GenusResult(k, w, caps, "exact")
    return GenusResult(None, None, caps, "unknown-beyond-caps", "no witness within caps")


def _conjugator_choices(o: GroupOracle, elements: Sequence[str], cap: int):
    # the first element is conjugated to its cyclic reduction; the others range over the ball
    first = inverse(cyclic_reduce(elements[0])[1])
    t = len(elements)
    if t == 1:
        yield (first,)
        return
    words = list(o.iter_words(cap))

    def rec(i: int, acc: tuple[str, ...]):
        if i == t:
            yield acc
            return
        for h in words:
            yield from rec(i + 1, acc + (h,))

    yield from rec(1, (first,))


def quadratic_genus_free(w) -> int:
    """Genus of an orientable quadratic word, read off its surface graph."""
    ow = w if isinstance(w, OrientableWord) else OrientableWord.of(w)
    return build_surface_graph(ow).genus


def commutator_word(pairs: Sequence[tuple[str, str]]) -> str:
    return free_reduce("".join(commutator(x, y) for x, y in pairs))
