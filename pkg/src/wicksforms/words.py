"""Words and cyclic words over a signed alphabet.

A word is stored as a plain ``str``. Lowercase ASCII letters are
generators, the matching uppercase letters are their inverses, and the
empty string is the identity. The literal ``"1"`` is the printed form
of the identity and is accepted wherever a word is expected.

>>> free_reduce("aBbc")
'ac'
>>> cyclic_reduce("Abca")
('bc', 'A')
>>> canonical_cyclic("bca").representative
'abc'
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import DomainError, WordSyntaxError

IDENTITY = "1"
_LETTERS = frozenset(string.ascii_letters)


class Letter(NamedTuple):
    """A generator symbol together with a sign of +1 or -1."""

    symbol: str
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def __str__(self) -> str:
        return self.symbol if self.sign > 0 else self.symbol.upper()

    @classmethod
    def parse(cls, ch: str) -> "Letter":
        if len(ch) != 1 or ch not in _LETTERS:
            raise WordSyntaxError(f"not a letter: {ch!r}")
        return cls(ch.lower(), 1 if ch.islower() else -1)


def parse_word(text: str) -> str:
    """Validate ``text`` and return the internal form ("1" becomes "")."""
    if not isinstance(text, str):
        raise WordSyntaxError(f"word must be a string, got {type(text).__name__}")
    if text == IDENTITY or text == "":
        return ""
    bad = [ch for ch in text if ch not in _LETTERS]
    if bad:
        raise WordSyntaxError(f"invalid character {bad[0]!r} in word {text!r}")
    return text


def format_word(w: str) -> str:
    """Printed form of a word: the identity is written "1"."""
    return w if w else IDENTITY


def _w(w: str) -> str:
    # cheap normalisation used on public entry points
    return "" if w == IDENTITY else w


def letters(w: str) -> list[Letter]:
    return [Letter.parse(ch) for ch in _w(w)]


def inverse(w: str) -> str:
    """Formal inverse: reverse the word and swap the case of each letter."""
    return _w(w)[::-1].swapcase()


def free_reduce(w: str) -> str:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[str] = []
    for ch in _w(w):
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def is_reduced(w: str) -> bool:
    w = _w(w)
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def is_cyclically_reduced(w: str) -> bool:
    w = _w(w)
    if not is_reduced(w):
        return False
    return len(w) < 2 or w[0] != w[-1].swapcase()


def cyclic_reduce(w: str) -> tuple[str, str]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` after free reduction.

    Returns ``(core, conjugator)`` with ``core`` cyclically reduced.
    """
    r = free_reduce(w)
    i, j = 0, len(r)
    while j - i >= 2 and r[i] == r[j - 1].swapcase():
        i += 1
        j -= 1
    return r[i:j], r[:i]


def rotate(w: str, k: int) -> str:
    w = _w(w)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def rotations(w: str) -> Iterator[str]:
    w = _w(w)
    if not w:
        yield w
        return
    for k in range(len(w)):
        yield w[k:] + w[:k]


def exponent_sums(w: str, generators: Sequence[str] | None = None) -> dict[str, int]:
    """Signed letter counts; the image of ``w`` in the abelianised free group."""
    sums: dict[str, int] = {g: 0 for g in generators} if generators else {}
    for ch in _w(w):
        g = ch.lower()
        sums[g] = sums.get(g, 0) + (1 if ch.islower() else -1)
    return sums


class Alphabet:
    """An ordered signed alphabet: ``g1 < G1 < g2 < G2 < ...``.

    The order drives shortlex comparison, canonical rotations and
    enumeration order everywhere in the package.
    """

    def __init__(self, generators: Iterable[str] | None = None):
        gens = list(generators) if generators is not None else list(string.ascii_lowercase)
        for g in gens:
            if len(g) != 1 or not g.islower():
                raise WordSyntaxError(f"generator must be one lowercase letter: {g!r}")
        if len(set(gens)) != len(gens):
            raise WordSyntaxError("duplicate generator")
        self.generators: tuple[str, ...] = tuple(gens)
        self.letters: tuple[str, ...] = tuple(ch for g in gens for ch in (g, g.upper()))
        self.rank: dict[str, int] = {ch: i for i, ch in enumerate(self.letters)}

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.generators)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def key(self, w: str) -> tuple:
        """Shortlex sort key."""
        w = _w(w)
        try:
            return (len(w), tuple(self.rank[ch] for ch in w))
        except KeyError as exc:
            raise DomainError(f"letter {exc.args[0]!r} not in {self!r}") from None

    def contains(self, w: str) -> bool:
        return all(ch in self.rank for ch in _w(w))

    def reduced_words(self, length: int) -> Iterator[str]:
        """All freely reduced words of the given length, in shortlex order."""
        if length == 0:
            yield ""
            return
        for prefix in self.reduced_words(length - 1):
            last = prefix[-1].swapcase() if prefix else None
            for ch in self.letters:
                if ch != last:
                    yield prefix + ch


DEFAULT_ALPHABET = Alphabet()


def shortlex_key(w: str, alphabet: Alphabet | None = None) -> tuple:
    return (alphabet or DEFAULT_ALPHABET).key(w)


def least_rotation(w: str, alphabet: Alphabet | None = None) -> str:
    """Least rotation of ``w`` under the alphabet order."""
    alpha = alphabet or DEFAULT_ALPHABET
    return min(rotations(w), key=alpha.key)


@dataclass(frozen=True)
class CyclicWord:
    """A word up to rotation, stored as its least reduced rotation."""

    representative: str
    cyclically_reduced: bool

    def __len__(self) -> int:
        return len(self.representative)

    def __str__(self) -> str:
        return format_word(self.representative)


def canonical_cyclic(w: str, alphabet: Alphabet | None = None) -> CyclicWord:
    """Class of ``w`` under rotation with its canonical representative.

    Only freely reduced rotations are candidates, so the representative
    stays reduced even when ``w`` is not cyclically reduced.
    """
    w = _w(w)
    if not is_reduced(w):
        raise DomainError(f"canonical_cyclic needs a reduced word, got {w!r}")
    alpha = alphabet or DEFAULT_ALPHABET
    rep = min((r for r in rotations(w) if is_reduced(r)), key=alpha.key)
    return CyclicWord(rep, is_cyclically_reduced(w))


def are_cyclic_permutations(u: str, v: str) -> bool:
    u, v = _w(u), _w(v)
    return len(u) == len(v) and (not u or v in u + u)


def commutator(x: str, y: str) -> str:
    """Reduced form of ``x y x^-1 y^-1``."""
    return free_reduce(_w(x) + _w(y) + inverse(x) + inverse(y))


class LabellingFunction:
    """Homomorphism from words over abstract letters to generator words.

    Built from a map ``{abstract letter: word}`` on positive letters; the
    image of an inverse letter is the inverse word.
    """

    def __init__(self, assignments: Mapping[str, str]):
        table: dict[str, str] = {}
        for key, value in assignments.items():
            if len(key) != 1 or not key.isalpha():
                raise DomainError(f"abstract letter must be a single letter: {key!r}")
            pos = key.lower()
            img = parse_word(value)
            if key.isupper():
                img = inverse(img)
            if pos in table:
                raise DomainError(f"letter {pos!r} assigned twice")
            table[pos] = img
        self.assignments: dict[str, str] = table

    def image(self, letter: str) -> str:
        pos = letter.lower()
        if pos not in self.assignments:
            raise DomainError(f"letter {letter!r} is not in the labelling domain")
        img = self.assignments[pos]
        return img if letter.islower() else inverse(img)

    def raw(self, w: str) -> str:
        """Concatenated image without free reduction."""
        return "".join(self.image(ch) for ch in _w(w))

    def __call__(self, w: str) -> str:
        return free_reduce(self.raw(w))

    def __repr__(self) -> str:
        return f"LabellingFunction({self.assignments!r})"


def apply_labelling(theta: LabellingFunction | Mapping[str, str], w: str) -> str:
    if not isinstance(theta, LabellingFunction):
        theta = LabellingFunction(theta)
    return theta(w)
