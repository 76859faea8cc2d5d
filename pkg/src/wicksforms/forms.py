"""The four shapes a commutator can take up to conjugation.

A commutator ``h`` is conjugate, ``h = R F R^-1``, to a minimal word
``F`` of one of four shapes::

    1  F = X Y Z X^-1 Y^-1 Z^-1
    2  F = A1 A2^-1             A1 = x1^-1 A2 x2,  x1 conjugate to x2
    3  F = A1 B1 A2^-1 B2^-1    A1 = x1 A2 x3,  B1 = x4 B2 x2,  x1 x2 x3 x4 = 1
    4  F = A1 B1 C1 A2^-1 B2^-1 C2^-1
                                A1 = x1 A2 r1,  B1 = r2 B2 x2,  C1 = x3 C2 r3,
                                x1 x2 x3 = r1 r2 r3 = 1

with lengths bounded in terms of the group constants. Components are
stored under the names ``X, Y, Z, A1, A2, B1, B2, C1, C2`` and
``xi1..xi4, rho1..rho3``.

Shape 1 is the free-group picture: every commutator of a free group is
conjugate to a cyclically reduced word spelling ``XYZX^-1Y^-1Z^-1``
with at most one of ``X, Y, Z`` empty.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConstructionError, DomainError, LimitError
from .genus import GenusCaps, brute_force_genus
from .oracle import BoundConstants, GroupOracle
from .surface import OrientableWord
from .words import LabellingFunction, _w, cyclic_reduce, format_word, free_reduce, inverse

VARIANT_KEYS = {
    1: ("X", "Y", "Z"),
    2: ("A1", "A2", "xi1", "xi2"),
    3: ("A1", "B1", "A2", "B2", "xi1", "xi2", "xi3", "xi4"),
    4: ("A1", "B1", "C1", "A2", "B2", "C2", "xi1", "xi2", "xi3", "rho1", "rho2", "rho3"),
}


def form_word(variant: int, comp: Mapping[str, str]) -> str:
    """The word the shape spells from its components (unreduced)."""
    c = {k: _w(v) for k, v in comp.items()}
    if variant == 1:
        return c["X"] + c["Y"] + c["Z"] + inverse(c["X"]) + inverse(c["Y"]) + inverse(c["Z"])
    if variant == 2:
        return c["A1"] + inverse(c["A2"])
    if variant == 3:
        return c["A1"] + c["B1"] + inverse(c["A2"]) + inverse(c["B2"])
    if variant == 4:
        return c["A1"] + c["B1"] + c["C1"] + inverse(c["A2"]) + inverse(c["B2"]) + inverse(c["C2"])
    raise DomainError(f"unknown variant {variant}")


def r_bound(c: BoundConstants, h_length: int) -> float:
    """Largest conjugator length allowed for an element of geodesic length ``h_length``."""
    return 59 * c.l + 8 * c.M + 28 + 2 * c.delta + h_length / 2


@dataclass
class CommutatorForm:
    variant: int
    components: dict[str, str]
    R: str
    F: str
    constants: BoundConstants
    h: str = ""

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "components": {k: format_word(v) for k, v in self.components.items()},
            "R": format_word(self.R),
            "F": format_word(self.F),
            "h": format_word(self.h),
            "bounds": self.constants.to_dict(),
        }


@dataclass
class FormCheck:
    clauses: dict[str, tuple[bool, str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.clauses.values())

    def failed(self) -> list[str]:
        return [k for k, (ok, _) in self.clauses.items() if not ok]

    def to_list(self) -> list[dict]:
        return [{"clause": k, "ok": ok, "detail": d} for k, (ok, d) in self.clauses.items()]


def _conjugate_clause(o: GroupOracle, a: str, b: str, M: int) -> tuple[bool, str]:
    try:
        w = o.conjugacy_search(a, b, M)
    except LimitError as exc:
        return False, f"undecided within caps: {exc}"
    if w is None:
        return False, f"{format_word(a)} and {format_word(b)} are not conjugate within the bound"
    return True, f"conjugator {format_word(w)}"


def verify_form(form: CommutatorForm, o: GroupOracle, strict: bool = False) -> FormCheck:
    """Check every invariant of ``form`` in the group.

    ``strict`` switches the shape-2 conjugacy clause to ``xi1`` conjugate
    to ``xi2^-1``.
    """
    chk = FormCheck()
    cl = chk.clauses
    v = form.variant
    if v not in VARIANT_KEYS:
        cl["variant"] = (False, f"unknown variant {v}")
        return chk
    missing = [k for k in VARIANT_KEYS[v] if k not in form.components]
    if missing:
        cl["components"] = (False, f"missing {missing}")
        return chk
    c = {k: o.check_word(form.components[k]) for k in VARIANT_KEYS[v]}
    cap = form.constants.edge_cap
    F = o.check_word(form.F)

    if v == 1:
        cl["shape"] = (o.equal(F, form_word(1, c)), "F = X Y Z X^-1 Y^-1 Z^-1")
        longest = max(len(c["X"]), len(c["Y"]), len(c["Z"]))
        ok = longest <= cap and len(F) <= 6 * cap
        cl["length"] = (ok, f"max component {longest} <= {cap}, |F| = {len(F)} <= {6 * cap}")
    else:
        cl["shape"] = (F == form_word(v, c), "F spelled literally from its components")
        if v == 2:
            cl["equation"] = (o.equal(c["A1"], inverse(c["xi1"]) + c["A2"] + c["xi2"]), "A1 = xi1^-1 A2 xi2")
            target = inverse(c["xi2"]) if strict else c["xi2"]
            cl["conjugacy"] = _conjugate_clause(o, c["xi1"], target, form.constants.M)
            loops = ("xi1", "xi2")
        elif v == 3:
            ok = o.equal(c["A1"], c["xi1"] + c["A2"] + c["xi3"]) and o.equal(c["B1"], c["xi4"] + c["B2"] + c["xi2"])
            cl["equation"] = (ok, "A1 = xi1 A2 xi3, B1 = xi4 B2 xi2")
            cl["product"] = (o.is_identity(c["xi1"] + c["xi2"] + c["xi3"] + c["xi4"]), "xi1 xi2 xi3 xi4 = 1")
            loops = ("xi1", "xi2", "xi3", "xi4")
        else:
            ok = (
                o.equal(c["A1"], c["xi1"] + c["A2"] + c["rho1"])
                and o.equal(c["B1"], c["rho2"] + c["B2"] + c["xi2"])
                and o.equal(c["C1"], c["xi3"] + c["C2"] + c["rho3"])
            )
            cl["equation"] = (ok, "A1 = xi1 A2 rho1, B1 = rho2 B2 xi2, C1 = xi3 C2 rho3")
            ok = o.is_identity(c["xi1"] + c["xi2"] + c["xi3"]) and o.is_identity(c["rho1"] + c["rho2"] + c["rho3"])
            cl["product"] = (ok, "xi1 xi2 xi3 = rho1 rho2 rho3 = 1")
            loops = ("xi1", "xi2", "xi3", "rho1", "rho2", "rho3")
        total = sum(len(c[k]) for k in loops)
        cl["length"] = (total <= 12 * cap, f"{total} <= {12 * cap}")

    cl["minimal"] = (o.is_minimal(F) and o.is_minimal(form.R), "F and R minimal")
    if form.h:
        h = o.check_word(form.h)
        cl["conjugate"] = (o.equal(h, form.R + F + inverse(form.R)), "h = R F R^-1")
        hl = o.geodesic_length(h)
        bound = r_bound(form.constants, hl)
        cl["conjugator"] = (len(form.R) <= bound, f"|R| = {len(form.R)} <= {bound}")
    return chk


# -- synthesis ----------------------------------------------------------------------


def synthesize(variant: int, seeds: Mapping[str, str], o: GroupOracle, c: BoundConstants) -> tuple[str, CommutatorForm]:
    """Build ``(h, form)`` from seed words.

    Seeds per variant (``R`` optional everywhere):

    * 1: ``X, Y, Z``
    * 2: ``xi1, A2`` and either ``u`` (then ``xi2 = u^-1 xi1 u``) or ``xi2``
    * 3: ``xi1, xi2, xi3, A2, B2`` (``xi4`` closes the product)
    * 4: ``xi1, xi2, rho1, rho2, A2, B2, C2`` (``xi3``, ``rho3`` close the products)

    Derived components are freely reduced; the result must be minimal
    in the group or a :class:`DomainError` names the failed constraint.
    """
    s = {k: o.check_word(v) for k, v in seeds.items()}
    R = s.get("R", "")
    comp, F = _components(variant, s)
    if not F:
        raise DomainError("constraint: F is trivial")
    if not o.is_minimal(F):
        raise DomainError(f"constraint: F = {F} is not minimal")
    if not o.is_minimal(R):
        raise DomainError(f"constraint: R = {R} is not minimal")
    h = free_reduce(R + F + inverse(R))
    form = CommutatorForm(variant, comp, R, F, c, h)
    return h, form


def _components(variant: int, s: Mapping[str, str]) -> tuple[dict[str, str], str]:
    """All components and the spelled ``F`` from checked seed words."""
    comp: dict[str, str] = {}
    if variant == 1:
        comp = {k: s.get(k, "") for k in ("X", "Y", "Z")}
        if sum(1 for k in comp.values() if not k) > 1:
            raise DomainError("constraint: at most one of X, Y, Z may be trivial")
        F = free_reduce(form_word(1, comp))
    elif variant == 2:
        xi1, A2 = s["xi1"], s["A2"]
        if "xi2" in s:
            xi2 = s["xi2"]
        elif "u" in s:
            xi2 = free_reduce(inverse(s["u"]) + xi1 + s["u"])
        else:
            raise DomainError("constraint: variant 2 needs u or xi2")
        comp = {"A1": free_reduce(inverse(xi1) + A2 + xi2), "A2": A2, "xi1": xi1, "xi2": xi2}
        F = form_word(2, comp)
    elif variant == 3:
        xi1, xi2, xi3 = s["xi1"], s["xi2"], s["xi3"]
        xi4 = free_reduce(inverse(xi1 + xi2 + xi3))
        A2, B2 = s["A2"], s["B2"]
        comp = {
            "A1": free_reduce(xi1 + A2 + xi3), "B1": free_reduce(xi4 + B2 + xi2), "A2": A2, "B2": B2,
            "xi1": xi1, "xi2": xi2, "xi3": xi3, "xi4": xi4,
        }
        F = form_word(3, comp)
    elif variant == 4:
        xi1, xi2, rho1, rho2 = s["xi1"], s["xi2"], s["rho1"], s["rho2"]
        xi3 = free_reduce(inverse(xi1 + xi2))
        rho3 = free_reduce(inverse(rho1 + rho2))
        A2, B2, C2 = s["A2"], s["B2"], s["C2"]
        comp = {
            "A1": free_reduce(xi1 + A2 + rho1), "B1": free_reduce(rho2 + B2 + xi2),
            "C1": free_reduce(xi3 + C2 + rho3), "A2": A2, "B2": B2, "C2": C2,
            "xi1": xi1, "xi2": xi2, "xi3": xi3, "rho1": rho1, "rho2": rho2, "rho3": rho3,
        }
        F = form_word(4, comp)
    else:
        raise DomainError(f"unknown variant {variant}")
    return comp, F


def _random_word(o: GroupOracle, rng: random.Random, lo: int, hi: int) -> str:
    n = rng.randint(lo, hi)
    letters = o.alphabet.letters
    w = ""
    while len(w) < n:
        ch = rng.choice(letters)
        if w and w[-1] == ch.swapcase():
            continue
        w += ch
    return w


def random_seeds(variant: int, o: GroupOracle, rng: random.Random) -> dict[str, str]:
    rw = lambda lo, hi: _random_word(o, rng, lo, hi)  # noqa: E731
    seeds = {"R": rw(0, 2)}
    if variant == 1:
        seeds.update(X=rw(1, 3), Y=rw(1, 3), Z=rw(0, 2))
    elif variant == 2:
        seeds.update(xi1=rw(1, 2), u=rw(1, 2), A2=rw(1, 3))
    elif variant == 3:
        seeds.update(xi1=rw(0, 2), xi2=rw(0, 2), xi3=rw(0, 2), A2=rw(1, 2), B2=rw(1, 2))
    else:
        seeds.update(xi1=rw(0, 1), xi2=rw(0, 1), rho1=rw(0, 1), rho2=rw(0, 1), A2=rw(1, 2), B2=rw(1, 2), C2=rw(1, 2))
    return seeds


def synthesize_seeded(variant: int, o: GroupOracle, c: BoundConstants, seed: int,
                      attempts: int = 500, max_length: int | None = None) -> tuple[str, CommutatorForm, dict[str, str]]:
    """Draw seeds from ``random.Random(seed)`` until synthesis succeeds.

    With ``max_length`` set, draws whose ``F`` or ``R F R^-1`` is longer
    are discarded before any geodesic test, which keeps presented groups
    inside the ball caps.
    """
    rng = random.Random(seed)
    for _ in range(attempts):
        seeds = random_seeds(variant, o, rng)
        if max_length is not None:
            try:
                F = _components(variant, {k: o.check_word(v) for k, v in seeds.items()})[1]
            except DomainError:
                continue
            R = seeds.get("R", "")
            if len(F) > max_length or len(free_reduce(R + F + inverse(R))) > max_length:
                continue
        try:
            h, form = synthesize(variant, seeds, o, c)
        except DomainError:
            continue
        return h, form, seeds
    raise ConstructionError(f"no valid variant {variant} instance in {attempts} draws")


# -- matching --------------------------------------------------------------------------


def _literal_shape1(core: str):
    """Splits of ``core`` as ``X Y Z X^-1 Y^-1 Z^-1``: ``Z`` shortest first, then ``X``."""
    L = len(core)
    if L % 2 or L < 4:
        return
    half = L // 2
    for z in range(0, half + 1):
        for x in range(0, half - z + 1):
            y = half - z - x
            if (x == 0) + (y == 0) + (z == 0) > 1:
                continue
            X, Y, Z = core[:x], core[x:x + y], core[x + y:half]
            if core[half:] == inverse(X) + inverse(Y) + inverse(Z):
                yield X, Y, Z


def wicks_match_free(h: str) -> tuple[str, str, str, str] | None:
    """``(X, Y, Z, R)`` with ``h`` freely equal to ``R XYZX^-1Y^-1Z^-1 R^-1``, or ``None``.

    The cyclic reduction of ``h`` must spell the shape letter for letter
    for some rotation; ``R`` absorbs the conjugator and the rotation.
    """
    core, conj = cyclic_reduce(h)
    if not core:
        return None
    for i in range(len(core)):
        rot = core[i:] + core[:i]
        for X, Y, Z in _literal_shape1(rot):
            return X, Y, Z, free_reduce(conj + core[:i])
    return None


def _candidates(h: str, o: GroupOracle):
    """Cyclic words to factor: the free cyclic reduction of ``h`` and of its geodesic."""
    seen = set()
    words = [free_reduce(h)]
    if not o.is_free:
        words.append(o.dehn_reduce(h))
        try:
            words.append(o.shortlex_geodesic(h))
        except LimitError:
            pass
    for w in words:
        core, conj = cyclic_reduce(w)
        for i in range(len(core)):
            rot = core[i:] + core[:i]
            R = free_reduce(conj + core[:i])
            if (rot, R) in seen:
                continue
            seen.add((rot, R))
            yield rot, R


def _splits(L: int, parts: int):
    if parts == 1:
        yield (L,)
        return
    for first in range(1, L - parts + 2):
        for rest in _splits(L - first, parts - 1):
            yield (first,) + rest


def _cut(word: str, lengths) -> list[str]:
    out, i = [], 0
    for n in lengths:
        out.append(word[i:i + n])
        i += n
    return out


def _conjugator(o: GroupOracle, a: str, b: str, radius: int) -> str | None:
    """Some ``w`` with ``a = w b w^-1``; exact for free groups, radius-limited otherwise."""
    if o.is_free:
        ca, ra = cyclic_reduce(a)
        cb, rb = cyclic_reduce(b)
        if len(ca) != len(cb):
            return None
        if not ca:
            return ""
        k = (cb + cb).find(ca)
        if k < 0:
            return None
        s = cb[:k]  # ca = s^-1 cb s
        return free_reduce(ra + inverse(s) + inverse(rb))
    for w in o.iter_words(radius):
        if o.is_identity(w + b + inverse(w) + inverse(a)):
            return w
    return None


def _match_variant(variant: int, h: str, o: GroupOracle, c: BoundConstants, radius: int):
    hl = o.geodesic_length(h)
    bound = r_bound(c, hl)
    small = list(o.iter_words(radius))
    for F, R in _candidates(h, o):
        if len(R) > bound or not o.is_minimal(F) or not o.is_minimal(R):
            continue
        if variant == 1:
            for X, Y, Z in _literal_shape1(F):
                yield {"X": X, "Y": Y, "Z": Z}, F, R
        elif variant == 2:
            for i in range(1, len(F)):
                A1, A2 = F[:i], inverse(F[i:])
                for xi1 in small:
                    xi2 = o.reduce(inverse(A2) + xi1 + A1)
                    yield {"A1": A1, "A2": A2, "xi1": xi1, "xi2": xi2}, F, R
        elif variant == 3:
            for cut in _splits(len(F), 4):
                A1, B1, iA2, iB2 = _cut(F, cut)
                A2, B2 = inverse(iA2), inverse(iB2)
                for xi1 in small:
                    xi3 = o.reduce(inverse(A2) + inverse(xi1) + A1)
                    # xi2 must conjugate P to Q for the product to close up
                    P = inverse(A2) + inverse(xi1) + A1 + B1
                    Q = inverse(xi1) + B2
                    xi2 = _conjugator(o, Q, P, radius)
                    if xi2 is None:
                        continue
                    xi4 = o.reduce(B1 + inverse(xi2) + inverse(B2))
                    yield {"A1": A1, "B1": B1, "A2": A2, "B2": B2,
                           "xi1": xi1, "xi2": o.reduce(xi2), "xi3": xi3, "xi4": xi4}, F, R
        else:
            for cut in _splits(len(F), 6):
                A1, B1, C1, iA2, iB2, iC2 = _cut(F, cut)
                A2, B2, C2 = inverse(iA2), inverse(iB2), inverse(iC2)
                for xi1 in small:
                    rho1 = o.reduce(inverse(A2) + inverse(xi1) + A1)
                    for xi2 in small:
                        rho2 = o.reduce(B1 + inverse(xi2) + inverse(B2))
                        xi3 = o.reduce(inverse(xi1 + xi2))
                        rho3 = o.reduce(inverse(C2) + inverse(xi3) + C1)
                        if o.is_identity(rho1 + rho2 + rho3):
                            yield {"A1": A1, "B1": B1, "C1": C1, "A2": A2, "B2": B2, "C2": C2,
                                   "xi1": xi1, "xi2": xi2, "xi3": xi3,
                                   "rho1": rho1, "rho2": rho2, "rho3": rho3}, F, R


def _witness_shape1(h: str, o: GroupOracle, c: BoundConstants):
    """Shape 1 with ``Z`` trivial from a commutator witness of ``h`` in the group."""
    res = brute_force_genus(o, h, GenusCaps(max_k=1, commutator_cap=min(c.edge_cap, 3 if not o.is_free else 6)))
    if res.k != 1:
        return None
    (x, y), = res.witness.pairs
    F = o.shortlex_geodesic(h)
    return {"X": x, "Y": y, "Z": ""}, F, ""


def match_commutator(h: str, o: GroupOracle, c: BoundConstants, variants=(1, 2, 3, 4),
                     radius: int = 1, strict: bool = False) -> CommutatorForm:
    """First verified form in variant order.

    Candidates are the rotations of the free cyclic reductions of ``h``
    (and, for presented groups, of its Dehn reduction and geodesic), cut
    literally into the variant's pieces. Unknown loop words are drawn
    from the ball of the given radius or solved from the equations.
    Shape 1 falls back on a commutator witness found by brute force.
    """
    h = o.check_word(h)
    for variant in variants:
        for comp, F, R in _match_variant(variant, h, o, c, radius):
            form = CommutatorForm(variant, comp, R, F, c, h)
            if verify_form(form, o, strict=strict).ok:
                return form
        if variant == 1:
            found = _witness_shape1(h, o, c)
            if found is not None:
                comp, F, R = found
                form = CommutatorForm(1, comp, R, F, c, h)
                if verify_form(form, o, strict=strict).ok:
                    return form
    raise ConstructionError(f"no form found for {format_word(h)} within the search bounds")


# -- minimality inequalities ----------------------------------------------------------


@dataclass
class InequalityFailure:
    clause: str
    letter: str
    split: int
    other: int
    other_split: int
    lhs: int
    rhs: int


def check_minimality_inequalities(W, theta: LabellingFunction | Mapping[str, str], o: GroupOracle,
                                  report: list | None = None) -> bool:
    """Bounded-subword inequalities of a minimal labelled Wicks form.

    For each letter ``A`` of ``W`` (both orientations), each split
    ``theta(A) = a1 a2`` and each letter ``E`` elsewhere in the cyclic
    word with each split ``theta(E) = e1 e2``:

    * (i)   for ``E`` before ``A`` (after ``A^-1``):
      ``|a1| <= |e2 theta(between E and A) a1|``
    * (ii)  for ``E`` between ``A`` and ``A^-1``:
      ``|a2| <= |a2 theta(between A and E) e1|``
    * (iii) for ``E`` after ``A^-1``:
      ``|a1| <= |a2 theta(between A and E, including A^-1) e1|``

    Failures are appended to ``report`` when given.
    """
    if not isinstance(theta, LabellingFunction):
        theta = LabellingFunction(theta)
    ow = W if isinstance(W, OrientableWord) else OrientableWord.of(W)
    w = ow.text
    L = len(w)
    for g in theta.assignments:
        if not o.is_minimal(theta.assignments[g]):
            raise DomainError(f"label of {g!r} is not minimal")
    img = [theta.image(ch) for ch in w]
    ok = True

    def fail(*args):
        nonlocal ok
        ok = False
        if report is not None:
            report.append(InequalityFailure(*args))

    for p in range(L):
        q = w.index(w[p].swapcase())
        a = img[p]
        arc1 = [(p + d) % L for d in range(1, (q - p) % L)]
        arc2 = [(q + d) % L for d in range(1, (p - q) % L)]
        for s in range(len(a) + 1):
            a1, a2 = a[:s], a[s:]
            # (ii)
            mid = ""
            for j in arc1:
                e = img[j]
                for t in range(len(e) + 1):
                    rhs = o.geodesic_length(a2 + mid + e[:t])
                    if len(a2) > rhs:
                        fail("ii", w[p], s, j, t, len(a2), rhs)
                mid += e
            # (i): walk backwards from A
            tail = ""
            for i in reversed(arc2):
                e = img[i]
                for t in range(len(e) + 1):
                    rhs = o.geodesic_length(e[t:] + tail + a1)
                    if len(a1) > rhs:
                        fail("i", w[p], s, i, t, len(a1), rhs)
                tail = e + tail
            # (iii)
            mid = "".join(img[j] for j in arc1) + img[q]
            for k in arc2:
                e = img[k]
                for t in range(len(e) + 1):
                    rhs = o.geodesic_length(a2 + mid + e[:t])
                    if len(a1) > rhs:
                        fail("iii", w[p], s, k, t, len(a1), rhs)
                mid += e
    return ok
