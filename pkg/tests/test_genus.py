import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_reduced, naive_reduce
from wicksforms.errors import DomainError
from wicksforms.genus import (
    GenusCaps,
    GenusWitness,
    brute_force_genus,
    commutator_table,
    commutator_word,
    quadratic_genus_free,
    verify_genus_witness,
)
from wicksforms.oracle import free_group, surface_group
from wicksforms.words import commutator, inverse

F2 = free_group("ab")

short = st.sampled_from(all_reduced(2))


def test_witness_examples():
    assert verify_genus_witness(F2, ["abAB"], GenusWitness([""], [("a", "b")]))
    assert verify_genus_witness(F2, ["ab", "BA"], GenusWitness(["", ""], []))
    assert not verify_genus_witness(F2, ["a"], GenusWitness([""], []))
    assert not verify_genus_witness(F2, ["a", "A"], GenusWitness([""], []))


def test_brute_force_examples():
    r = brute_force_genus(F2, "abAB")
    assert (r.k, r.status) == (1, "exact")
    assert r.witness.pairs == [("a", "b")]
    r = brute_force_genus(F2, "aabb")
    assert r.k is None and r.status == "unknown-beyond-caps"
    assert r.reason == "nonzero image in the abelianization"
    r = brute_force_genus(F2, ("ab", "AB"))
    assert r.k == 0
    assert verify_genus_witness(F2, ("ab", "AB"), r.witness)
    assert brute_force_genus(F2, "").k == 0


def test_genus_two_word():
    r = brute_force_genus(F2, "abABabAB")
    assert r.k == 2
    assert verify_genus_witness(F2, ["abABabAB"], r.witness)


def test_conjugated_commutator_needs_the_cyclic_conjugator():
    h = "aabAABaBabAA"
    r = brute_force_genus(F2, h, GenusCaps(max_k=1))
    assert r.k == 1
    assert verify_genus_witness(F2, [h], r.witness)


def test_caps_are_reported():
    r = brute_force_genus(F2, "abAB", GenusCaps(max_k=0))
    assert r.k is None and r.reason == "no witness within caps"
    assert r.to_dict()["caps"]["max_k"] == 0
    with pytest.raises(DomainError):
        brute_force_genus(F2, "abAB", GenusCaps(max_k=-1))
    with pytest.raises(DomainError):
        brute_force_genus(F2, [])


def test_surface_commutator():
    o = surface_group(2)
    r = brute_force_genus(o, "abAB", GenusCaps(max_k=1, commutator_cap=2))
    assert r.k == 1
    assert verify_genus_witness(o, ["abAB"], r.witness)
    # the relator is trivial, so its genus is 0
    assert brute_force_genus(o, "abABcdCD", GenusCaps(max_k=1, commutator_cap=1)).k == 0


@pytest.mark.parametrize("w, g", [("abAB", 1), ("aA", 0), ("abABcdCD", 2)])
def test_quadratic_genus(w, g):
    assert quadratic_genus_free(w) == g


def test_commutator_table_lookup():
    t = commutator_table(F2, 2)
    assert t.lookup("abAB") == ("a", "b")
    assert t.lookup("aabb") is None
    assert commutator_table(F2, 2) is t


@settings(max_examples=40, deadline=None)
@given(short, short)
def test_commutators_have_genus_at_most_one(x, y):
    h = commutator(x, y)
    r = brute_force_genus(F2, h, GenusCaps(max_k=1))
    assert r.k == (0 if h == "" else 1)
    assert verify_genus_witness(F2, [h], r.witness)


@settings(max_examples=30, deadline=None)
@given(short, short, short)
def test_conjugate_pairs_have_genus_zero(g, h, w):
    # (g, w g^-1 w^-1) multiplies to 1 after conjugation; the needed conjugators have length <= 5
    elems = (naive_reduce(g + h) or "a", naive_reduce(w + inverse(g + h) + inverse(w)) or "A")
    r = brute_force_genus(F2, elems, GenusCaps(max_k=0, conjugator_cap=5))
    assert r.k == 0
    assert verify_genus_witness(F2, elems, r.witness)


def test_commutator_word():
    assert commutator_word([("a", "b"), ("b", "a")]) == ""
