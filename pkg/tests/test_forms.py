import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from oracles import commutator_set, naive_reduce
from wicksforms.errors import DomainError
from wicksforms.forms import (
    CommutatorForm,
    check_minimality_inequalities,
    match_commutator,
    r_bound,
    synthesize,
    synthesize_seeded,
    verify_form,
    wicks_match_free,
)
from wicksforms.oracle import bound_constants, free_group
from wicksforms.words import inverse

F2 = free_group("ab")
C = bound_constants(F2)


@pytest.mark.parametrize(
    "h, want",
    [("abAB", ("a", "b", "", "")), ("aabb", None), ("cabABC", ("a", "b", "", "c"))],
)
def test_free_matcher_examples(h, want):
    assert wicks_match_free(h) == want


def test_free_matcher_agrees_with_commutator_enumeration():
    comms = commutator_set(8, 5)
    for h in comms - {""}:
        X, Y, Z, R = wicks_match_free(h)
        spelled = X + Y + Z + inverse(X) + inverse(Y) + inverse(Z)
        assert naive_reduce(R + spelled + inverse(R)) == h
    assert wicks_match_free("ab") is None and wicks_match_free("") is None


def test_synthesis_examples():
    h, form = synthesize(2, {"xi1": "a", "u": "b", "A2": "ba"}, F2, C)
    assert h == form.F == "AbaBabAB"
    assert form.components["xi2"] == "Bab"
    assert verify_form(form, F2).ok
    h, _ = synthesize(1, {"X": "a", "Y": "b"}, F2, C)
    assert h == "abAB"
    with pytest.raises(DomainError):
        synthesize(1, {"X": "a"}, F2, C)
    with pytest.raises(DomainError):
        synthesize(2, {"xi1": "a", "A2": "b"}, F2, C)


def test_conjugacy_clause_rejects_unrelated_loops():
    _, form = synthesize(2, {"xi1": "a", "u": "b", "A2": "ba"}, F2, C)
    bad = dataclasses.replace(form, components={**form.components, "xi2": "b"})
    assert "conjugacy" in verify_form(bad, F2).failed()


def test_length_clause():
    _, form = synthesize(1, {"X": "aaaaaa", "Y": "b"}, F2, C)
    assert verify_form(form, F2).failed() == ["length"]
    _, form = synthesize(1, {"X": "aaaaa", "Y": "b"}, F2, C)
    assert verify_form(form, F2).ok


def test_strict_shape_two():
    # xi2 = u^-1 xi1 u is conjugate to xi1 but not to its inverse
    _, form = synthesize(2, {"xi1": "a", "u": "b", "A2": "ba"}, F2, C)
    assert verify_form(form, F2).ok
    assert "conjugacy" in verify_form(form, F2, strict=True).failed()


def test_match_examples():
    form = match_commutator("AbaBabAB", F2, C)
    assert (form.variant, form.components, form.R) == (1, {"X": "A", "Y": "baB", "Z": ""}, "")
    form = match_commutator("cabABC", free_group("abc"), bound_constants(free_group("abc")))
    assert form.R == "c" and form.F == "abAB"


def test_conjugator_bound():
    assert r_bound(C, 2) == 36 + 1
    form = match_commutator("cabABC", free_group("abc"), bound_constants(free_group("abc")))
    assert len(form.R) <= r_bound(form.constants, 6)
    # a power of F commutes with F, so R can be long while h stays short
    far = CommutatorForm(1, {"X": "a", "Y": "b", "Z": ""}, "abAB" * 10, "abAB", C, "abAB")
    assert verify_form(far, F2).failed() == ["conjugator"]


def test_minimality_inequalities():
    assert check_minimality_inequalities("abAB", {"a": "a", "b": "b"}, F2)
    failures = []
    assert not check_minimality_inequalities("abAB", {"a": "ab", "b": "b"}, F2, failures)
    assert failures and all(f.lhs > f.rhs for f in failures)
    with pytest.raises(DomainError):
        check_minimality_inequalities("abAB", {"a": "aA", "b": "b"}, F2)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 2, 3, 4]), st.integers(0, 10**6))
def test_seeded_round_trip(variant, seed):
    h, form, _ = synthesize_seeded(variant, F2, C, seed)
    assert verify_form(form, F2).ok
    assert naive_reduce(form.R + form.F + inverse(form.R)) == naive_reduce(h)
    found = match_commutator(h, F2, C)
    assert verify_form(found, F2).ok
    assert naive_reduce(found.R + found.F + inverse(found.R)) == naive_reduce(h)
