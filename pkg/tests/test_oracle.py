import json

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_reduced, shortest_cyclic_conjugator
from wicksforms.errors import DomainError, LimitError
from wicksforms.oracle import (
    GroupOracle,
    Presentation,
    bound_constants,
    depth_constant,
    free_group,
    surface_group,
)
from wicksforms.words import free_reduce, inverse

F2 = free_group("ab")
SURFACE = surface_group(2)
C5 = GroupOracle(Presentation(("a",), ("aaaaa",), "dehn"))

f2_words = st.text(alphabet="aAbB", max_size=16)
surface_words = st.text(alphabet="abcdABCD", max_size=10)
short_surface_words = st.text(alphabet="abcdABCD", max_size=6)


def test_equality_examples():
    assert F2.equal("aBbA", "1")
    assert not F2.equal("ab", "ba")
    assert SURFACE.equal("abABcdCD", "1")
    assert SURFACE.equal("abAB", "dcDC")


def test_geodesic_examples():
    assert F2.geodesic_length("aBba") == 2
    assert SURFACE.geodesic_length("abABcdCD") == 0
    assert SURFACE.geodesic_length("abAB") == 4
    # five letters of the relator equal the inverse of the other three
    assert SURFACE.geodesic_length("abABc") == 3


def test_ball_examples():
    assert sorted(F2.ball(1)) == sorted(["", "a", "A", "b", "B"])
    assert F2.ball_size(2) == 17
    assert C5.ball_size(3) == 5


def test_surface_spheres():
    # words of length <= 3 are distinct; at length 4 the 16 half-splits of relator rotations pair up 8 words
    sizes = [SURFACE.ball_size(r) - (SURFACE.ball_size(r - 1) if r else 0) for r in range(5)]
    assert sizes == [1, 8, 56, 392, 8 * 7**3 - 8]


def test_thin_examples():
    assert F2.check_delta_thin("ab", "BA", 0)
    assert free_group("abcd").check_delta_thin("ab", "cd", 0)


def test_delta_estimates():
    assert F2.estimate_delta(4) == 0
    assert free_group("a").estimate_delta(6) == 0
    assert C5.estimate_delta(3) == 2
    assert SURFACE.estimate_delta(3) == 4


def test_compute_M():
    assert F2.compute_M(0) == 1
    assert free_group("a").compute_M(0) == 1
    assert F2.compute_M(1) == F2.ball_size(4) == 161
    assert SURFACE.compute_M(1) == SURFACE.ball_size(4) == 3193
    with pytest.raises(DomainError):
        F2.compute_M(-1)


def test_bound_constants_free():
    c = bound_constants(F2)
    assert (c.delta, c.M, c.l, c.edge_cap) == (0, 1, 0, 5)
    assert c.notes == ()


def test_bound_constants_fall_back_to_a_lower_M():
    o = GroupOracle(Presentation(SURFACE.presentation.generators, SURFACE.presentation.relators, "dehn", 4),
                    max_ball=5000)
    c = bound_constants(o, n=1)
    assert c.delta == 4
    assert "delta-declared" in c.notes
    r = o.radius_built
    assert f"M-lower-bound-radius={r}" in c.notes
    assert c.M == o.ball_size(r)
    assert c.l == depth_constant(4, 1) == 15


@pytest.mark.parametrize("h1, h2, want", [("ab", "ba", "a"), ("ab", "ab", ""), ("a", "b", None)])
def test_conjugacy_examples(h1, h2, want):
    assert F2.conjugacy_search(h1, h2, 1) == want
    assert F2.conjugacy_bound("ab", "ba", 1) == 4


def test_surface_conjugacy():
    w = SURFACE.conjugacy_search("abAB", "BabA", 1)
    assert w == "b"
    assert SURFACE.is_identity(w + "BabA" + inverse(w) + "baBA")


def test_limits():
    small = GroupOracle(SURFACE.presentation, max_radius=3)
    with pytest.raises(LimitError):
        small.ball(4)
    with pytest.raises(LimitError):
        small.geodesic_length("acacacacacacac")


def test_presentation_round_trip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(SURFACE.presentation.to_dict()))
    assert Presentation.load(path) == SURFACE.presentation
    with pytest.raises(DomainError):
        Presentation(("a",), ("b",), "dehn")
    with pytest.raises(DomainError):
        Presentation(("a",), ("aa",), "free")
    with pytest.raises(DomainError):
        Presentation.from_dict({"relators": []})


@given(f2_words)
def test_free_geodesic_is_reduced_length(w):
    assert F2.geodesic_length(w) == len(free_reduce(w))
    assert F2.shortlex_geodesic(w) == free_reduce(w)


@settings(max_examples=60, deadline=None)
@given(surface_words, st.integers(0, 7))
def test_relator_conjugates_are_trivial(w, k):
    r = "abABcdCD"
    r = r[k:] + r[:k]
    assert SURFACE.is_identity(w + r + inverse(w))
    assert SURFACE.is_identity(w + inverse(r) + inverse(w))


@settings(max_examples=60, deadline=None)
@given(surface_words)
def test_surface_geodesics(w):
    d = SURFACE.geodesic_length(w)
    g = SURFACE.shortlex_geodesic(w)
    assert len(g) == d <= len(free_reduce(w))
    assert SURFACE.equal(g, w)
    assert SURFACE.is_minimal(g)
    assert d % 2 == len(w) % 2


@settings(max_examples=60, deadline=None)
@given(short_surface_words, short_surface_words)
def test_surface_triangle_inequality(u, v):
    assert SURFACE.geodesic_length(u + v) <= SURFACE.geodesic_length(u) + SURFACE.geodesic_length(v)
    assert SURFACE.distance(u, v) == SURFACE.distance(v, u)


def test_conjugacy_matches_cyclic_shifts_on_short_words():
    cyc = [w for w in all_reduced(3) if w and w[0] != w[-1].swapcase()]
    for h1 in cyc:
        for h2 in cyc:
            found = F2.conjugacy_search(h1, h2, 1)
            want = shortest_cyclic_conjugator(h1, h2)
            assert (found is None) == (want is None), (h1, h2)
            if found is not None:
                assert len(found) == want
