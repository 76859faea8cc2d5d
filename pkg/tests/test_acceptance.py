"""The eight acceptance criteria.

Each criterion is one test with a wall-clock limit. Run under pytest the
verdicts are printed as a block at the end of the session; run directly
(``python3 tests/test_acceptance.py``) they are printed as they finish.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import commutator_set, shortest_cyclic_conjugator, wicks_classes  # noqa: E402

from wicksforms import (  # noqa: E402
    GeodesicPolygon,
    GenusCaps,
    bound_constants,
    brute_force_genus,
    build_extension,
    build_surface_graph,
    check_polygon,
    enumerate_wicks_forms,
    free_group,
    free_reduce,
    inverse,
    match_commutator,
    surface_group,
    verify_extension,
    verify_form,
    wicks_match_free,
)
from wicksforms.extension import example_plan  # noqa: E402
from wicksforms.forms import r_bound, synthesize_seeded  # noqa: E402
from wicksforms.thin import companion_bound, delta_scan  # noqa: E402

RESULTS: dict[int, tuple[bool, float, float, str]] = {}

F2 = free_group("ab")
_SURFACE = None


def surface():
    global _SURFACE
    if _SURFACE is None:
        _SURFACE = surface_group(2)
    return _SURFACE


def _genus_one_words() -> list[str]:
    words = [w for n in range(9) for w in F2.alphabet.reduced_words(n)]
    return [h for h in words if brute_force_genus(F2, h, GenusCaps(max_k=1)).k == 1]


# -- criteria ----------------------------------------------------------------------------


def criterion_1() -> str:
    expected = {"aA": (2, 1, 0), "abAB": (1, 2, 1), "abcABC": (2, 3, 1)}
    for w, want in expected.items():
        g = build_surface_graph(w)
        got = (g.v, g.e, g.genus)
        assert got == want, f"{w}: {got} != {want}"
    return "(v, e, genus) exact on aA, abAB, abcABC"


def criterion_2() -> str:
    forms = {str(f) for f in enumerate_wicks_forms(1, 8)}
    assert forms == {"abAB", "abcABC"}, forms
    assert not [f for f in forms if len(f) in (7, 8)]
    assert wicks_classes(1, 8) == forms, "exhaustive placement sweep disagrees"
    return "exactly {abAB, abcABC}; placement sweep agrees"


def criterion_3() -> str:
    words = [w for n in range(9) for w in F2.alphabet.reduced_words(n)]
    mismatches = []
    genus_one = set()
    for h in words:
        by_form = wicks_match_free(h) is not None
        by_search = brute_force_genus(F2, h, GenusCaps(max_k=1)).k == 1
        if by_search:
            genus_one.add(h)
        if by_form != by_search:
            mismatches.append(h)
    assert not mismatches, f"disagreements: {mismatches[:10]}"
    # the nontrivial commutators of length <= 8, from products [x, y] with |x|, |y| <= 5
    assert genus_one == commutator_set(8, 5) - {""}
    assert len(genus_one) == 352
    return f"{len(words)} reduced words, {len(genus_one)} of genus 1, no disagreement"


def criterion_4() -> str:
    cyc = [w for n in range(1, 6) for w in F2.alphabet.reduced_words(n) if w[0] != w[-1].swapcase()]
    M = 1
    pairs = 0
    for h1 in cyc:
        for i in range(len(h1)):
            h2 = h1[i:] + h1[:i]
            w = F2.conjugacy_search(h1, h2, M)
            assert w is not None, (h1, h2)
            assert free_reduce(w + h2 + inverse(w) + inverse(h1)) == ""
            assert len(w) <= (len(h1) + len(h2)) / 2 + M + 1
            assert len(w) == shortest_cyclic_conjugator(h1, h2), (h1, h2, w)
            pairs += 1
    rng = random.Random(4)
    negatives = 0
    for _ in range(400):
        h1, h2 = rng.choice(cyc), rng.choice(cyc)
        if shortest_cyclic_conjugator(h1, h2) is None:
            assert F2.conjugacy_search(h1, h2, M) is None, (h1, h2)
            negatives += 1
    return f"{pairs} conjugate pairs match the cyclic-shift oracle; {negatives} non-conjugate pairs rejected"


def _free_polygons_exhaustive(max_sides: int):
    ws = [w for n in range(1, 4) for w in F2.alphabet.reduced_words(n)]

    def extend(prefix, sides):
        if sides:
            s0 = free_reduce(inverse(prefix))
            if 1 <= len(s0) <= 3:
                yield [s0, *sides]
        if len(sides) == max_sides - 1:
            return
        for s in ws:
            p = free_reduce(prefix + s)
            # the remaining sides can shorten the product by at most 3 each, and the closing side by 3
            if len(p) > 3 * (max_sides - 1 - len(sides)):
                continue
            yield from extend(p, sides + [s])

    yield from extend("", [])


def _random_polygon(o, rng, n_sides: int, close_max: int):
    letters = o.alphabet.letters
    while True:
        sides = []
        for _ in range(n_sides - 1):
            w = ""
            for _ in range(rng.randint(1, 3)):
                ch = rng.choice([c for c in letters if not w or c != w[-1].swapcase()])
                w += ch
            sides.append(w)
        prod = o.reduce("".join(sides))
        if not prod or len(prod) > 2 * close_max:
            continue
        if o.geodesic_length(prod) > close_max:
            continue
        s0 = o.shortlex_geodesic(inverse(prod))
        return [s0, *sides]


def criterion_5() -> str:
    # free group: exhaustive up to five sides, a seeded sample of six to eight
    count = 0
    worst = 0
    for sides in _free_polygons_exhaustive(5):
        rep = check_polygon(GeodesicPolygon(sides, F2), 0)
        assert rep.ok, (sides, rep.violations)
        worst = max([worst] + [c.dist for c in rep.companions + rep.inner])
        count += 1
    rng = random.Random(5)
    for n_sides in (6, 7, 8):
        for _ in range(1500):
            sides = _random_polygon(F2, rng, n_sides, 3)
            rep = check_polygon(GeodesicPolygon(sides, F2), 0)
            assert rep.ok, (sides, rep.violations)
            worst = max([worst] + [c.dist for c in rep.companions + rep.inner])
            count += 1
    assert worst == 0
    # surface group of genus two with the radius-4 estimate
    o = surface()
    delta = delta_scan(o, 4)
    assert delta == 4
    sworst = 0.0
    scount = 0
    for n_sides in range(3, 9):
        for _ in range(25):
            sides = _random_polygon(o, rng, n_sides, 6)
            p = GeodesicPolygon(sides, o)
            p.validate()
            rep = check_polygon(p, delta)
            assert rep.ok, (sides, rep.violations)
            n = p.n
            for c in rep.companions:
                sworst = max(sworst, c.dist / companion_bound(delta, n))
            scount += 1
    return f"{count} free polygons at distance 0; {scount} surface polygons within bounds (delta={delta}, worst ratio {sworst:.2f})"


def criterion_6() -> str:
    c = bound_constants(F2)
    assert (c.delta, c.l, c.M, c.edge_cap) == (0, 0, 1, 5)
    words = _genus_one_words()
    shapes = {1: 0, 2: 0}
    for h in words:
        form = match_commutator(h, F2, c, variants=(1, 2))
        assert verify_form(form, F2).ok, h
        if form.variant == 1:
            assert len(form.F) <= 30 and max(len(v) for v in form.components.values()) <= 5, h
        else:
            assert len(form.F) <= 60, h
        shapes[form.variant] += 1
    return f"{len(words)} commutators: {shapes[1]} by form 1, {shapes[2]} by form 2"


def criterion_7() -> str:
    summary = []
    for name, o, cap in (("F2", F2, None), ("surface", surface(), 12)):
        c = bound_constants(o)
        for variant in (1, 2, 3, 4):
            for seed in range(20):
                h, form, _ = synthesize_seeded(variant, o, c, seed, max_length=cap)
                assert verify_form(form, o).ok, (name, variant, seed)
                back = match_commutator(h, o, c)
                assert verify_form(back, o).ok, (name, variant, seed, h)
                assert len(back.R) <= r_bound(c, o.geodesic_length(h)), (name, variant, seed)
        summary.append(f"{name}: 80 round trips")
    return "; ".join(summary)


def criterion_8() -> str:
    o = F2
    plan = example_plan({"a": "B", "b": "b", "c": ""})
    n = 3
    c = bound_constants(o, n=n)
    g = build_extension(plan, o)
    ver, report = verify_extension(plan, g, o, n, c)
    assert ver.ok, ver.failed
    assert plan.genus_targets == [2, 1] and report.graph_genus == 0 and report.genus == 3
    assert report.length <= 60 * (12 * c.l + c.M + 4)
    res = brute_force_genus(o, report.F, GenusCaps(max_k=3))
    assert res.k is not None and res.k <= 3, res
    return f"F = {report.F}, vertex words {report.length} <= {60 * (12 * c.l + c.M + 4)}, genus(F) = {res.k}"


CRITERIA = {
    1: (criterion_1, 1.0),
    2: (criterion_2, 10.0),
    3: (criterion_3, 600.0),
    4: (criterion_4, 60.0),
    5: (criterion_5, 300.0),
    6: (criterion_6, 600.0),
    7: (criterion_7, 600.0),
    8: (criterion_8, 300.0),
}


def run_criterion(k: int) -> tuple[bool, str]:
    fn, limit = CRITERIA[k]
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except AssertionError as exc:
        ok, detail = False, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed > limit:
        ok, detail = False, f"too slow: {detail}"
    RESULTS[k] = (ok, elapsed, limit, detail)
    return ok, detail


def format_result(k: int) -> str:
    ok, elapsed, limit, detail = RESULTS[k]
    return f"criterion {k}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s / {limit:.0f}s) {detail}"


@pytest.fixture(scope="module", autouse=True)
def _report(request):
    yield
    tr = request.config.pluginmanager.getplugin("terminalreporter")
    if tr is None:
        return
    tr.write_line("")
    for k in sorted(RESULTS):
        tr.write_line(format_result(k))


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = run_criterion(k)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        ok, _ = run_criterion(k)
        failed += not ok
        print(format_result(k), flush=True)
    sys.exit(1 if failed else 0)
