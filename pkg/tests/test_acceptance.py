"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` or read the lines from the
regular ``pytest -v`` log (they are printed with capture disabled).
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

import pytest

import knotforge.oracle as oracle_mod
import knotforge.trivializer as triv_mod
from knotforge.diagram import Diagram, change_crossings, parse_pd
from knotforge.gamma import brunnian_check, gamma
from knotforge.invariants import alexander, determinant, genus_bracket, jones
from knotforge.rmoves import SearchBudget, apply_move, canonical_key, enumerate_moves
from knotforge.trivializer import audit_bound, search_trivializers, verify_trivializer
from oracles import braid_closure, fox_alexander, knot_corpus, naive_jones_q

from conftest import FIGURE_EIGHT, TREFOIL


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, seconds):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
        return ok

    return emit


@pytest.fixture(scope="module")
def instances():
    return {j: gamma(j) for j in range(3)}


def random_verified(count=20, seed=2024):
    """Small random braid-closure knots with a verified order-1 trivializer."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = rng.choice([2, 3, 3, 4])
        word = [rng.choice([1, -1]) * rng.randint(1, s - 1) for _ in range(rng.randint(3, 8))]
        d = braid_closure(word, s)
        if d.n_components != 1 or oracle_mod.classify(d).status != "Knotted":
            continue
        found = search_trivializers(d, 1)
        if found:
            out.append((word, d, found[0]))
    return out


def test_criterion_1_trefoil_sharpness(report):
    t0 = time.perf_counter()
    d = parse_pd(TREFOIL)
    one = search_trivializers(d, 1)
    two = search_trivializers(d, 2)
    triple = verify_trivializer(d, [0, 1, 2])
    cert = triple.subset_verdicts[(0, 1, 2)]
    dt = time.perf_counter() - t0
    ok = (
        [r.candidate for r in one] == [(0, 1), (0, 2), (1, 2)]
        and all(r.status == "Verified" for r in one)
        and two == []
        and triple.status == "Refuted"
        and cert.status == "Knotted"
        and cert.invariant == "jones"
        and dt < 5
    )
    assert report(1, ok, f"m=1 pairs={len(one)} m=2 found={len(two)} triple={triple.status}/{cert.invariant}", dt)


def test_criterion_2_figure_eight(report):
    t0 = time.perf_counter()
    found = search_trivializers(parse_pd(FIGURE_EIGHT), 1)
    dt = time.perf_counter() - t0
    ok = len(found) >= 1 and all(r.status == "Verified" for r in found) and dt < 10
    assert report(2, ok, f"verified pairs={len(found)}", dt)


def test_criterion_3_gamma_generations(report):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for j in range(3):
        g = gamma(j)
        v = oracle_mod.classify(g.knot)
        rep = verify_trivializer(g.knot, g.marks)
        unknots = [s for s in rep.subset_verdicts.values() if s.status == "Unknot"]
        replay = all(s.trace.replay().crossings == () for s in unknots)
        good = (
            len(g.marks) == j + 2
            and v.status == "Knotted"
            and v.check(g.knot)
            and rep.status == "Verified"
            and rep.order == j + 1
            and len(unknots) == 2 ** (j + 2) - 1
            and replay
        )
        ok &= good
        rows.append(f"j={j}:{len(g.knot.crossings)}c/{v.invariant}/order {rep.order}/{len(unknots)} unknots")
    dt = time.perf_counter() - t0
    ok &= dt < 600
    assert report(3, ok, "; ".join(rows), dt)


def test_criterion_4_brunnian(report, instances):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for j in (0, 1):
        rep = brunnian_check(instances[j])
        full = tuple(range(j + 2))
        proper = [e for e in rep.entries if e.circles != full]
        top = next(e for e in rep.entries if e.circles == full)
        ok &= rep.passed and not rep.unknown
        ok &= all(e.verdict.status in ("Unknot", "Unlink") for e in proper)
        ok &= top.verdict.status == "Knotted"
        rows.append(f"j={j}: {len(proper)} proper sublinks trivial, full link {top.verdict.invariant}")
    dt = time.perf_counter() - t0
    assert report(4, ok, "; ".join(rows), dt)


def test_criterion_5_bound_audit(report, instances):
    t0 = time.perf_counter()
    statuses = {}
    ok = True
    for name, text in (("trefoil", TREFOIL), ("figure_eight", FIGURE_EIGHT)):
        d = parse_pd(text)
        rep = search_trivializers(d, 1)[0]
        a = audit_bound(rep, genus_bracket(d))
        ok &= a.status == "Tight"
        statuses[name] = a.status
    results = []
    for g in instances.values():
        rep = verify_trivializer(g.knot, g.marks)
        results.append(audit_bound(rep, genus_bracket(g.knot)).status)
    randoms = random_verified(20)
    for _, d, rep in randoms:
        results.append(audit_bound(rep, genus_bracket(d)).status)
    ok &= "Violation" not in results and len(randoms) >= 20
    dt = time.perf_counter() - t0
    detail = f"{statuses}; gamma+random: {len(results)} audits, violations={results.count('Violation')}"
    assert report(5, ok, detail, dt)


def _fuzz(iterations=1000, moves=6, seed=7):
    corpus = {"trefoil": parse_pd(TREFOIL), "figure_eight": parse_pd(FIGURE_EIGHT), "kink": parse_pd("X(1,1,2,2)")}
    refs = {k: jones(d) for k, d in corpus.items()}
    rng = random.Random(seed)
    bad = 0
    for _ in range(iterations):
        name = rng.choice(sorted(corpus))
        d = corpus[name]
        for _ in range(moves):
            options = enumerate_moves(d)
            d = apply_move(d, rng.choice(options))
            if len(d.crossings) > 14:
                break
        if jones(d) != refs[name]:
            bad += 1
    return bad


def test_criterion_6_invariant_suite(report):
    t0 = time.perf_counter()
    bad = _fuzz()
    knots = dict(knot_corpus())
    knots["unknot"] = Diagram((), 1, frozenset())
    alex_ok = True
    for d in knots.values():
        a = alexander(d)
        alex_ok &= a == a.invert_variable() and abs(a(1)) == 1
        if d.crossings:
            alex_ok &= a.terms == fox_alexander(d) and jones(d).terms == naive_jones_q(d)
    dets = [determinant(knots[k]) for k in ("unknot", "trefoil", "figure_eight")]
    oracle_dets = [1] + [abs(sum(c * (-1) ** (e // 2) for e, c in fox_alexander(knots[k]).items())) for k in ("trefoil", "figure_eight")]
    genus = [genus_bracket(knots[k]) for k in ("trefoil", "figure_eight")]
    ok = (
        bad == 0
        and alex_ok
        and dets == [1, 3, 5] == oracle_dets
        and all((g.lower, g.upper) == (1, 1) for g in genus)
    )
    dt = time.perf_counter() - t0
    assert report(6, ok, f"fuzz mismatches={bad}/1000 alexander_ok={alex_ok} determinants={dets}", dt)


@contextmanager
def recording():
    seen = []
    real = oracle_mod.classify

    def spy(d, budget=None):
        v = real(d, budget)
        seen.append((d, v))
        return v

    oracle_mod.classify, triv_mod.classify = spy, spy
    try:
        yield seen
    finally:
        oracle_mod.classify, triv_mod.classify = real, real


def test_criterion_7_oracle_soundness(report, instances):
    t0 = time.perf_counter()
    with recording() as seen:
        tre, fig = parse_pd(TREFOIL), parse_pd(FIGURE_EIGHT)
        search_trivializers(tre, 1)
        search_trivializers(tre, 2)
        verify_trivializer(tre, [0, 1, 2])
        search_trivializers(fig, 1)
        for g in instances.values():
            oracle_mod.classify(g.knot)
            verify_trivializer(g.knot, g.marks)
        for j in (0, 1):
            brunnian_check(instances[j])
    unknots = [(d, v) for d, v in seen if v.status in ("Unknot", "Unlink")]
    replay_ok = all(v.trace.replay().crossings == () and v.trace.initial == d for d, v in unknots)

    sweep = {}
    for d, _ in seen:
        sweep.setdefault(canonical_key(d), d)
    for g in instances.values():
        sweep.setdefault(canonical_key(g.knot), g.knot)
    for _, d, _ in random_verified(20):
        sweep.setdefault(canonical_key(d), d)
    conflicts = 0
    for d in sweep.values():
        got = {oracle_mod.classify(d, SearchBudget(max_states=n)).status for n in (10**3, 10**4, 10**5)}
        if "Knotted" in got and got & {"Unknot", "Unlink"}:
            conflicts += 1
    dt = time.perf_counter() - t0
    ok = bool(unknots) and replay_ok and conflicts == 0
    detail = f"traces replayed={len(unknots)}/{len(unknots)} sweep diagrams={len(sweep)} conflicts={conflicts}"
    assert report(7, ok, detail, dt)
