"""Acceptance criteria, one test per criterion, each printing a PASS line.

Every tolerance and runtime budget is pinned here; the oracles (brute-force
entropies, exhaustive tiling enumeration, integer power comparisons, index
counting formulas) are implemented inside this module or conftest,
independent of the code paths they check.
"""
import random
import time
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from conftest import brute_entropy, random_joint

from infotile.ci import CISystem, canonical_disjoint_extension, disjointify, to_ci_only
from infotile.compiler import compile_ttori, emit_statement, face_sets, flatten, slackify
from infotile.expressions import ci_row
from infotile.gadgets import SystemBuilder, residue
from infotile.joint import FactoredJoint, Variable, entropic_vector, subset_entropy, uniform_seed
from infotile.logbounds import pick_alpha, pick_log_bounds
from infotile.refuter import REFUTED, UNKNOWN, elemental_inequalities, refute, replay_certificate
from infotile.systems import system_dumps
from infotile.tiling import TileSet, find_periodic_tiling, validate_tiling
from infotile.witness import (
    WitnessRefusal,
    build_witness,
    extend_witness_for_slack,
    unit_flip,
    unit_sat,
    unit_sw,
    unit_triple,
    verify,
)

MONO = TileSet(1, ((1, 1, 1, 1),))


def _announce(n, detail):
    print(f"[PASS] criterion {n}: {detail}")


def test_criterion_1_entropy_axioms():
    start = time.monotonic()
    rng = random.Random(20240)
    for trial in range(200):
        joint = random_joint(rng, max_vars=4, max_seed_size=16)
        names = joint.var_names()
        vec = entropic_vector(joint, names)
        subs = [frozenset(c) for r in range(1, len(names) + 1) for c in combinations(names, r)]
        get = lambda s: vec.entries[s] if s else 0.0
        for s in subs:
            assert get(s) >= -1e-9
            for t in subs:
                if s <= t:
                    assert get(t) >= get(s) - 1e-9
                assert get(s) + get(t) >= get(s | t) + get(s & t) - 1e-9
        probe = [n for n in names if rng.random() < 0.6] or [names[0]]
        assert abs(subset_entropy(joint, probe) - brute_entropy(joint, probe)) <= 1e-12
    elapsed = time.monotonic() - start
    assert elapsed < 30, f"criterion 1 took {elapsed:.1f}s"
    _announce(1, f"200 random joints: axioms at 1e-9, lazy = full at 1e-12 ({elapsed:.1f}s)")


def test_criterion_2_gadget_unit_witnesses():
    start = time.monotonic()
    k = 9
    sbar = lambda keep: tuple(i for i in range(1, k + 1) if i not in keep)
    cases = [
        ("triple", *unit_triple()),
        ("flip", *unit_flip()),
        ("sw", *unit_sw(k)),
        ("sat!=1/2 pos/neg", *unit_sat("ne_half", k, [[1, 2], [-3, -4]], (k,), ())),
        ("sat<=1/2 a=0,1", *unit_sat("le_half", k, [[1, 3], [5, 6]], (), sbar((1, 2)))),
        ("sat<=3/4 a=0..3",
         *unit_sat("le_3_4", k, [[1, 2, 3, 5], [1, 2, 6, 7], [1, 6, 7, 8], [5, 6, 7, 8]],
                   (), sbar((1, 2, 3, 4)))),
    ]
    for name, joint, cs in cases:
        report = verify(joint, cs, tol=1e-9)
        assert report.passed, (name, [(r.tag, r.residual) for r in report.failures[:3]])
    with pytest.raises(WitnessRefusal) as e1:
        unit_sat("le_half", k, [[1, 2]], (), sbar((1, 2)))
    assert e1.value.law == Fraction(1, 2) and e1.value.required_split == Fraction(3, 2)
    with pytest.raises(WitnessRefusal) as e2:
        unit_sat("ne_half", k, [[1, -2]], (k,), ())
    assert e2.value.law == Fraction(1, 3) and e2.value.required_split == Fraction(2, 3)
    elapsed = time.monotonic() - start
    assert elapsed < 60, f"criterion 2 took {elapsed:.1f}s"
    _announce(2, f"unit witnesses at 1e-9 and exact-rational refusals ({elapsed:.1f}s)")


def test_criterion_3_constant_pickers():
    start = time.monotonic()
    for k in range(2, 1001):
        alpha = pick_alpha(k)
        p, q = alpha.numerator, alpha.denominator
        assert (k - 1) ** q < 2**p < k**q
        p, q = pick_log_bounds(k)
        assert (k - 1) ** q < 2**p < k**q
    elapsed = time.monotonic() - start
    assert elapsed < 5, f"criterion 3 took {elapsed:.1f}s"
    _announce(3, f"exact integer inequalities for 2 <= k <= 1000 ({elapsed:.1f}s)")


def _oracle_exists(ts: TileSet, max_period: int, cache: dict) -> bool:
    """Naive full-enumeration oracle, vectorized per torus shape."""
    n_e_s_w = np.array(ts.tiles, dtype=np.int8)
    north, east, south, west = (n_e_s_w[:, i] for i in range(4))
    T = len(ts.tiles)
    for a in range(1, max_period + 1):
        for b in range(1, max_period + 1):
            key = (a, b, T)
            if key not in cache:
                cells = a * b
                grids = np.array(
                    list(product(range(T), repeat=cells)), dtype=np.int8
                ).reshape(-1, b, a)
                cache[key] = grids
            g = cache[key]
            ok_h = east[g] == west[np.roll(g, -1, axis=2)]
            ok_v = north[g] == south[np.roll(g, -1, axis=1)]
            if bool((ok_h.all(axis=(1, 2)) & ok_v.all(axis=(1, 2))).any()):
                return True
    return False


def _canon3(tiles) -> tuple:
    perms = [p for p in product((1, 2, 3), repeat=3) if len(set(p)) == 3]
    best = None
    for perm in perms:
        relabeled = tuple(sorted(tuple(perm[c - 1] for c in t) for t in tiles))
        if best is None or relabeled < best:
            best = relabeled
    return best


def test_criterion_4_tiling_search():
    start = time.monotonic()
    til = find_periodic_tiling(MONO, 3)
    assert til is not None and (til.a, til.b) == (1, 1)
    assert find_periodic_tiling(TileSet(2, ((1, 1, 2, 1),)), 6) is None
    checker = TileSet(2, ((1, 1, 2, 2), (2, 2, 1, 1)))
    found = find_periodic_tiling(checker, 2)
    assert found is not None and max(found.a, found.b) == 2 and validate_tiling(checker, found)

    # oracle agreement over all tile sets with <= 3 tiles over <= 3 colors,
    # periods <= 3.  Both the search and the oracle are complete within the
    # bound and equivariant under color relabeling (they only ever compare
    # colors for equality), so checking one representative per relabeling
    # orbit covers every set; equivariance itself is spot-checked below.
    universe = list(product((1, 2, 3), repeat=4))
    reps = set()
    for size in (1, 2, 3):
        for tiles in combinations(universe, size):
            reps.add(_canon3(tiles))
    cache: dict = {}
    agree = 0
    for tiles in sorted(reps):
        ts = TileSet(3, tiles)
        got = find_periodic_tiling(ts, 3)
        want = _oracle_exists(ts, 3, cache)
        assert (got is not None) == want, tiles
        if got is not None:
            assert validate_tiling(ts, got)
        agree += 1
    rng = random.Random(5)
    perms = [p for p in product((1, 2, 3), repeat=3) if len(set(p)) == 3]
    for _ in range(50):
        tiles = tuple(rng.sample(universe, rng.randint(1, 3)))
        perm = rng.choice(perms)
        relabeled = tuple(tuple(perm[c - 1] for c in t) for t in tiles)
        lhs = find_periodic_tiling(TileSet(3, tiles), 3) is not None
        rhs = find_periodic_tiling(TileSet(3, relabeled), 3) is not None
        assert lhs == rhs
    elapsed = time.monotonic() - start
    assert elapsed < 120, f"criterion 4 took {elapsed:.1f}s"
    _announce(4, f"search examples and oracle agreement on {agree} orbit reps ({elapsed:.1f}s)")


def _expected_mono_manifest() -> dict:
    """Hand derivation of the monochrome gadget counts from the index sets."""
    k = 9
    pair_count = lambda forb: sum(
        1
        for j1 in range(1, k)
        for j2 in range(j1, k)
        if {residue(j1), residue(j2)} not in forb
    )
    pv = pair_count(({1, 4}, {2, 3}))
    ph = pair_count(({1, 2}, {3, 4}))
    quads = {
        frozenset(c)
        for c in product(*[[j for j in range(1, k) if residue(j) == r] for r in (1, 2, 3, 4)])
    }
    c11, c22 = face_sets(MONO)
    sat_le12 = (pv + ph) * 4
    sat_le34 = (len(quads) - len(c11)) * 2 + (len(quads) - len(c22)) * 2
    flips = 2 * k
    sats = 4 + sat_le12 + sat_le34
    return {
        "SAT_NEQ_HALF": 4,
        "SAT_LE_HALF": sat_le12,
        "SAT_LE_3_4": sat_le34,
        "FLIP": flips,
        "UNIF": 6 + k + 4 * flips + sats,
        "TRIPLE": 6 + k + 4 * flips + sats,
        "UNIF_2": 2 + k + flips + 4,
        "UNIF_3": 2 * flips + sat_le12,
        "UNIF_4": flips,
        "UNIF_105": sat_le34,
        "CYCS": 2,
        "TORI": 1,
        "SW": 1,
        "COL": 1,
        "COLD": 1,
    }


def test_criterion_5_end_to_end_forward_soundness():
    start = time.monotonic()
    cs = compile_ttori(MONO)
    assert system_dumps(cs) == system_dumps(compile_ttori(MONO))  # deterministic bytes
    assert sum(1 for v in cs.all_vars() if v.startswith("W")) == 9  # k = 9
    for key, count in _expected_mono_manifest().items():
        assert cs.manifest[key] == count, key
    til = find_periodic_tiling(MONO, 2)
    joint = build_witness(MONO, til)
    report = verify(joint, cs, tol=1e-6)
    assert report.passed, [(r.tag, r.residual) for r in report.failures[:5]]
    assert report.max_atoms <= 10**7  # locality instrumentation
    elapsed = time.monotonic() - start
    assert elapsed < 600, f"criterion 5 took {elapsed:.1f}s"
    _announce(
        5,
        f"monochrome compile/witness/verify: {len(report.rows)} rows at 1e-6, "
        f"max {report.max_atoms} atoms/row ({elapsed:.1f}s)",
    )


def test_criterion_6_shannon_refuter():
    start = time.monotonic()
    from infotile.expressions import REL_EQ, AffineConstraint, InfoExpr
    from infotile.systems import ConstraintSystem

    rows = [
        AffineConstraint(InfoExpr.entropy(["X1"]), REL_EQ, Fraction(1, 2), "h1"),
        AffineConstraint(InfoExpr.entropy(["X2"]), REL_EQ, Fraction(1), "h2"),
        AffineConstraint(InfoExpr.entropy(["X1", "X2"]), REL_EQ, Fraction(2), "h12"),
    ]
    sas = flatten(ConstraintSystem(["X1", "X2"], [], rows))
    out = refute(sas)
    assert out.status == REFUTED and out.certificate
    replay_rows = [(t, dict(e.terms), Fraction(0)) for t, e in elemental_inequalities(2)]
    replay_rows += [(r.tag, dict(r.entries), r.rhs) for r in sas.rows]
    replay_certificate(replay_rows, out.certificate)  # bit-exact rational replay
    single = flatten(
        ConstraintSystem(
            ["X1"], [], [AffineConstraint(InfoExpr.entropy(["X1"]), REL_EQ, Fraction(1), "h1")]
        )
    )
    assert refute(single).status == UNKNOWN
    elapsed = time.monotonic() - start
    assert elapsed < 5, f"criterion 6 took {elapsed:.1f}s"
    _announce(6, f"refutes with a replayable exact certificate, unknown stays unknown ({elapsed:.2f}s)")


def test_criterion_7_disjointification():
    func_dep = CISystem(
        ["A", "B"],
        [(frozenset({"A"}), frozenset({"A"}), frozenset({"B"}))],
        target=(frozenset({"A"}), frozenset({"B"}), frozenset()),
    )
    out = disjointify(func_dep)
    named = [v for v in out.vars if v[0] in "YZ" and v[1:].isdigit()]
    aux = [v for v in out.vars if v not in named]
    assert len(named) == 12 and len(aux) == 8
    assert out.all_disjoint()
    base = FactoredJoint(
        [uniform_seed("s", 2)],
        [Variable("A", ("s",), np.array([0, 1])), Variable("B", ("s",), np.array([0, 1]))],
    )
    ext = canonical_disjoint_extension(base, ["A", "B"], out)
    rows = [ci_row(a, b, c, f"rel{i}") for i, (a, b, c) in enumerate(out.relations)]
    report = verify(ext, rows, tol=1e-9)
    assert report.passed and report.max_violation <= 1e-9
    _announce(7, "12 named + 8 auxiliary variables, all triples disjoint, extension at 1e-9")


def test_criterion_8_emissions_and_slack():
    start = time.monotonic()
    # a fair-bit-form instance built from the coin/flip block
    b = SystemBuilder(["F", "G1", "G2"])
    b.flip("F", "G1", "G2", "flip")
    flip_cs = b.system()
    ci = to_ci_only(flip_cs)
    for form in ("cond-affine", "affine-subspace"):
        doc = emit_statement(ci, form)
        assert doc["role_var"] == "BIT"
        for entry in doc["a"]:
            total = sum(Fraction(s["coef"]) for s in entry["sources"])
            assert total == Fraction(entry["coef"]), entry["set"]
    sas_flip = flatten(flip_cs)
    doc = emit_statement(sas_flip, "boolean")
    by_tag = {r.tag: r for r in sas_flip.rows}
    assert len(doc["disjuncts"]) == len(sas_flip.rows)
    for d in doc["disjuncts"]:
        src = by_tag[d["source"]]
        assert {frozenset(t["set"]): Fraction(t["coef"]) for t in d["a"]} == {
            vs: -c for vs, c in src.entries
        }
        assert Fraction(d["rhs"]) == -src.rhs

    # slack preservation on the monochrome instance
    til = find_periodic_tiling(MONO, 2)
    joint = build_witness(MONO, til)
    sas = flatten(compile_ttori(MONO))
    slack_sys = slackify(sas)
    extended = extend_witness_for_slack(joint, sas)
    report = verify(extended, slack_sys, tol=1e-6)
    assert report.passed, [(r.tag, r.residual) for r in report.failures[:5]]
    elapsed = time.monotonic() - start
    assert elapsed < 600, f"criterion 8 took {elapsed:.1f}s"
    _announce(8, f"audit trails round-trip; slackified monochrome verifies at 1e-6 ({elapsed:.1f}s)")
