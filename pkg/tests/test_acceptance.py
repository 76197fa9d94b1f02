"""Acceptance suite: one criterion per test, one printed verdict line each.

Every check is exact (no floating point in any verdict) and the timed
criteria assert their stated budgets.  Run with ``pytest -v`` for the
per-criterion pass/fail listing, or with ``-s`` to see the printed lines.
"""

import random
import time
from fractions import Fraction

from hnnlab import biauto, comb, hnn, isom, quat
from hnnlab.comb import dehn_reduce, evaluate_word, genus_from_index
from hnnlab.exact import ProjMat, QuadExt


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {detail}")
    assert ok, f"criterion {num}: {detail}"


GROUP = hnn.load_builtin_group()


def test_criterion_01_relations_and_mutants():
    t0 = time.perf_counter()
    report = GROUP.verify_presentation()
    elapsed = time.perf_counter() - t0
    ok = (
        all(rc.holds for rc in report.relations)
        and len(report.relations) == 27
        and report.mutants_detected == report.mutants_total == 27
        and elapsed < 1.0
    )
    _report(
        1,
        ok,
        f"27/27 relations hold, {report.mutants_detected}/27 single-letter "
        f"mutants rejected ({elapsed:.2f}s)",
    )


def test_criterion_02_indices_both_routes():
    t0 = time.perf_counter()
    source_words = [GROUP.vertex.parse(u) for u, _ in GROUP.pairs]
    target_words = [GROUP.vertex.parse(v) for _, v in GROUP.pairs]
    tc_source = comb.todd_coxeter(GROUP.vertex, source_words)
    tc_target = comb.todd_coxeter(GROUP.vertex, target_words)
    sch_source = GROUP.schreier_graph("source")
    sch_target = GROUP.schreier_graph("target")
    elapsed = time.perf_counter() - t0
    ok = (
        tc_source.index == 12
        and tc_target.index == 12
        and sch_source.table == tc_source.table
        and sch_target.table == tc_target.table
        and sch_source.representatives == tc_source.representatives
        and sch_target.representatives == tc_target.representatives
        and elapsed < 5.0
    )
    _report(
        2,
        ok,
        f"indices {tc_source.index}/{tc_target.index}, coset tables from "
        f"enumeration and from arithmetic membership are identical "
        f"({elapsed:.2f}s)",
    )


def test_criterion_03_tree_degree():
    neighbors = GROUP.tree_neighbors()
    distinct = len(set(neighbors)) == 24
    distances = all(GROUP.tree_distance(w) == 1 for w in neighbors)
    halves = (GROUP.source_table.index, GROUP.target_table.index)
    ok = len(neighbors) == 24 and distinct and distances and halves == (12, 12)
    _report(3, ok, f"base vertex degree 24 = {halves[0]} + {halves[1]}")


def test_criterion_04_elliptic_stable_letter():
    m = GROUP.evaluate("t")
    trace_ok = m.trace() == QuadExt.rational(2, Fraction(2, 3))
    kind = isom.classify(m)
    power = m
    powers_ok = True
    for _ in range(2, 121):
        power = power * m
        if power.is_identity():
            powers_ok = False
            break
    ok = trace_ok and isinstance(kind, isom.EllipticInfinite) and powers_ok
    _report(
        4,
        ok,
        "trace 2/3 exactly, elliptic of infinite order, no power up to 120 "
        "is projectively trivial",
    )


def test_criterion_05_translation_lengths():
    la = isom.translation_length(GROUP.evaluate("a"))
    lc = isom.translation_length(GROUP.evaluate("c"))
    verdict = isom.length_ratio_independent(la, lc, 100)
    ok = (
        la == isom.TransLength(Fraction(3, 2), Fraction(1, 2), 5)
        and lc == isom.TransLength(Fraction(5, 2), Fraction(1, 2), 21)
        and isinstance(verdict, isom.IndependentCertified)
        and verdict.bound == 100
    )
    _report(
        5,
        ok,
        f"lambda(a) = {la.multiplier_str()}, lambda(c) = {lc.multiplier_str()},"
        " ratio certified independent to bound 100, zero tolerance",
    )


def test_criterion_06_first_homology_rank():
    structure = comb.abelianization(GROUP.ambient)
    ok = structure.betti == 1
    _report(
        6,
        ok,
        f"ambient abelianization {structure} (free rank {structure.betti},"
        f" torsion from Smith form {list(structure.torsion)})",
    )


def test_criterion_07_word_problem_agreement():
    rng = random.Random(7)
    identity = ProjMat.identity(2)
    images = GROUP.images[:4]
    relator = GROUP.vertex.relators[0]
    t0 = time.perf_counter()
    agree = 0
    total = 1000
    for i in range(total):
        if i % 5 < 3:
            word = tuple(
                rng.choice((1, -1)) * rng.randrange(1, 5)
                for _ in range(rng.randrange(1, 41))
            )
        else:
            cut = rng.randrange(len(relator))
            core = relator[cut:] + relator[:cut]
            if rng.random() < 0.5:
                core = comb.invert_word(core)
            conj = tuple(
                rng.choice((1, -1)) * rng.randrange(1, 5)
                for _ in range(rng.randrange(0, 17))
            )
            word = conj + core + comb.invert_word(conj)
        by_dehn = dehn_reduce(word, GROUP.vertex) == ()
        by_matrix = evaluate_word(word, images, identity).is_identity()
        if by_dehn == by_matrix:
            agree += 1
    elapsed = time.perf_counter() - t0
    ok = agree == total and elapsed < 10.0
    _report(
        7,
        ok,
        f"Dehn-triviality == matrix-triviality on {agree}/{total} words of "
        f"length <= 40 ({elapsed:.2f}s, seed 7)",
    )


def test_criterion_08_britton_pinch_round_trips():
    rng = random.Random(8)
    target_words = [GROUP.vertex.parse(v) for _, v in GROUP.pairs]
    ok_count = 0
    total = 200
    for _ in range(total):
        parts = []
        for _ in range(rng.randrange(1, 13)):
            w = rng.choice(target_words)
            parts.append(w if rng.random() < 0.5 else comb.invert_word(w))
        v_word = comb.free_reduce([g for part in parts for g in part])
        pinched = (-hnn.T_LETTER,) + tuple(v_word) + (hnn.T_LETTER,)
        form = GROUP.britton_reduce(pinched)
        if form.t_count == 0 and GROUP.evaluate(form.to_word()) == GROUP.evaluate(
            pinched
        ):
            ok_count += 1
    ok = ok_count == total
    _report(
        8,
        ok,
        f"{ok_count}/{total} pinches of products of <= 12 edge generators "
        "reduce to t-free words with matching matrices (seed 8)",
    )


def test_criterion_09_order_discriminant():
    max_disc = quat.gram_reduced_discriminant(quat.standard_order().basis)
    control = quat.gram_reduced_discriminant(quat.lipschitz_like_order().basis)
    ramified = quat.ramified_primes(2, 13)
    product = 1
    for p in ramified:
        product *= p
    ok = max_disc == product and ramified == [2, 13] and control == 104
    _report(
        9,
        ok,
        f"closure order discriminant {max_disc} = product of ramified primes "
        f"{ramified}; naive lattice control gives {control}",
    )


def test_criterion_10_genus_arithmetic():
    genus = genus_from_index(2, 12)
    vertex = comb.abelianization(GROUP.vertex)
    ok = genus == 13 and vertex.betti == 4 and vertex.torsion == ()
    _report(
        10,
        ok,
        f"index-12 subgroup of the genus-2 group has genus {genus}; vertex "
        f"abelianization {vertex}",
    )


def test_criterion_11_windowed_automatic_structure():
    model = biauto.z2_model()
    zetas = []
    bounds = []
    for radius in range(3, 9):
        lang = biauto.WindowedLanguage(biauto.z2_normal_form_fsa(), model, radius)
        fin = lang.check_finite_to_one()
        fel = lang.check_fellow_traveller("classical", cap=2)
        bounds.append(fin.bound)
        zetas.append(fel.zeta)
    lang8 = biauto.WindowedLanguage(biauto.z2_normal_form_fsa(), model, 8)
    rng = random.Random(11)
    pool = [g for g in lang8.ball.elements_of_norm_at_most(3) if g != (0, 0)]
    sample = rng.sample(pool, 20)
    tau_ok = all(
        (lambda est: est.stabilized
         and est.value == Fraction(abs(g[0]) + abs(g[1])))(
            lang8.tau_estimate(g, max_power=4)
        )
        for g in sample
    )
    adv = biauto.WindowedLanguage(biauto.z2_parity_fsa(), model, 6)
    bad = adv.check_fellow_traveller("classical", cap=2)
    replayed = biauto.replay_fellow_witness(bad.witness, model)
    ok = (
        bounds == [1] * 6
        and zetas == [2] * 6
        and tau_ok
        and not bad.ok
        and replayed == bad.witness.separation
        and bad.zeta > 2
    )
    _report(
        11,
        ok,
        f"normal forms: N=1 and zeta=2 at radii 3..8; stable lengths exact "
        f"and rational on 20 sampled elements; adversarial language rejected "
        f"(zeta={bad.zeta}, witness replays to {replayed})",
    )
