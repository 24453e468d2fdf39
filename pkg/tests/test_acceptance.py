"""One test per acceptance criterion.

Each test runs the packaged regression group (the same code behind
``bentdesign examples``) and, where affordable, re-derives the headline
numbers with the slow reference oracles in ``oracles.py``.
"""

import pytest

import oracles
from bentdesign import suite
from bentdesign.boolfn import dual_of_bent, parse_function
from bentdesign.codes import code_from_ints, design_code
from bentdesign.constructions import (
    addition_design,
    lcd_design,
    mm_bent,
    polarization_design,
    quasi_symmetric_design,
    sum_pair_design,
    trace_bilinear_bent,
    translation_design,
)
from bentdesign.equivalence import AffineMap, EaWitness, bilinear_polarization, lift_ea_to_design_iso
from bentdesign.gf2 import Gf2Field


def sets(D):
    return [frozenset(D.block_points(i)) for i in range(D.b)]


def run_group(key, log):
    res = suite.run_criterion(key)
    log.append(suite.format_line(res))
    failed = [f"{c.name}: {c.detail}" for c in res.checks if not c.ok]
    assert res.error is None, res.error
    assert not failed, failed
    assert res.within_budget, f"{res.seconds:.2f}s over the {res.budget}s budget"
    return res


def test_plateaued_pipeline(acceptance_log):
    run_group("plateaued-pipeline", acceptance_log)
    D = addition_design(parse_function("x1*x3+x2*x4+x1*x2*x5")).design
    S = sets(D)
    assert oracles.design_params(D.points, S) == (16, 6, 4, 32, 12)
    assert oracles.sdp_holds(D.points, S, 3)
    assert not oracles.sdp_holds(D.points, S, 2)
    assert set(S[0] ^ S[1]) == {0b00111, 0b01111, 0b10111, 0b11111}
    assert oracles.rank([blk.mask for blk in D.blocks]) == 7


def _bent_cases():
    return [
        (4, mm_bent(2, [0, 1, 2, 3])),
        (6, mm_bent(3, [0, 3, 5, 6, 1, 2, 4, 7], parse_function("x1*x2*x3", 3))),
    ]


def test_bent_code_weights(acceptance_log):
    run_group("bent-code-weights", acceptance_log)
    for m, f in _bent_cases():
        C = design_code(addition_design(f).design)
        counts = oracles.weight_counts(C.rows(), C.n)
        h = 1 << (m // 2 - 1)
        want = {0: 1, (1 << (m - 1)) - h: 1 << m, 1 << (m - 1): (1 << (m + 1)) - 2, (1 << (m - 1)) + h: 1 << m, 1 << m: 1}
        assert {w: c for w, c in enumerate(counts) if c} == want


def test_bent_support_designs(acceptance_log):
    run_group("bent-support-designs", acceptance_log)
    for m, f in _bent_cases():
        AD = addition_design(f).design
        C = design_code(AD)
        labels = [blk.label for blk in AD.blocks]
        low = (1 << (m - 1)) - (1 << (m // 2 - 1))
        supports = sorted(
            sorted(frozenset(labels[j] for j in range(C.n) if w >> j & 1))
            for w in oracles.span(C.rows())
            if bin(w).count("1") == low
        )
        target = sorted(sorted(s) for s in sets(addition_design(dual_of_bent(f)).design))
        assert supports == target


def test_quasi_symmetric(acceptance_log):
    run_group("quasi-symmetric", acceptance_log)
    D = quasi_symmetric_design(parse_function("x1*x2+x3*x4")).design
    S = sets(D)
    assert oracles.design_params(D.points, S) == (6, 4, 6, 15, 10)
    assert {len(S[i] & S[j]) for i in range(15) for j in range(i + 1, 15)} == {2, 3}
    assert oracles.rank([blk.mask for blk in D.blocks]) == 5


def test_translation_tsdp(acceptance_log):
    run_group("translation-tsdp", acceptance_log)
    ranks = []
    for g in ["0", "x1*x2*x3", "x1*x2*x3*x4"]:
        D = translation_design(mm_bent(4, list(range(16)), parse_function(g, 4))).design
        ranks.append(oracles.rank([blk.mask for blk in D.blocks]))
    assert ranks[:2] == [10, 10] and ranks[2] > 10


def test_trace_pair(acceptance_log):
    run_group("trace-pair", acceptance_log)
    F = Gf2Field()
    g, h = trace_bilinear_bent(F, 1, 14), trace_bilinear_bent(F, F.alpha, 14)
    D = sum_pair_design(g, h).design
    assert oracles.rank([blk.mask for blk in D.blocks]) == 30
    assert set(len(s) for s in sets(D)) == {120}


def test_automorphism_order(acceptance_log):
    run_group("automorphism-order", acceptance_log)
    f = parse_function("x1*x2+x3*x4")
    assert oracles.count_affine_stabilizer(f.table.tolist(), 4, 0) == 11520
    assert oracles.symplectic_count(4) * 16 == 11520


def test_half_swap(acceptance_log):
    run_group("half-swap", acceptance_log)
    f = mm_bent(3, list(range(8)))
    fs = dual_of_bent(f)
    pi = bilinear_polarization(f)
    for x in range(64):
        for b in range(64):
            assert f(x) ^ fs(pi(b)) ^ oracles.dot(x, pi(b)) == f(x ^ b)


def test_lcd_polarization(acceptance_log):
    run_group("lcd-polarization", acceptance_log)
    L = lcd_design(code_from_ints([1, 2, 4, 8], 4)).design
    P = polarization_design(parse_function("x1*x2+x3*x4")).design
    assert oracles.design_params(L.points, sets(L)) == (15, 8, 4, 15, 8)
    assert oracles.design_params(P.points, sets(P)) == (15, 8, 4, 15, 8)


def test_ea_lift_chain(acceptance_log):
    run_group("ea-lift-chain", acceptance_log)
    f = parse_function("x1*x3+x2*x4+x1*x2*x5")
    g = parse_function("x1*x3+x2*x4+x1*x2*x5+x1+x2+x3+x4")
    lift = lift_ea_to_design_iso(f, g, EaWitness(AffineMap.identity(5), 0b11110, 0))
    D1, D2 = addition_design(f).design, addition_design(g).design
    by_label = {blk.label: s for blk, s in zip(D2.blocks, sets(D2))}
    for blk, s in zip(D1.blocks, sets(D1)):
        assert frozenset(lift.point_map[p] for p in s) == by_label[lift.block_map[blk.label]]


def test_property_suites(acceptance_log):
    run_group("property-suites", acceptance_log)


def test_every_criterion_has_a_test():
    tested = {
        "plateaued-pipeline", "bent-code-weights", "bent-support-designs", "quasi-symmetric",
        "translation-tsdp", "trace-pair", "automorphism-order", "half-swap",
        "lcd-polarization", "ea-lift-chain", "property-suites",
    }
    assert tested == set(suite.KEYS) and len(suite.KEYS) == 11
