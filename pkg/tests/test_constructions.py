from itertools import combinations

import numpy as np
import pytest

import oracles
from bentdesign.boolfn import BooleanFunction, classify_plateaued, dual_of_bent, is_bent, parse_function, to_anf
from bentdesign.codes import code_from_ints
from bentdesign.constructions import (
    addition_design,
    addition_design_bent,
    lcd_design,
    mm_bent,
    polarization_design,
    pow2,
    qs_intersection,
    quasi_symmetric_design,
    sum_pair_design,
    trace_bilinear_bent,
    translation_design,
)
from bentdesign.errors import DomainError
from bentdesign.gf2 import Gf2Field
from bentdesign.incidence import intersection_profile, is_simple, is_symmetric, refute_isomorphism, two_rank

BENT4 = parse_function("x1*x2+x3*x4")
PLATEAUED5 = "x1*x3+x2*x4+x1*x2*x5"


def sets(D):
    return [frozenset(D.block_points(i)) for i in range(D.b)]


def brute_params(D):
    return oracles.design_params(D.points, sets(D))


def test_pow2_rejects_odd():
    assert pow2(6) == 8
    with pytest.raises(DomainError):
        pow2(3)


def test_addition_plateaued():
    rep = addition_design(parse_function(PLATEAUED5))
    assert rep.matches and rep.notes == {"r": 1}
    assert rep.observed.as_tuple() == (16, 6, 4, 32, 12)
    assert is_simple(rep.design)


def test_addition_bent_is_symmetric_with_lambda_two():
    # a symmetric 2-(16,6,lambda) forces lambda(v-1) = k(k-1), so lambda = 2
    rep = addition_design(BENT4)
    assert rep.observed.as_tuple() == (16, 6, 2, 16, 6)
    assert brute_params(rep.design) == (16, 6, 2, 16, 6)
    assert is_symmetric(rep.design)


def test_addition_linear_structure_not_simple():
    f = parse_function("x1*x2", 3)
    rep = addition_design(f)
    assert rep.notes["r"] == 1
    assert rep.observed.as_tuple() == (4, 1, 0, 8, 2)
    assert rep.to_dict()["degenerate"]
    assert not is_simple(rep.design)


def test_addition_rejects_affine_and_nonplateaued():
    with pytest.raises(DomainError):
        addition_design(parse_function("x1+x2", 3))
    with pytest.raises(DomainError):
        addition_design(parse_function("x1*x2*x3"))


def test_addition_bent_variants():
    rep = addition_design_bent(parse_function("x1*x2"))
    assert rep.observed.as_tuple() == (4, 1, 0, 4, 1) and rep.matches
    f = BENT4
    a = addition_design_bent(f).design
    b = addition_design(dual_of_bent(f)).design
    assert [blk.label for blk in a.blocks] == [blk.label for blk in b.blocks]
    assert sets(a) == sets(b)
    f6 = mm_bent(3, [0, 3, 5, 6, 1, 2, 4, 7])
    assert addition_design_bent(f6).observed.as_tuple() == (64, 28, 12, 64, 28)


def test_translation():
    f6 = mm_bent(3, list(range(8)))
    rep = translation_design(f6)
    assert rep.observed.as_tuple() == (64, 28, 12, 64, 28) and rep.notes["dual_at_zero"] == 0
    f8 = mm_bent(4, list(range(16)), parse_function("x1*x2*x3*x4", 4))
    assert translation_design(f8).matches
    with pytest.raises(DomainError, match="only when f is bent"):
        translation_design(parse_function(PLATEAUED5))


def test_translation_with_dual_one_at_zero():
    f = parse_function("x1*x2+x3*x4+x1+x2")
    rep = translation_design(f)
    assert rep.matches and rep.observed.k == 10
    assert brute_params(rep.design) == rep.observed.as_tuple()


def test_quasi_symmetric_m4():
    rep = quasi_symmetric_design(BENT4)
    D = rep.design
    assert rep.observed.as_tuple() == (6, 4, 6, 15, 10)
    sizes = {len(a & b) for a, b in combinations(sets(D), 2)}
    assert sizes == {2, 3}
    assert intersection_profile(D).is_quasi_symmetric
    assert two_rank(D) == 5


def test_quasi_symmetric_m6():
    f = mm_bent(3, list(range(8)))
    rep = quasi_symmetric_design(f)
    assert rep.observed.as_tuple() == (28, 16, 20, 63, 36)
    assert brute_params(rep.design) == (28, 16, 20, 63, 36)
    assert two_rank(rep.design) == 7


def test_quasi_symmetric_dual_one_at_zero():
    f = parse_function("x1*x2+x3*x4+x1+x2")
    assert dual_of_bent(f)(0) == 1
    rep = quasi_symmetric_design(f)
    assert rep.observed.v == 10 == f.weight
    assert rep.observed.as_tuple() == (10, 6, 5, 15, 9)


@pytest.mark.parametrize("f", [BENT4, parse_function("x1*x2+x3*x4+x1+x2"), mm_bent(3, [0, 3, 5, 6, 1, 2, 4, 7])])
def test_quasi_symmetric_intersection_formula(f):
    D = quasi_symmetric_design(f).design
    S = sets(D)
    labels = [blk.label for blk in D.blocks]
    for i, j in combinations(range(D.b), 2):
        assert len(S[i] & S[j]) == qs_intersection(f, labels[i], labels[j])


def test_lcd():
    assert lcd_design(code_from_ints([1, 2, 4, 8], 4)).observed.as_tuple() == (15, 8, 4, 15, 8)
    assert lcd_design(code_from_ints([1, 2, 4], 3)).observed.as_tuple() == (7, 4, 2, 7, 4)
    with pytest.raises(DomainError):
        lcd_design(code_from_ints([0b1111], 4))


def test_polarization():
    assert polarization_design(BENT4).observed.as_tuple() == (15, 8, 4, 15, 8)
    assert polarization_design(BENT4 + 1).observed.as_tuple() == (15, 7, 3, 15, 7)
    f6 = mm_bent(3, list(range(8)))
    assert polarization_design(f6).observed.as_tuple() == (63, 32, 16, 63, 32)


def test_lcd_vs_cubic_polarization_not_refuted():
    # the cubic case shares every computed invariant with the LCD design
    L = lcd_design(code_from_ints([1 << i for i in range(6)], 6))
    cubic = mm_bent(3, list(range(8)), parse_function("x1*x2*x3", 3))
    P = polarization_design(cubic)
    assert L.observed == P.observed
    assert refute_isomorphism(L.design, P.design) is None


def test_sum_pair_preconditions():
    g = mm_bent(2, [0, 1, 2, 3])
    with pytest.raises(DomainError, match="g \\+ h is not bent"):
        sum_pair_design(g, g)
    h = parse_function("x4+x1*x3+x1*x4+x2*x3+x3*x4")
    assert is_bent(h) and is_bent(g + h)
    with pytest.raises(DomainError, match="\\(g\\+h\\)\\* != g\\* \\+ h\\*"):
        sum_pair_design(g, h)


def test_mm_bent():
    f = mm_bent(3, list(range(8)))
    assert str(to_anf(f)) == "x1*x4+x2*x5+x3*x6"
    with pytest.raises(DomainError):
        mm_bent(2, [0, 0, 1, 2])


def test_trace_pair():
    F = Gf2Field()
    g = trace_bilinear_bent(F, 1, 14)
    h = trace_bilinear_bent(F, F.alpha, 14)
    assert is_bent(g) and is_bent(h) and is_bent(g + h)
    rep = sum_pair_design(g, h)
    assert rep.observed.as_tuple() == (256, 120, 56, 256, 120)
    assert two_rank(rep.design) == 30
    with pytest.raises(DomainError):
        trace_bilinear_bent(F, 0, 14)
    with pytest.raises(DomainError):
        trace_bilinear_bent(F, 1, 3)


def test_trace_definition():
    F = Gf2Field()
    g = trace_bilinear_bent(F, 1, 14)
    mod = 0b10011
    for x1 in range(16):
        for x2 in range(16):
            p = 1
            for _ in range(14):
                p = oracles.gf_mul(p, x2, mod, 4)
            y = oracles.gf_mul(x1, p, mod, 4)
            t, z = 0, y
            for _ in range(4):
                t ^= z
                z = oracles.gf_mul(z, z, mod, 4)
            assert g((x1 << 4) | x2) == t


def test_reports_always_match_on_random_plateaued():
    rng = np.random.default_rng(7)
    for _ in range(25):
        k = int(rng.integers(1, 4))
        f = mm_bent(k, rng.permutation(1 << k), BooleanFunction(k, rng.integers(0, 2, 1 << k)))
        for build in (addition_design, addition_design_bent, translation_design, polarization_design):
            rep = build(f)
            assert rep.matches, (build.__name__, f)
        if f.m >= 4:
            assert quasi_symmetric_design(f).matches
        padded = BooleanFunction(f.m + 1, np.repeat(f.table, 2))
        assert classify_plateaued(padded).r == 1
        assert addition_design(padded).matches
