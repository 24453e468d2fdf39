import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from bentdesign.boolfn import dual_of_bent, parse_function
from bentdesign.codes import (
    BinaryLinearCode,
    code_from_dset,
    code_from_ints,
    code_from_rows,
    codewords,
    contains,
    contains_rm1,
    design_code,
    dual,
    dual_weight_distribution,
    g_matrix,
    hull_dimension,
    is_lcd,
    macwilliams,
    refute_code_equivalence,
    rm1_rows,
    support_design,
    verify_code_equivalence_witness,
    weight_distribution,
)
from bentdesign.constructions import addition_design, mm_bent, quasi_symmetric_design
from bentdesign.equivalence import EaWitness, AffineMap, lift_ea_to_design_iso
from bentdesign.errors import DomainError, SizeGuardError
from bentdesign.gf2 import Gf2Matrix, rank
from bentdesign.incidence import complement, incidence_gf2

PLATEAUED5 = "x1*x3+x2*x4+x1*x2*x5"
PLATEAUED5_SHIFTED = "x1*x3+x2*x4+x1*x2*x5+x1+x2+x3+x4"
BENT4 = parse_function("x1*x2+x3*x4")


@st.composite
def codes(draw, max_n=20, max_rows=8):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_rows))
    return n, rows


def test_code_dimensions():
    D = addition_design(parse_function(PLATEAUED5)).design
    assert code_from_rows(incidence_gf2(D)).k == 7
    assert code_from_rows(Gf2Matrix.zeros(3, 5)).k == 0
    assert code_from_rows(g_matrix(BENT4)).k == 6


def test_weight_distributions():
    C = design_code(addition_design(BENT4).design)
    assert weight_distribution(C).nonzero() == {0: 1, 6: 16, 8: 30, 10: 16, 16: 1}
    assert str(weight_distribution(C)) == "1 + 16z^6 + 30z^8 + 16z^10 + z^16"
    rep = code_from_ints([0b11111], 5)
    assert weight_distribution(rep).nonzero() == {0: 1, 5: 1}
    rm12 = code_from_ints(rm1_rows(2), 4)
    assert weight_distribution(rm12).nonzero() == {0: 1, 2: 6, 4: 1}


@given(codes())
def test_weight_distribution_matches_span(nr):
    n, rows = nr
    C = code_from_ints(rows, n)
    wd = weight_distribution(C)
    assert list(wd.counts) == oracles.weight_counts(rows, n)
    assert wd.counts[0] == 1 and wd.total == 1 << C.k
    assert C.k == oracles.rank(rows)
    assert set(codewords(C)) == oracles.span(rows)


@given(codes(max_n=14))
def test_macwilliams_matches_enumerated_dual(nr):
    n, rows = nr
    C = code_from_ints(rows, n)
    assert macwilliams(weight_distribution(C), n, C.k) == weight_distribution(dual(C))


@given(codes(max_n=14))
def test_dual_is_orthogonal_complement(nr):
    n, rows = nr
    C = code_from_ints(rows, n)
    Dl = dual(C)
    assert Dl.k == n - C.k
    assert all(oracles.dot(a, b) == 0 for a in C.rows() for b in Dl.rows())
    hull = oracles.span(C.rows()) & oracles.span(Dl.rows())
    assert 1 << hull_dimension(C) == len(hull)


def test_dual_and_hull():
    full = code_from_ints([1, 2, 4, 8], 4)
    assert dual(full).k == 0 and is_lcd(full)
    so = code_from_ints([0b1111], 4)
    assert hull_dimension(so) == 1 and not is_lcd(so)
    ham = code_from_ints([0b1101000, 0b0110100, 0b0011010, 0b0001101], 7)
    assert hull_dimension(ham) == 3 and not is_lcd(ham)


def test_large_dual_uses_macwilliams():
    C = design_code(addition_design(parse_function(PLATEAUED5)).design)
    assert C.n - C.k > 24
    with pytest.raises(SizeGuardError):
        weight_distribution(dual(C))
    dwd = dual_weight_distribution(C)
    assert dwd.total == 1 << (C.n - C.k)
    assert macwilliams(dwd, C.n, C.n - C.k) == weight_distribution(C)


def test_support_designs_of_bent_code():
    f = BENT4
    AD = addition_design(f).design
    C = design_code(AD)
    labels = [blk.label for blk in AD.blocks]
    target = addition_design(dual_of_bent(f)).design
    assert support_design(C, 6, labels).same_blockset(target)
    assert support_design(C, 10, labels).same_blockset(complement(target))
    top = support_design(C, 16, labels)
    assert top.b == 1 and len(top.block_points(0)) == 16
    with pytest.raises(DomainError):
        support_design(C, 7, labels)


def test_support_design_of_dset_code():
    C = code_from_dset(BENT4)
    pts = BENT4.support()
    assert support_design(C, 4, pts).same_blockset(quasi_symmetric_design(BENT4).design)


def test_code_from_dset():
    assert code_from_dset(parse_function(PLATEAUED5)).n == 12
    assert code_from_dset(parse_function(PLATEAUED5_SHIFTED)).n == 16
    C = code_from_dset(BENT4)
    assert (C.n, C.k) == (6, 5)
    mono = code_from_dset(parse_function("x1*x2*x3*x4"))
    assert (mono.n, mono.k) == (1, 1)


def test_g_matrix():
    assert rank(g_matrix(parse_function("x1+x3", 4))) == 5
    f = parse_function(PLATEAUED5)
    assert rank(g_matrix(f)) == 7
    assert code_from_rows(g_matrix(f)) == design_code(addition_design(f).design)
    assert rank(g_matrix(parse_function("x1*x2", 2))) == 4


def test_rm1_containment():
    C = design_code(addition_design(parse_function(PLATEAUED5)).design)
    assert contains_rm1(C, 5)
    assert contains_rm1(code_from_ints(rm1_rows(3), 8), 3)
    assert not contains_rm1(code_from_ints([], 8), 3)
    assert contains(C, 0)


def test_code_equivalence():
    C = code_from_ints([0b0011, 0b0110], 4)
    assert verify_code_equivalence_witness(C, C, [0, 1, 2, 3])
    assert not verify_code_equivalence_witness(C, C, [0, 3, 2, 1])
    with pytest.raises(DomainError):
        verify_code_equivalence_witness(C, C, [0, 0, 1, 2])
    f, g = parse_function(PLATEAUED5), parse_function(PLATEAUED5_SHIFTED)
    r = refute_code_equivalence(code_from_dset(f), code_from_dset(g))
    assert (r.invariant, r.left, r.right) == ("length", 12, 16)
    Cf = design_code(addition_design(f).design)
    Cg = design_code(addition_design(g).design)
    assert refute_code_equivalence(Cf, Cg) is None


def test_lifted_code_permutation():
    f, g = parse_function(PLATEAUED5), parse_function(PLATEAUED5_SHIFTED)
    w = EaWitness(AffineMap.identity(5), 0b11110, 0)
    lift = lift_ea_to_design_iso(f, g, w)
    D1, D2 = addition_design(f).design, addition_design(g).design
    perm = lift.coordinate_permutation([b.label for b in D1.blocks], [b.label for b in D2.blocks])
    assert verify_code_equivalence_witness(design_code(D1), design_code(D2), perm)


def test_enumeration_guard():
    C = BinaryLinearCode(30, 25, Gf2Matrix.from_ints([1 << i for i in range(25)], 30))
    with pytest.raises(SizeGuardError):
        weight_distribution(C)
    with pytest.raises(SizeGuardError):
        codewords(C)


def test_m6_bent_code_weights():
    f = mm_bent(3, [0, 3, 5, 6, 1, 2, 4, 7], parse_function("x1*x2*x3", 3))
    C = design_code(addition_design(f).design)
    assert weight_distribution(C).nonzero() == {0: 1, 28: 64, 32: 126, 36: 64, 64: 1}
    counts = np.array(weight_distribution(C).counts)
    assert counts.sum() == 256
