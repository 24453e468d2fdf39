"""Binary linear codes of designs and functions."""

from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels
from .errors import DomainError, SizeGuardError
from .gf2 import Gf2Matrix, rank, row_reduce, unpack_ints
from .incidence import Block, IncidenceStructure, Refutation, incidence_gf2

MAX_ENUM_K = 24


@dataclass(frozen=True)
class BinaryLinearCode:
    """Row space of ``generator``, kept in reduced row echelon form (k x n)."""

    n: int
    k: int
    generator: Gf2Matrix

    def __len__(self):
        return 1 << self.k

    def rows(self):
        return self.generator.row_ints()

    def to_text(self):
        return self.generator.to_text()


def code_from_rows(M):
    red, pivots = row_reduce(M)
    k = len(pivots)
    gen = Gf2Matrix.from_ints(red.row_ints()[:k], M.cols)
    return BinaryLinearCode(M.cols, k, gen)


def code_from_ints(rows, n):
    return code_from_rows(Gf2Matrix.from_ints(rows, n))


def contains(C, word):
    """Membership for a codeword given as an int (bit j = coordinate j)."""
    red, pivots = row_reduce(C.generator)
    x = int(word)
    if x >> C.n:
        return False
    for row, col in zip(red.row_ints(), pivots):
        if x >> col & 1:
            x ^= row
    return x == 0


def codewords(C):
    """All codewords as ints, message order (message bit i selects generator row i)."""
    if C.k > MAX_ENUM_K:
        raise SizeGuardError(f"dimension {C.k} exceeds the enumeration limit {MAX_ENUM_K}")
    words = [0]
    for r in C.rows():
        words += [w ^ r for w in words]
    return words


@dataclass(frozen=True)
class WeightDistribution:
    counts: tuple

    @property
    def total(self):
        return sum(self.counts)

    def nonzero(self):
        return {i: c for i, c in enumerate(self.counts) if c}

    def __str__(self):
        terms = []
        for i, c in self.nonzero().items():
            if i == 0:
                terms.append(str(c))
            else:
                z = "z" if i == 1 else f"z^{i}"
                terms.append(z if c == 1 else f"{c}{z}")
        return " + ".join(terms)


def weight_distribution(C):
    if C.k > MAX_ENUM_K:
        raise SizeGuardError(f"dimension {C.k} exceeds the enumeration limit {MAX_ENUM_K}")
    counts = kernels.weight_distribution(C.generator.data, C.n)
    return WeightDistribution(tuple(int(c) for c in counts))


def krawtchouk(j, i, n):
    return sum((-1) ** s * comb(i, s) * comb(n - i, j - s) for s in range(j + 1))


def macwilliams(wd, n, k):
    """Weight distribution of the dual code from that of a [n, k] code."""
    out = []
    for j in range(n + 1):
        total = sum(a * krawtchouk(j, i, n) for i, a in enumerate(wd.counts) if a)
        if total % (1 << k):
            raise ArithmeticError("MacWilliams transform is not integral; input is not a code distribution")
        out.append(total >> k)
    return WeightDistribution(tuple(out))


def dual(C):
    red_rows = C.rows()
    _, pivots = row_reduce(C.generator)
    pivset = set(pivots)
    basis = []
    for col in range(C.n):
        if col in pivset:
            continue
        v = 1 << col
        for row, p in zip(red_rows, pivots):
            if row >> col & 1:
                v |= 1 << p
        basis.append(v)
    return code_from_ints(basis, C.n)


def dual_weight_distribution(C):
    """Enumerate the dual when small enough, otherwise MacWilliams from C."""
    if C.n - C.k <= MAX_ENUM_K:
        return weight_distribution(dual(C))
    return macwilliams(weight_distribution(C), C.n, C.k)


def gram(C):
    rows = C.rows()
    return Gf2Matrix.from_ints(
        [sum(((a & b).bit_count() & 1) << j for j, b in enumerate(rows)) for a in rows], C.k
    )


def hull_dimension(C):
    return C.k - rank(gram(C))


def is_lcd(C):
    return hull_dimension(C) == 0


def support_design(C, w, labels=None):
    """Supports of the weight-w codewords, one block per codeword.

    Points are the coordinate labels (default 0..n-1); a block's label is the
    message that produced the codeword.
    """
    if C.k > MAX_ENUM_K:
        raise SizeGuardError(f"dimension {C.k} exceeds the enumeration limit {MAX_ENUM_K}")
    labels = list(range(C.n)) if labels is None else [int(x) for x in labels]
    if len(labels) != C.n:
        raise DomainError("need one label per coordinate")
    msgs, words = kernels.codewords_of_weight(C.generator.data, C.n, w)
    if len(msgs) == 0:
        raise DomainError(f"no codeword of weight {w}")
    masks = unpack_ints(words)
    m = max(labels + [1]).bit_length()
    return IncidenceStructure(labels, [Block(int(u), mk) for u, mk in zip(msgs, masks)], m)


def design_code(D):
    """Row span of the v x b incidence matrix; coordinates are the blocks."""
    return code_from_rows(incidence_gf2(D))


def code_from_dset(f):
    """Coordinate functions restricted to D_f (ascending) plus the all-one row."""
    pts = f.support()
    if len(pts) == 0:
        raise DomainError("f is identically zero")
    m = f.m
    rows = []
    for i in range(1, m + 1):
        bits = (pts >> (m - i)) & 1
        rows.append(sum(1 << j for j in np.flatnonzero(bits)))
    rows.append((1 << len(pts)) - 1)
    return code_from_ints(rows, len(pts))


def rm1_rows(m):
    """All-one vector and x_1..x_m over the standard index order."""
    n = 1 << m
    rows = [(1 << n) - 1]
    xs = np.arange(n)
    for i in range(1, m + 1):
        rows.append(sum(1 << int(j) for j in np.flatnonzero((xs >> (m - i)) & 1)))
    return rows


def g_matrix(f):
    """Rows 1, x_1, ..., x_m, f as an (m + 2) x 2^m matrix."""
    n = 1 << f.m
    frow = sum(1 << int(j) for j in f.support())
    return Gf2Matrix.from_ints(rm1_rows(f.m) + [frow], n)


def contains_rm1(C, m):
    if C.n != 1 << m:
        raise DomainError(f"code length {C.n} is not 2^{m}")
    return all(contains(C, r) for r in rm1_rows(m))


def permute_word(word, perm):
    out = 0
    for j, pj in enumerate(perm):
        if word >> j & 1:
            out |= 1 << pj
    return out


def verify_code_equivalence_witness(C1, C2, perm):
    """Coordinate j of C1 goes to coordinate perm[j]; compare row spaces with C2."""
    perm = [int(p) for p in perm]
    if len(perm) != C1.n or sorted(perm) != list(range(C1.n)):
        raise DomainError("permutation is not a bijection on the coordinates")
    if C1.n != C2.n:
        return False
    moved = code_from_ints([permute_word(r, perm) for r in C1.rows()], C1.n)
    return moved == C2


def code_invariants(C):
    yield "length", lambda: C.n
    yield "dimension", lambda: C.k
    yield "weight-distribution", lambda: weight_distribution(C).counts
    yield "hull-dimension", lambda: hull_dimension(C)
    yield "dual-weight-distribution", lambda: dual_weight_distribution(C).counts


def refute_code_equivalence(C1, C2):
    """First differing invariant, or None (which does not prove equivalence)."""
    for (name, a), (_, b) in zip(code_invariants(C1), code_invariants(C2)):
        x, y = a(), b()
        if x != y:
            return Refutation(name, x, y)
    return None
