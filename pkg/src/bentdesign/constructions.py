"""Design constructions from bent and plateaued functions, checked on emission."""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .boolfn import BooleanFunction, classify_plateaued, dual_of_bent, is_bent, parity
from .errors import DomainError, SizeGuardError
from .incidence import DesignParams, design_check, from_rows

MAX_BUILD_M = 8


def pow2(e2, what="exponent"):
    """2^(e2/2) for an even integer e2; fractional exponents are a bug upstream."""
    if e2 % 2 or e2 < 0:
        raise DomainError(f"{what} {e2}/2 is not a non-negative integer")
    return 1 << (e2 // 2)


@lru_cache(maxsize=None)
def _dot(m):
    xs = np.arange(1 << m)
    d = parity(xs[:, None] & xs[None, :])
    d.setflags(write=False)
    return d


@dataclass(frozen=True)
class ConstructionReport:
    tag: str
    design: object
    expected: DesignParams
    observed: DesignParams | None
    notes: dict = field(default_factory=dict)
    failure: str | None = None

    @property
    def matches(self):
        return self.observed is not None and self.observed == self.expected

    def to_dict(self):
        return {
            "construction": self.tag,
            "expected": self.expected.to_dict(),
            "observed": self.observed.to_dict() if self.observed else None,
            "matches": self.matches,
            "degenerate": self.expected.lam == 0,
            "failure": self.failure,
            "notes": self.notes,
        }


def _guard(f):
    if f.m > MAX_BUILD_M:
        raise SizeGuardError(f"design builds are limited to m <= {MAX_BUILD_M}")


def _report(tag, design, expected, notes):
    verdict = design_check(design)
    return ConstructionReport(tag, design, expected, verdict.params, notes, verdict.reason)


def _require_bent(f, name="f"):
    if not is_bent(f):
        raise DomainError(f"{name} is not bent")
    return dual_of_bent(f)


def addition_design(f):
    """Points S_f, blocks b·x + f(b) + g(x) for every b, g the Walsh sign function."""
    _guard(f)
    prof = classify_plateaued(f)
    if prof is None:
        raise DomainError("f is not plateaued")
    if prof.is_affine:
        raise DomainError("f is affine (r = m); the Walsh support is a single point")
    m, r = f.m, prof.r
    P = np.array(prof.support, dtype=np.int64)
    g = np.array(prof.sign, dtype=np.uint8)
    bs = np.arange(1 << m)
    rows = _dot(m)[:, P] ^ f.table[bs][:, None] ^ g[None, :]
    D = from_rows(P, bs, rows, m)
    expected = DesignParams(
        v=1 << (m - r),
        k=(1 << (m - r - 1)) - pow2(m - r - 2),
        lam=(1 << (m - 2)) - pow2(m + r - 2),
        b=1 << m,
        r=(1 << (m - 1)) - pow2(m + r - 2),
    )
    return _report("addition", D, expected, {"r": r})


def addition_design_bent(f):
    """Points F_2^m, blocks b·x + f*(b) + f(x)."""
    _guard(f)
    fs = _require_bent(f)
    m = f.m
    xs = np.arange(1 << m)
    rows = _dot(m) ^ fs.table[:, None] ^ f.table[None, :]
    D = from_rows(xs, xs, rows, m)
    k = (1 << (m - 1)) - pow2(m - 2)
    expected = DesignParams(1 << m, k, (1 << (m - 2)) - pow2(m - 2), 1 << m, k)
    return _report("addition-bent", D, expected, {})


def translation_design(f):
    """Points F_2^m, blocks {p : f(p + b) = 1}."""
    _guard(f)
    prof = classify_plateaued(f)
    if prof is None or not prof.is_bent:
        if prof is not None:
            raise DomainError(
                f"f is {prof.r}-plateaued but not bent: translation blocks f(x+b) give a "
                "2-design only when f is bent, or trivially when f is affine or constant"
            )
        raise DomainError("f is not bent")
    m = f.m
    xs = np.arange(1 << m)
    rows = f.table[xs[:, None] ^ xs[None, :]]
    D = from_rows(xs, xs, rows, m)
    s = 1 - 2 * prof.sign[0]
    k = (1 << (m - 1)) - s * pow2(m - 2)
    expected = DesignParams(1 << m, k, (1 << (m - 2)) - s * pow2(m - 2), 1 << m, k)
    return _report("translation", D, expected, {"dual_at_zero": prof.sign[0]})


def quasi_symmetric_design(f):
    """Points D_f, blocks b·x + f*(b) for b != 0."""
    _guard(f)
    fs = _require_bent(f)
    m = f.m
    if m < 4:
        raise DomainError("needs m >= 4")
    P = f.support()
    bs = np.arange(1, 1 << m)
    rows = _dot(m)[np.ix_(bs, P)] ^ fs.table[bs][:, None]
    D = from_rows(P, bs, rows, m)
    s = 1 - 2 * int(fs(0))
    v = (1 << (m - 1)) - s * pow2(m - 2)
    k = (1 << (m - 2)) - pow2(m - 4) * (s - 1)
    lam = (1 << (m - 2)) + pow2(m - 2) + (s - 1) // 2
    b = (1 << m) - 1
    expected = DesignParams(v, k, lam, b, b * k // v)
    return _report("quasi", D, expected, {"dual_at_zero": int(fs(0))})


def qs_intersection(f, a, b):
    """Closed-form intersection of blocks a and b (both nonzero, distinct) in D_f."""
    fs = dual_of_bent(f)
    m = f.m
    s = 1 - 2 * fs(0)
    t = 1 - 2 * (fs(a) ^ fs(b) ^ fs(a ^ b))
    eight = (1 << m) + pow2(m + 2) - pow2(m) * (s + t)
    return eight // 8


def code_label(word, n):
    """Codeword int (column j at bit j) to a label with column 0 as the most significant bit."""
    out = 0
    for j in range(n):
        if word >> j & 1:
            out |= 1 << (n - 1 - j)
    return out


def lcd_design(C):
    """Points C*, blocks {p in C* : b·p = 1} for b in C*."""
    from .codes import codewords, is_lcd

    if not is_lcd(C):
        raise DomainError("code is not LCD")
    if C.k < 3:
        raise DomainError("needs |C| >= 8")
    if C.k > 12:
        raise SizeGuardError("lcd_design is limited to dimension <= 12")
    pts = sorted(code_label(w, C.n) for w in codewords(C) if w)
    rows = np.array([[(a & p).bit_count() & 1 for p in pts] for a in pts], dtype=np.uint8)
    D = from_rows(pts, pts, rows, C.n)
    size = 1 << C.k
    expected = DesignParams(size - 1, size // 2, size // 4, size - 1, size // 2)
    return _report("lcd", D, expected, {"n": C.n, "k": C.k})


def polarization_design(f):
    """Points F_2^m minus 0, blocks f(x+b) + f(x) + f(b) for b != 0."""
    _guard(f)
    _require_bent(f)
    m = f.m
    xs = np.arange(1, 1 << m)
    t = f.table
    rows = t[xs[:, None] ^ xs[None, :]] ^ t[xs][None, :] ^ t[xs][:, None]
    D = from_rows(xs, xs, rows, m)
    s = 1 - 2 * f(0)
    v = (1 << m) - 1
    k = (v + s) // 2
    expected = DesignParams(v, k, ((1 << (m - 1)) - 1 + s) // 2, v, k)
    return _report("polarization", D, expected, {"f_at_zero": f(0)})


def sum_pair_design(g, h):
    """Points F_2^m, blocks g(b) + h(x+b) + (g+h)(x)."""
    _guard(g)
    if g.m != h.m:
        raise DomainError("g and h have different numbers of variables")
    if not is_bent(g):
        raise DomainError("precondition failed: g is not bent")
    if not is_bent(h):
        raise DomainError("precondition failed: h is not bent")
    gh = g + h
    if not is_bent(gh):
        raise DomainError("precondition failed: g + h is not bent")
    if dual_of_bent(gh) != dual_of_bent(g) + dual_of_bent(h):
        raise DomainError("precondition failed: (g+h)* != g* + h*")
    m = g.m
    xs = np.arange(1 << m)
    rows = g.table[:, None] ^ h.table[xs[:, None] ^ xs[None, :]] ^ gh.table[None, :]
    D = from_rows(xs, xs, rows, m)
    k = (1 << (m - 1)) - pow2(m - 2)
    expected = DesignParams(1 << m, k, (1 << (m - 2)) - pow2(m - 2), 1 << m, k)
    return _report("sum-pair", D, expected, {})


def mm_bent(k, sigma, g=None):
    """f(x, y) = x·sigma(y) + g(y) on 2k variables; input index is (x << k) | y."""
    sigma = np.asarray(sigma, dtype=np.int64)
    size = 1 << k
    if len(sigma) != size or sorted(sigma.tolist()) != list(range(size)):
        raise DomainError("sigma is not a permutation of F_2^k")
    if g is None:
        g = BooleanFunction.constant(k)
    if g.m != k:
        raise DomainError("g must have k variables")
    idx = np.arange(1 << (2 * k))
    x, y = idx >> k, idx & (size - 1)
    return BooleanFunction(2 * k, parity(x & sigma[y]) ^ g.table[y])


def trace_bilinear_bent(F, beta, e):
    """f(x1, x2) = Tr(beta x1 x2^e) on 2k variables, input index (x1 << k) | x2.

    A field element's integer value is its k-bit block: the coefficient of
    alpha^(k-1) sits on the first variable of the block.
    """
    k = F.k
    if e <= 0 or gcd(e, F.order) != 1:
        raise DomainError(f"x -> x^{e} is not a permutation of GF(2^{k})")
    size = 1 << k
    powe = [F.pow(x, e) for x in range(size)]
    tr = [F.trace(x) for x in range(size)]
    table = np.zeros(size * size, dtype=np.uint8)
    for x1 in range(size):
        bx = F.mul(beta, x1)
        for x2 in range(size):
            table[(x1 << k) | x2] = tr[F.mul(bx, powe[x2])]
    f = BooleanFunction(2 * k, table)
    if not is_bent(f):
        raise DomainError("trace function is not bent for this beta")
    return f
