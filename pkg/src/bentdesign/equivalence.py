"""EA-equivalence witnesses, exhaustive affine search, automorphism counts.

Matrices act on row vectors: x -> xA. A matrix is stored as the tuple of
its rows, row i being the image of the unit vector of x_{i+1}, written in the
global index convention (x_1 is the most significant bit).
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .boolfn import BooleanFunction, autocorrelation, degree, parity, walsh_transform
from .errors import DomainError, SizeGuardError
from .incidence import verify_isomorphism_witness

MAX_SEARCH_M = 4
MAX_AUT_M = 5
WORKERS_ENV = "BENTDESIGN_WORKERS"


def dot(a, b):
    return (a & b).bit_count() & 1


def mat_apply(rows, x):
    m = len(rows)
    out = 0
    for i, r in enumerate(rows):
        if x >> (m - 1 - i) & 1:
            out ^= r
    return out


def mat_mul(A, B):
    """Rows of AB, so that x(AB) = (xA)B."""
    return tuple(mat_apply(B, r) for r in A)


def mat_transpose(A):
    m = len(A)
    return tuple(
        sum(((A[i] >> (m - 1 - j)) & 1) << (m - 1 - i) for i in range(m)) for j in range(m)
    )


def mat_identity(m):
    return tuple(1 << (m - 1 - i) for i in range(m))


def mat_inverse(A):
    """Inverse by Gauss-Jordan on [A | I]; None when singular."""
    m = len(A)
    aug = [(A[i] << m) | (1 << (m - 1 - i)) for i in range(m)]
    for col in range(m):
        bit = 1 << (2 * m - 1 - col)
        piv = next((i for i in range(col, m) if aug[i] & bit), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(m):
            if i != col and aug[i] & bit:
                aug[i] ^= aug[col]
    return tuple(r & ((1 << m) - 1) for r in aug)


def gl_order(m):
    out = 1
    for i in range(m):
        out *= (1 << m) - (1 << i)
    return out


@dataclass(frozen=True)
class AffineMap:
    """x -> xA + a."""

    rows: tuple
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))

    @property
    def m(self):
        return len(self.rows)

    @classmethod
    def identity(cls, m):
        return cls(mat_identity(m), 0)

    def is_invertible(self):
        return mat_inverse(self.rows) is not None

    def __call__(self, x):
        return mat_apply(self.rows, x) ^ self.shift

    def table(self):
        m = self.m
        img = np.zeros(1 << m, dtype=np.int64)
        for x in range(1, 1 << m):
            low = (x & -x).bit_length() - 1
            img[x] = img[x & (x - 1)] ^ self.rows[m - 1 - low]
        return img ^ self.shift

    def then(self, other):
        """x -> other(self(x))."""
        return AffineMap(mat_mul(self.rows, other.rows), mat_apply(other.rows, self.shift) ^ other.shift)

    def inverse(self):
        inv = mat_inverse(self.rows)
        if inv is None:
            raise DomainError("matrix is singular")
        return AffineMap(inv, mat_apply(inv, self.shift))

    def to_dict(self):
        return {"A": [format(r, "x") for r in self.rows], "a": format(self.shift, "x")}


@dataclass(frozen=True)
class EaWitness:
    """g(x) = f(sigma x) + b·x + eps."""

    sigma: AffineMap
    b: int = 0
    eps: int = 0

    def to_dict(self):
        d = self.sigma.to_dict()
        d.update({"b": format(self.b, "x"), "eps": self.eps})
        return d

    @classmethod
    def from_dict(cls, data):
        try:
            rows = [int(str(r), 16) for r in data["A"]]
            return cls(AffineMap(rows, int(str(data.get("a", "0")), 16)), int(str(data.get("b", "0")), 16), int(data.get("eps", 0)) & 1)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed witness JSON: {exc}") from None


def apply_ea(f, w):
    """The function x -> f(sigma x) + b·x + eps."""
    if w.sigma.m != f.m:
        raise DomainError("witness dimension does not match the function")
    if not w.sigma.is_invertible():
        raise DomainError("witness matrix is singular")
    xs = np.arange(1 << f.m)
    return BooleanFunction(f.m, f.table[w.sigma.table()] ^ parity(xs & w.b) ^ (w.eps & 1))


def verify_ea_witness(f, g, w):
    if f.m != g.m:
        raise DomainError("functions on different numbers of variables")
    return apply_ea(f, w) == g


def ea_invariants(f):
    """(degree, sorted |W_f| multiset, sorted |C_f| multiset).

    Adding b·x turns a constant into a linear function, so affine functions
    all report degree 1.
    """
    w = np.sort(np.abs(walsh_transform(f).values))
    c = np.sort(np.abs(autocorrelation(f)))
    return (max(degree(f), 1), tuple(int(x) for x in w), tuple(int(x) for x in c))


def _workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _scan_chunk(args):
    return kernels.scan_affine(*args)


def scan(f, g, mode, limit, parallel=None):
    """Run the affine scan, split by first matrix row when worth it."""
    m = f.m
    fb, gb = f.to_int(), g.to_int()
    top = 1 << m
    workers = _workers() if parallel is None else parallel
    if m < 5 or workers <= 1:
        return kernels.scan_affine(fb, gb, m, mode, 1, top, limit)
    bounds = list(range(1, top, max(1, (top - 1) // (workers * 4))))
    bounds.append(top)
    jobs = [(fb, gb, m, mode, lo, hi, limit) for lo, hi in zip(bounds, bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan_chunk, jobs))
    count = sum(p[0] for p in parts)
    wits = []
    complete = True
    for c, w, done in parts:
        wits.extend(w)
        if limit > 0 and len(wits) >= limit:
            return count, wits[:limit], False
        complete = complete and done
    return count, wits, complete


def exhaustive_affine_equivalence(f, g):
    """First sigma (GL order, then shift ascending) with g(x) = f(sigma x), or None."""
    if f.m != g.m:
        raise DomainError("functions on different numbers of variables")
    if f.m > MAX_SEARCH_M:
        raise SizeGuardError(f"exhaustive search is limited to m <= {MAX_SEARCH_M}")
    _, wits, _ = kernels.scan_affine(f.to_int(), g.to_int(), f.m, 1, 1, 1 << f.m, 1)
    if not wits:
        return None
    rows, p = wits[0]
    return AffineMap(rows, p)


@dataclass(frozen=True)
class GbElement:
    """[A, p, b, eps] acting by f -> f(xA + p) + b·x + eps."""

    rows: tuple
    p: int
    b: int
    eps: int

    def act(self, f):
        return apply_ea(f, EaWitness(AffineMap(self.rows, self.p), self.b, self.eps))

    def compose(self, other):
        """self o other: act with ``other`` first, then ``self``.

        [A,p,b,e1] o [B,q,b',e2] = [AB, pB + q, b + b'A^T, p·b' + e1 + e2].
        """
        A, B = self.rows, other.rows
        bt = mat_apply(mat_transpose(A), other.b)
        return GbElement(
            mat_mul(A, B),
            mat_apply(B, self.p) ^ other.p,
            self.b ^ bt,
            dot(self.p, other.b) ^ self.eps ^ other.eps,
        )


def extend_to_gb(f, rows, p):
    """The unique [A, p, b, eps] fixing f, given that f(xA + p) + f(x) is affine."""
    m = f.m
    img = AffineMap(rows, p).table()
    d = f.table[img] ^ f.table
    eps = int(d[0])
    b = 0
    for i in range(m):
        if d[1 << i] ^ eps:
            b |= 1 << i
    el = GbElement(tuple(rows), p, b, eps)
    if el.act(f) != f:
        raise DomainError("f(xA + p) + f(x) is not affine")
    return el


@dataclass(frozen=True)
class AutomorphismCount:
    count: int
    affine: bool
    witnesses: tuple = ()

    def to_dict(self):
        return {"order": self.count, "affine_input": self.affine}


def automorphism_order(f, collect=False, parallel=None):
    """Count (A, p) with f(xA + p) + f(x) affine; optionally keep the pairs in order."""
    if f.m > MAX_AUT_M:
        raise SizeGuardError(f"automorphism enumeration is limited to m <= {MAX_AUT_M}")
    count, wits, _ = scan(f, f, 0, -1 if collect else 0, parallel)
    return AutomorphismCount(count, degree(f) <= 1, tuple(wits))


def aut_dset_code(f):
    """Number of affine permutations pi with f(pi x) = f(x)."""
    if f.m > MAX_SEARCH_M:
        raise SizeGuardError(f"this enumeration is limited to m <= {MAX_SEARCH_M}")
    count, _, _ = kernels.scan_affine(f.to_int(), f.to_int(), f.m, 1, 1, 1 << f.m, 0)
    return count


def symplectic_order(m):
    if m % 2 or m <= 0:
        raise DomainError("symplectic groups need a positive even dimension")
    n = m // 2
    out = 1 << (n * n)
    for i in range(1, n + 1):
        out *= 4**i - 1
    return out


def polarization(f):
    """B_f(x, y) = f(x+y) + f(x) + f(y) + f(0) as a 2^m x 2^m matrix."""
    xs = np.arange(1 << f.m)
    t = f.table
    return t[xs[:, None] ^ xs[None, :]] ^ t[:, None] ^ t[None, :] ^ t[0]


def bilinear_polarization(f):
    """Linear pi with B_f(x, y) = x·pi(y) for all x, y, or None.

    pi(e_j) has coordinate i equal to B_f(e_i, e_j). The identity is then
    checked on every pair.
    """
    m = f.m
    B = polarization(f)
    units = [1 << (m - 1 - i) for i in range(m)]
    rows = tuple(sum(int(B[ei, ej]) << (m - 1 - i) for i, ei in enumerate(units)) for ej in units)
    pi = AffineMap(rows, 0)
    tab = pi.table()
    xs = np.arange(1 << m)
    if not np.array_equal(parity(xs[:, None] & tab[None, :]), B):
        return None
    return pi


@dataclass(frozen=True)
class DesignLift:
    point_map: dict
    block_map: dict

    def coordinate_permutation(self, block_labels_from, block_labels_to):
        pos = {lab: i for i, lab in enumerate(block_labels_to)}
        return [pos[self.block_map[lab]] for lab in block_labels_from]


def lift_ea_to_design_iso(f, g, w):
    """Point and block bijections from the addition design of f to that of g.

    With g(x) = f(xA + a) + b·x + eps, a Walsh support point v of f goes to
    vA^T + b and the block labeled d goes to (d + a)A^(-1).
    """
    from .constructions import addition_design

    if not verify_ea_witness(f, g, w):
        raise DomainError("witness does not map f to g")
    A, a = w.sigma.rows, w.sigma.shift
    At = mat_transpose(A)
    Ainv = mat_inverse(A)
    D1 = addition_design(f).design
    D2 = addition_design(g).design
    point_map = {p: mat_apply(At, p) ^ w.b for p in D1.points}
    block_map = {blk.label: mat_apply(Ainv, blk.label ^ a) for blk in D1.blocks}
    lift = DesignLift(point_map, block_map)
    if not verify_isomorphism_witness(D1, D2, point_map, block_map):
        raise DomainError("lifted maps fail the incidence check")
    return lift
