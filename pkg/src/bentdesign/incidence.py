"""Incidence structures: labeled points, labeled block multisets, design checks."""

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .boolfn import parity
from .errors import DomainError, SizeGuardError
from .gf2 import Gf2Matrix, PointMask, pack_ints, rank

MAX_SD_BLOCKS = 4096


def bitstring(x, m):
    return format(x, f"0{m}b") if m else ""


def _pack_rows(bits):
    """Rows of a 0/1 matrix to Python ints (column j -> bit j)."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[1] == 0:
        return [0] * bits.shape[0]
    packed = np.packbits(bits, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


@dataclass(frozen=True)
class Block:
    label: int
    mask: int


@dataclass(frozen=True)
class DesignParams:
    v: int
    k: int
    lam: int
    b: int
    r: int

    def identities_hold(self):
        return self.b * self.k == self.v * self.r and self.lam * (self.v - 1) == self.r * (self.k - 1)

    def as_tuple(self):
        return (self.v, self.k, self.lam, self.b, self.r)

    def to_dict(self):
        return {"v": self.v, "k": self.k, "lambda": self.lam, "b": self.b, "r": self.r}

    @property
    def degenerate(self):
        return self.lam == 0


class IncidenceStructure:
    """Ordered point labels and an ordered multiset of labeled blocks.

    Block masks index points by position: bit i means ``points[i]`` is in the
    block. ``m`` is the bit width used to print labels.
    """

    __slots__ = ("points", "blocks", "m", "_cache")

    def __init__(self, points, blocks, m=None):
        points = tuple(int(p) for p in points)
        if len(set(points)) != len(points):
            raise ValueError("point labels must be distinct")
        blocks = tuple(b if isinstance(b, Block) else Block(int(b[0]), int(b[1])) for b in blocks)
        limit = 1 << len(points)
        for blk in blocks:
            if blk.mask < 0 or blk.mask >= limit:
                raise ValueError(f"block {blk.label:#x} has members outside the point set")
        if m is None:
            top = max([*points, *(blk.label for blk in blocks), 1])
            m = top.bit_length()
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("IncidenceStructure is immutable")

    @property
    def v(self):
        return len(self.points)

    @property
    def b(self):
        return len(self.blocks)

    def masks(self):
        return [blk.mask for blk in self.blocks]

    def block_mask(self, i):
        return PointMask(self.v, self.blocks[i].mask)

    def block_points(self, i):
        return [self.points[j] for j in PointMask(self.v, self.blocks[i].mask)]

    def incidence_matrix(self):
        """v x b 0/1 matrix with entry (p, B) = 1 iff point p lies in block B."""
        if "N" not in self._cache:
            N = np.zeros((self.v, self.b), dtype=np.uint8)
            if self.v and self.b:
                packed = pack_ints(self.masks(), self.v)
                raw = packed.astype("<u8").view(np.uint8).reshape(self.b, -1)
                N = np.ascontiguousarray(np.unpackbits(raw, axis=1, bitorder="little")[:, : self.v].T)
            N.setflags(write=False)
            self._cache["N"] = N
        return self._cache["N"]

    def block_multiset(self):
        return Counter(self.masks())

    def block_sizes(self):
        return [blk.mask.bit_count() for blk in self.blocks]

    def point_degrees(self):
        return [int(x) for x in self.incidence_matrix().sum(axis=1)]

    def __eq__(self, other):
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return self.points == other.points and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.points, self.blocks))

    def __repr__(self):
        return f"IncidenceStructure(v={self.v}, b={self.b})"

    def to_dict(self):
        return {
            "m": self.m,
            "points": [format(p, "x") for p in self.points],
            "blocks": [{"label": format(blk.label, "x"), "mask": format(blk.mask, "x")} for blk in self.blocks],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        try:
            points = [int(str(p), 16) for p in data["points"]]
            blocks = [Block(int(str(b["label"]), 16), int(str(b["mask"]), 16)) for b in data["blocks"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed design JSON: {exc}") from None
        return cls(points, blocks, data.get("m"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def same_blockset(self, other):
        """Equal points (as a set) and equal block multisets, compared by point labels."""
        if set(self.points) != set(other.points):
            return False
        return Counter(_label_sets(self)) == Counter(_label_sets(other))


def _label_sets(D):
    return [frozenset(D.block_points(i)) for i in range(D.b)]


def from_rows(points, labels, rows, m=None):
    """Structure from a ``(blocks, points)`` 0/1 evaluation matrix."""
    rows = np.asarray(rows, dtype=np.uint8).reshape(len(labels), len(points))
    masks = _pack_rows(rows) if len(labels) else []
    return IncidenceStructure(points, [Block(int(l), mk) for l, mk in zip(labels, masks)], m)


def from_function_family(P, family, m=None):
    """Blocks {p in P : f_b(p) = 1} in family order."""
    P = [int(p) for p in P]
    family = list(family)
    if family:
        ms = {f.m for _, f in family}
        if len(ms) != 1:
            raise DomainError("family members have different numbers of variables")
        if m is None:
            m = ms.pop()
    idx = np.asarray(P, dtype=np.int64)
    rows = np.array([f.table[idx] for _, f in family], dtype=np.uint8).reshape(len(family), len(P))
    return from_rows(P, [lab for lab, _ in family], rows, m)


@dataclass(frozen=True)
class DesignVerdict:
    params: DesignParams | None
    reason: str | None = None
    pair: tuple | None = None

    @property
    def ok(self):
        return self.params is not None


def design_check(D):
    """Direct counting check of the 2-design axioms with a counterexample on failure."""
    if D.v < 2:
        return DesignVerdict(None, "fewer than two points")
    if D.b < 1:
        return DesignVerdict(None, "no blocks")
    sizes = D.block_sizes()
    if len(set(sizes)) != 1:
        i = next(i for i, s in enumerate(sizes) if s != sizes[0])
        return DesignVerdict(None, "block sizes differ", (D.blocks[0].label, D.blocks[i].label))
    N = D.incidence_matrix().astype(np.int64)
    reps = N.sum(axis=1)
    if np.any(reps != reps[0]):
        i = int(np.flatnonzero(reps != reps[0])[0])
        return DesignVerdict(None, "replication numbers differ", (D.points[0], D.points[i]))
    pairs = N @ N.T
    lam = int(pairs[0, 1])
    iu = np.triu_indices(D.v, 1)
    bad = np.flatnonzero(pairs[iu] != lam)
    if len(bad):
        i, j = int(iu[0][bad[0]]), int(iu[1][bad[0]])
        return DesignVerdict(None, f"pair count {int(pairs[i, j])} != {lam}", (D.points[i], D.points[j]))
    return DesignVerdict(DesignParams(D.v, sizes[0], lam, D.b, int(reps[0])))


def verify_2_design(D):
    return design_check(D).params


@dataclass(frozen=True)
class CharacterSums:
    cond1: bool
    c1: int | None
    cond2: bool
    c2: int | None
    cond3: bool
    c3: int | None
    params: DesignParams | None

    @property
    def ok(self):
        return self.params is not None

    def constants(self):
        return (self.c1, self.c2, self.c3)


def character_sum_conditions(P, family):
    """Character-sum test for a function family on a point set.

    With S[p, b] = (-1)^(f_b(p)): (i) every column sum equals c1, (ii) every
    row sum equals c2, (iii) every off-diagonal entry of S S^T equals c3.
    When all three hold (and give integers) the implied parameters are
    k = (v - c1)/2, r = (b - c2)/2, lambda = (c3 - b + 4r)/4.
    """
    P = np.asarray([int(p) for p in P], dtype=np.int64)
    family = list(family)
    v, nb = len(P), len(family)
    if nb == 0 or v < 2:
        return CharacterSums(False, None, False, None, False, None, None)
    S = np.array([1 - 2 * f.table[P].astype(np.int64) for _, f in family]).T
    cols = S.sum(axis=0)
    rows = S.sum(axis=1)
    gram = S @ S.T
    off = gram[~np.eye(v, dtype=bool)]
    cond1 = bool(np.all(cols == cols[0]))
    cond2 = bool(np.all(rows == rows[0]))
    cond3 = bool(np.all(off == off[0]))
    c1 = int(cols[0]) if cond1 else None
    c2 = int(rows[0]) if cond2 else None
    c3 = int(off[0]) if cond3 else None
    params = None
    if cond1 and cond2 and cond3 and (v - c1) % 2 == 0 and (nb - c2) % 2 == 0:
        k = (v - c1) // 2
        r = (nb - c2) // 2
        if (c3 - nb + 4 * r) % 4 == 0:
            params = DesignParams(v, k, (c3 - nb + 4 * r) // 4, nb, r)
    return CharacterSums(cond1, c1, cond2, c2, cond3, c3, params)


def block_character_sum(D, index, u):
    """sum over p in block of (-1)^(u·p)."""
    if not 0 <= index < D.b:
        raise IndexError(f"block index {index} out of range")
    pts = np.asarray(D.block_points(index), dtype=np.int64)
    if len(pts) == 0:
        return 0
    return int(len(pts) - 2 * int(parity(pts & u).sum()))


def is_simple(D):
    masks = D.masks()
    return len(set(masks)) == len(masks)


@dataclass(frozen=True)
class IntersectionProfile:
    counts: tuple  # sorted (value, multiplicity) pairs

    @property
    def values(self):
        return tuple(v for v, _ in self.counts)

    @property
    def is_constant(self):
        return len(self.counts) == 1

    @property
    def is_quasi_symmetric(self):
        return len(self.counts) == 2


def intersection_profile(D):
    if "profile" not in D._cache:
        N = D.incidence_matrix().astype(np.int64)
        inter = N.T @ N
        iu = np.triu_indices(D.b, 1)
        c = Counter(int(x) for x in inter[iu])
        D._cache["profile"] = IntersectionProfile(tuple(sorted(c.items())))
    return D._cache["profile"]


def is_symmetric(D):
    if D.b != D.v:
        return False
    prof = intersection_profile(D)
    return len(prof.counts) <= 1


def complement(D):
    full = (1 << D.v) - 1
    return IncidenceStructure(D.points, [Block(blk.label, blk.mask ^ full) for blk in D.blocks], D.m)


@dataclass(frozen=True)
class SdpVerdict:
    holds: bool
    labels: tuple = ()
    delta: tuple = ()
    distinct_blocks: int = 0

    def to_dict(self, m):
        out = {"holds": self.holds, "distinct_blocks": self.distinct_blocks}
        if not self.holds:
            out["witness"] = {
                "labels": [bitstring(x, m) for x in self.labels],
                "delta": [bitstring(x, m) for x in self.delta],
            }
        return out


def _distinct(D):
    seen = {}
    for blk in D.blocks:
        seen.setdefault(blk.mask, blk.label)
    return list(seen.items())


def _sd_check(D, order):
    items = _distinct(D)
    if len(items) > MAX_SD_BLOCKS:
        raise SizeGuardError(f"{len(items)} distinct blocks exceed the limit of {MAX_SD_BLOCKS}")
    if len(items) < order:
        return SdpVerdict(True, distinct_blocks=len(items))
    masks = pack_ints([mk for mk, _ in items], D.v)
    full = pack_ints([(1 << D.v) - 1], D.v)[0]
    hit = kernels.sd_scan(masks, full, order)
    if hit is None:
        return SdpVerdict(True, distinct_blocks=len(items))
    delta = 0
    for i in hit:
        delta ^= items[i][0]
    pts = tuple(D.points[j] for j in PointMask(D.v, delta))
    return SdpVerdict(False, tuple(items[i][1] for i in hit), pts, len(items))


def check_tsdp(D):
    """Triple symmetric difference property over pairwise distinct block contents.

    On failure the witness is the lexicographically smallest violating triple
    of distinct contents, ordered by first appearance in the block list.
    """
    return _sd_check(D, 3)


def check_dsdp(D):
    return _sd_check(D, 2)


def incidence_gf2(D):
    """The v x b incidence matrix as a packed GF(2) matrix."""
    return Gf2Matrix.from_bits(D.incidence_matrix())


def two_rank(D):
    if "rank" not in D._cache:
        # the block-by-point matrix has the same rank and is already packed by row
        D._cache["rank"] = rank(Gf2Matrix.from_ints(D.masks(), D.v))
    return D._cache["rank"]


def verify_isomorphism_witness(D1, D2, sigma, pi):
    """Check M1[p, B] = M2[sigma p, pi B] for every point and block.

    ``sigma`` and ``pi`` are dicts or callables on labels, or index lists.
    """
    if D1.v != D2.v or D1.b != D2.b:
        raise DomainError(f"designs differ in size: (v, b) = ({D1.v}, {D1.b}) vs ({D2.v}, {D2.b})")
    if isinstance(sigma, (list, tuple, np.ndarray)):
        si = [int(x) for x in sigma]
    else:
        si = _as_index_map_target(sigma, D1.points, D2.points, "point")
    if isinstance(pi, (list, tuple, np.ndarray)):
        bi = [int(x) for x in pi]
    else:
        bi = _as_index_map_target(pi, [blk.label for blk in D1.blocks], [blk.label for blk in D2.blocks], "block")
    for name, mp, n in (("point", si, D1.v), ("block", bi, D1.b)):
        if len(mp) != n or sorted(mp) != list(range(n)):
            raise DomainError(f"{name} map is not a bijection")
    N1 = D1.incidence_matrix()
    N2 = D2.incidence_matrix()
    return bool(np.array_equal(N2[np.ix_(si, bi)], N1))


def _as_index_map_target(mapping, src_labels, dst_labels, what):
    pos = {}
    for i, lab in enumerate(dst_labels):
        if lab in pos:
            raise DomainError(f"{what} labels repeat; pass an index map instead")
        pos[lab] = i
    get = mapping if callable(mapping) else mapping.__getitem__
    out = []
    for lab in src_labels:
        try:
            out.append(pos[int(get(lab))])
        except KeyError:
            raise DomainError(f"{what} map is not defined or leaves the target at {lab:#x}") from None
    return out


@dataclass(frozen=True)
class Refutation:
    invariant: str
    left: object
    right: object

    def to_dict(self):
        return {"invariant": self.invariant, "left": _jsonable(self.left), "right": _jsonable(self.right)}


def _jsonable(x):
    if isinstance(x, DesignParams):
        return x.to_dict()
    if isinstance(x, IntersectionProfile):
        return [list(p) for p in x.counts]
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def design_invariants(D):
    """Isomorphism invariants in the order they are compared."""
    yield "parameters", lambda: (D.v, D.b, verify_2_design(D))
    yield "simple", lambda: is_simple(D)
    yield "2-rank", lambda: two_rank(D)
    yield "intersection-profile", lambda: intersection_profile(D)
    yield "block-sizes", lambda: tuple(sorted(D.block_sizes()))
    yield "point-degrees", lambda: tuple(sorted(D.point_degrees()))


def refute_isomorphism(D1, D2):
    """First invariant that differs, or None. None does not mean isomorphic."""
    for (name, a), (_, b) in zip(design_invariants(D1), design_invariants(D2)):
        x, y = a(), b()
        if x != y:
            return Refutation(name, x, y)
    return None
