"""Boolean functions on F_2^m: ANF, Walsh spectra, plateaued profiles, correlations.

Inputs x = (x_1, ..., x_m) are indexed by the integer sum of x_i 2^(m-i), so
x_1 is the most significant bit. ANF monomials use the same bit positions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError

MAX_M = 20


def parity(values):
    """Elementwise popcount parity of a non-negative integer array."""
    return (np.bitwise_count(np.asarray(values)) & 1).astype(np.uint8)


def dot_matrix(m):
    """``D[a, x] = a·x`` over F_2^m as a uint8 matrix."""
    xs = np.arange(1 << m)
    return parity(xs[:, None] & xs[None, :])


def var_bit(m, i):
    """Index bit of variable x_i (1-based)."""
    return 1 << (m - i)


def _butterfly_xor(t):
    t = t.copy()
    n = len(t)
    h = 1
    while h < n:
        v = t.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h *= 2
    return t


def _butterfly_signed(v):
    v = np.array(v, dtype=np.int64)
    n = len(v)
    h = 1
    while h < n:
        w = v.reshape(-1, 2, h)
        a = w[:, 0, :].copy()
        b = w[:, 1, :]
        w[:, 0, :] = a + b
        w[:, 1, :] = a - b
        h *= 2
    return v


class BooleanFunction:
    """Immutable truth table of an m-variable Boolean function."""

    __slots__ = ("m", "table", "_cache")

    def __init__(self, m, table):
        if not 0 <= m <= MAX_M:
            raise ValueError(f"m must be in 0..{MAX_M}")
        t = np.array(table, dtype=np.uint8).reshape(-1)
        if len(t) != 1 << m:
            raise ValueError(f"table length {len(t)} != 2^{m}")
        if t.size and t.max() > 1:
            raise ValueError("table entries must be 0 or 1")
        t.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("BooleanFunction is immutable")

    @classmethod
    def constant(cls, m, value=0):
        return cls(m, np.full(1 << m, value & 1, dtype=np.uint8))

    @classmethod
    def from_callable(cls, m, fn):
        return cls(m, [fn(x) & 1 for x in range(1 << m)])

    @classmethod
    def from_int(cls, m, value):
        """Table from T = sum f(x) 2^x."""
        if value < 0 or value >> (1 << m):
            raise ValueError("table integer out of range")
        raw = value.to_bytes(max(1, (1 << m) // 8 + 1), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return cls(m, bits[: 1 << m])

    @classmethod
    def linear(cls, m, a, eps=0):
        """x -> a·x + eps."""
        xs = np.arange(1 << m)
        return cls(m, parity(xs & a) ^ (eps & 1))

    @classmethod
    def variable(cls, m, i):
        return cls.linear(m, var_bit(m, i))

    def to_int(self):
        packed = np.packbits(self.table, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def to_hex(self):
        digits = max(1, (1 << self.m) // 4)
        return f"{self.m}:{self.to_int():0{digits}x}"

    def __call__(self, x):
        return int(self.table[x])

    def __len__(self):
        return len(self.table)

    def __add__(self, other):
        if isinstance(other, BooleanFunction):
            if other.m != self.m:
                raise ValueError("functions on different numbers of variables")
            return BooleanFunction(self.m, self.table ^ other.table)
        if other in (0, 1):
            return BooleanFunction(self.m, self.table ^ other)
        return NotImplemented

    __radd__ = __add__

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    def __repr__(self):
        return f"BooleanFunction({self.to_hex()!r})"

    @property
    def weight(self):
        return int(self.table.sum())

    def support(self):
        """D_f = {x : f(x) = 1}, ascending."""
        return np.flatnonzero(self.table)

    def compose(self, sigma):
        """x -> f(sigma[x]) for a table ``sigma`` on F_2^m."""
        return BooleanFunction(self.m, self.table[np.asarray(sigma)])

    def shift(self, b):
        """x -> f(x + b)."""
        return BooleanFunction(self.m, self.table[np.arange(1 << self.m) ^ b])

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


@dataclass(frozen=True)
class AnfPolynomial:
    """Set of monomials; a monomial is a mask of index bits, 0 being the constant 1."""

    m: int
    monomials: frozenset

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(int(x) for x in self.monomials))

    @property
    def degree(self):
        return max((x.bit_count() for x in self.monomials), default=0)

    def variables(self, mono):
        return [i for i in range(1, self.m + 1) if mono & var_bit(self.m, i)]

    def __str__(self):
        if not self.monomials:
            return "0"

        def key(mono):
            return (mono.bit_count(), self.variables(mono))

        terms = []
        for mono in sorted(self.monomials, key=key):
            vs = self.variables(mono)
            terms.append("*".join(f"x{i}" for i in vs) if vs else "1")
        return "+".join(terms)


def parse_anf(text, m=None):
    """Parse ``x1*x3+x2*x4+1``-style ANF text.

    ``m`` defaults to the largest variable index present (at least 1).
    Repeated terms cancel; repeated variables in a term collapse.
    """
    terms = []
    pos = 0
    n = len(text)

    def skip(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    while True:
        factors = []
        while True:
            pos = skip(pos)
            if pos >= n:
                raise ParseError("expected a variable or constant", pos)
            ch = text[pos]
            if ch in "xX":
                start = pos
                pos += 1
                d0 = pos
                while pos < n and text[pos].isdigit():
                    pos += 1
                if d0 == pos:
                    raise ParseError("expected variable index after 'x'", pos)
                idx = int(text[d0:pos])
                if idx < 1:
                    raise ParseError("variable indices start at 1", start)
                factors.append(idx)
            elif ch in "01":
                factors.append(-int(ch))
                pos += 1
            else:
                raise ParseError(f"unexpected {ch!r}", pos)
            pos = skip(pos)
            if pos < n and text[pos] == "*":
                pos += 1
                continue
            break
        terms.append(factors)
        if pos >= n:
            break
        if text[pos] != "+":
            raise ParseError(f"unexpected {text[pos]!r}", pos)
        pos += 1

    top = max((i for t in terms for i in t if i > 0), default=0)
    if m is None:
        m = max(top, 1)
    elif top > m:
        raise ParseError(f"variable x{top} exceeds m={m}")
    monos = set()
    for t in terms:
        if 0 in t:
            continue
        mono = 0
        for i in t:
            if i > 0:
                mono |= var_bit(m, i)
        monos ^= {mono}
    return AnfPolynomial(m, frozenset(monos))


def from_anf(p):
    size = 1 << p.m
    coeffs = np.zeros(size, dtype=np.uint8)
    for mono in p.monomials:
        if mono < 0 or mono >= size:
            raise ValueError(f"monomial mask {mono:#x} does not fit m={p.m}")
        coeffs[mono] = 1
    return BooleanFunction(p.m, _butterfly_xor(coeffs))


def to_anf(f):
    coeffs = _butterfly_xor(f.table)
    return AnfPolynomial(f.m, frozenset(int(i) for i in np.flatnonzero(coeffs)))


def parse_function(text, m=None):
    """ANF text or ``m:hex`` truth table."""
    text = text.strip()
    if ":" in text:
        head, _, digits = text.partition(":")
        if not head.strip().isdigit():
            raise ParseError("truth table must look like m:<hex>", 0)
        mm = int(head)
        if m is not None and m != mm:
            raise ParseError(f"table is for m={mm}, expected m={m}", 0)
        if not 1 <= mm <= MAX_M:
            raise ParseError(f"m must be in 1..{MAX_M}", 0)
        digits = digits.strip()
        try:
            value = int(digits, 16)
        except ValueError:
            raise ParseError("bad hex digits", len(head) + 1) from None
        if value >> (1 << mm):
            raise ParseError(f"table value too large for m={mm}", len(head) + 1)
        return BooleanFunction.from_int(mm, value)
    return from_anf(parse_anf(text, m))


def degree(f):
    return to_anf(f).degree


@dataclass(frozen=True)
class WalshSpectrum:
    m: int
    values: np.ndarray

    def __getitem__(self, a):
        return int(self.values[a])


def walsh_transform(f):
    def compute():
        vals = _butterfly_signed(1 - 2 * f.table.astype(np.int64))
        vals.setflags(write=False)
        return WalshSpectrum(f.m, vals)

    return f._cached("walsh", compute)


def inverse_walsh(spectrum):
    """Recover the function from its spectrum."""
    m = spectrum.m
    s = _butterfly_signed(spectrum.values)
    if np.any(np.abs(s) != 1 << m):
        raise DomainError("not the spectrum of a Boolean function")
    return BooleanFunction(m, (s < 0).astype(np.uint8))


def restricted_walsh(f, P, u):
    """sum over x in P of (-1)^(f(x) + u·x)."""
    pts = np.asarray(list(P), dtype=np.int64)
    if len(pts) == 0:
        return 0
    if pts.min() < 0 or pts.max() >= 1 << f.m:
        raise ValueError("points outside F_2^m")
    e = f.table[pts] ^ parity(pts & u)
    return int(len(pts) - 2 * int(e.sum()))


@dataclass(frozen=True)
class PlateauedProfile:
    """W_f(a) = (-1)^sign(a) 2^((m+r)/2) on the support, 0 elsewhere."""

    m: int
    r: int
    support: tuple
    sign: tuple

    @property
    def amplitude(self):
        return 1 << ((self.m + self.r) // 2)

    @property
    def is_bent(self):
        return self.r == 0

    @property
    def is_affine(self):
        return self.r == self.m

    def sign_at(self, a):
        i = int(np.searchsorted(self.support, a))
        if i == len(self.support) or self.support[i] != a:
            raise KeyError(f"{a} is not in the Walsh support")
        return self.sign[i]

    def sign_function(self):
        """The sign function extended by 0 off the support."""
        t = np.zeros(1 << self.m, dtype=np.uint8)
        t[list(self.support)] = self.sign
        return BooleanFunction(self.m, t)


def classify_plateaued(f):
    """Plateaued profile of f, or None when the spectrum has mixed magnitudes."""

    def compute():
        w = walsh_transform(f).values
        top = int(np.abs(w).max())
        if top & (top - 1):
            return None
        twice = top.bit_length() - 1
        r = 2 * twice - f.m
        if r < 0 or r > f.m:
            return None
        mags = np.abs(w)
        if np.any((mags != 0) & (mags != top)):
            return None
        supp = np.flatnonzero(w)
        if len(supp) != 1 << (f.m - r):
            return None
        sign = tuple(int(s) for s in (w[supp] < 0))
        return PlateauedProfile(f.m, r, tuple(int(a) for a in supp), sign)

    return f._cached("plateau", compute)


def is_bent(f):
    prof = classify_plateaued(f)
    return prof is not None and prof.r == 0


def dual_of_bent(f):
    prof = classify_plateaued(f)
    if prof is None or prof.r != 0:
        raise DomainError("function is not bent")
    return BooleanFunction(f.m, np.array(prof.sign, dtype=np.uint8))


def cross_correlation(f, g):
    """C_{f,g}(a) = sum_x (-1)^(f(x) + g(x+a)), through the spectra."""
    if f.m != g.m:
        raise ValueError("functions on different numbers of variables")
    prod = walsh_transform(f).values * walsh_transform(g).values
    return _butterfly_signed(prod) >> f.m


def autocorrelation(f):
    return f._cached("autocorr", lambda: cross_correlation(f, f))


def linear_structures(f):
    c = autocorrelation(f)
    full = 1 << f.m
    return tuple(int(a) for a in range(1, full) if abs(int(c[a])) == full)


def is_balanced(f):
    return walsh_transform(f)[0] == 0


def is_affine(f):
    return degree(f) <= 1
