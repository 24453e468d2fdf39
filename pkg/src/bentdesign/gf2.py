"""Bit-packed GF(2) matrices, small binary fields GF(2^k), and point masks."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParseError

WORD = 64


def _nwords(cols):
    return max(1, (cols + WORD - 1) // WORD)


def pack_ints(values, cols):
    """Pack Python ints (bit j = column j) into a ``(len, words)`` uint64 array."""
    nw = _nwords(cols)
    out = np.zeros((len(values), nw), dtype=np.uint64)
    mask = (1 << WORD) - 1
    for i, v in enumerate(values):
        for w in range(nw):
            out[i, w] = (v >> (WORD * w)) & mask
    return out


def unpack_ints(data):
    nw = data.shape[1]
    out = []
    for row in data:
        v = 0
        for w in range(nw - 1, -1, -1):
            v = (v << WORD) | int(row[w])
        out.append(v)
    return out


class Gf2Matrix:
    """Immutable GF(2) matrix, rows packed into 64-bit words.

    Column j of a row lives at bit ``j % 64`` of word ``j // 64``; bits past
    ``cols`` are always zero.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.shape != (rows, _nwords(cols)):
            raise ValueError(f"packed data shape {data.shape} does not fit {rows}x{cols}")
        tail = cols % WORD
        if rows and tail and np.any(data[:, -1] >> np.uint64(tail)):
            raise ValueError("padding bits must be zero")
        if rows and cols == 0 and np.any(data):
            raise ValueError("padding bits must be zero")
        data.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Matrix is immutable")

    @classmethod
    def from_ints(cls, values, cols):
        values = [int(v) for v in values]
        for v in values:
            if v < 0 or v >> cols:
                raise ValueError(f"row value {v:#x} has bits beyond column {cols - 1}")
        return cls(len(values), cols, pack_ints(values, cols))

    @classmethod
    def from_bits(cls, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D 0/1 array")
        if arr.size and arr.max() > 1:
            raise ValueError("entries must be 0 or 1")
        rows, cols = arr.shape
        data = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        if rows and cols:
            packed = np.packbits(arr, axis=1, bitorder="little")
            pad = data.shape[1] * 8 - packed.shape[1]
            packed = np.pad(packed, ((0, 0), (0, pad)))
            data = packed.view("<u8").astype(np.uint64)
        return cls(rows, cols, data)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n):
        return cls.from_ints([1 << i for i in range(n)], n)

    @classmethod
    def parse(cls, text):
        """Read the text format: ``rows cols`` then one 0/1 string per row."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty matrix text", 0)
        head = lines[0].split()
        if len(head) != 2 or not all(h.isdigit() for h in head):
            raise ParseError("header must be 'rows cols'", 0)
        rows, cols = int(head[0]), int(head[1])
        body = lines[1:]
        if len(body) != rows:
            raise ParseError(f"expected {rows} rows, found {len(body)}")
        values = []
        for r, line in enumerate(body):
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ParseError(f"row {r} must be {cols} characters of 0/1")
            values.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
        return cls.from_ints(values, cols)

    def to_text(self):
        lines = [f"{self.rows} {self.cols}"]
        for v in self.row_ints():
            lines.append("".join("1" if v >> j & 1 else "0" for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    def row_ints(self):
        return unpack_ints(self.data)

    def to_bits(self):
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        raw = self.data.astype("<u8").view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def transpose(self):
        return Gf2Matrix.from_bits(self.to_bits().T)

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(
            self.data, other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self):
        return f"Gf2Matrix({self.rows}x{self.cols})"


def row_reduce(M):
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the leftmost remaining nonzero column, taking the
    topmost candidate row. Zero rows end up at the bottom.
    """
    data, pivots = kernels.rref(M.data, M.cols)
    return Gf2Matrix(M.rows, M.cols, data), list(pivots)


def rank(M):
    return len(row_reduce(M)[1])


def transpose(M):
    return M.transpose()


def _vector_int(v, cols):
    if isinstance(v, (int, np.integer)):
        v = int(v)
        if v < 0 or v >> cols:
            raise ValueError(f"vector has bits beyond column {cols - 1}")
        return v
    bits = list(v)
    if len(bits) != cols:
        raise ValueError(f"vector length {len(bits)} does not match {cols} columns")
    return sum(1 << j for j, b in enumerate(bits) if int(b) & 1)


def row_space_contains(M, v):
    """True iff ``v`` (int with bit j = column j, or a 0/1 sequence) is in the row space."""
    x = _vector_int(v, M.cols)
    red, pivots = row_reduce(M)
    for row, col in zip(red.row_ints(), pivots):
        if x >> col & 1:
            x ^= row
    return x == 0


class Gf2Field:
    """GF(2^k) with elements as k-bit masks in the basis 1, α, ..., α^(k-1).

    ``modulus`` includes the x^k term, e.g. 0b10011 for x^4 + x + 1. It must
    be primitive so that α generates the multiplicative group.
    """

    def __init__(self, k=4, modulus=0b10011):
        if k < 1 or k > 16:
            raise ValueError("extension degree must be in 1..16")
        if modulus >> k != 1:
            raise ValueError(f"modulus {modulus:#x} is not of degree {k}")
        self.k = k
        self.modulus = modulus
        self.order = (1 << k) - 1
        exp = [0] * (2 * self.order)
        log = [-1] * (1 << k)
        x = 1
        for i in range(self.order):
            if log[x] != -1:
                raise ValueError(f"modulus {modulus:#x} is not primitive")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x >> k:
                x ^= modulus
        if x != 1:
            raise ValueError(f"modulus {modulus:#x} is not primitive")
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self._exp = exp
        self._log = log

    @classmethod
    def parse(cls, text):
        """Parse ``gf2^k/poly-hex`` such as ``gf2^4/13``."""
        try:
            head, poly = text.strip().split("/")
            if not head.startswith("gf2^"):
                raise ValueError
            return cls(int(head[4:]), int(poly, 16))
        except ValueError as exc:
            if "primitive" in str(exc) or "degree" in str(exc):
                raise
            raise ParseError(f"bad field name {text!r}; expected gf2^k/poly-hex") from None

    def label(self):
        return f"gf2^{self.k}/{self.modulus:x}"

    @property
    def alpha(self):
        return 2 if self.k > 1 else 1

    def _check(self, a):
        if not 0 <= a < (1 << self.k):
            raise ValueError(f"{a} is not an element of GF(2^{self.k})")

    def mul(self, a, b):
        self._check(a)
        self._check(b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def pow(self, a, e):
        self._check(a)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.order]

    def inverse(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 1)

    def trace(self, a):
        t = 0
        x = a
        for _ in range(self.k):
            t ^= x
            x = self.mul(x, x)
        return t

    def __eq__(self, other):
        return isinstance(other, Gf2Field) and (self.k, self.modulus) == (other.k, other.modulus)

    def __hash__(self):
        return hash((self.k, self.modulus))

    def __repr__(self):
        return f"Gf2Field({self.label()!r})"


def field_mul(F, a, b):
    return F.mul(a, b)


def field_pow(F, a, e):
    return F.pow(a, e)


def field_trace(F, a):
    return F.trace(a)


@dataclass(frozen=True)
class PointMask:
    """Subset of ``range(universe)`` as a bit mask."""

    universe: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.universe:
            raise ValueError("mask has bits outside the universe")

    def _same(self, other):
        if self.universe != other.universe:
            raise ValueError("point masks over different universes")

    def __xor__(self, other):
        self._same(other)
        return PointMask(self.universe, self.bits ^ other.bits)

    def __and__(self, other):
        self._same(other)
        return PointMask(self.universe, self.bits & other.bits)

    def __or__(self, other):
        self._same(other)
        return PointMask(self.universe, self.bits | other.bits)

    def complement(self):
        return PointMask(self.universe, self.bits ^ ((1 << self.universe) - 1))

    def __len__(self):
        return self.bits.bit_count()

    def __iter__(self):
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low
