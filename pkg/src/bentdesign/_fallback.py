"""Pure-Python/numpy kernels.

Same signatures and outputs as the compiled ``_kernels`` module. Packed
matrices are C-contiguous ``uint64`` arrays of shape ``(rows, words)`` with
column ``j`` at bit ``j % 64`` of word ``j // 64``.
"""

import numpy as np

BACKEND = "python"


def _to_ints(data):
    nw = data.shape[1]
    out = []
    for row in data:
        v = 0
        for w in range(nw - 1, -1, -1):
            v = (v << 64) | int(row[w])
        out.append(v)
    return out


def _from_ints(values, nw):
    out = np.zeros((len(values), nw), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, v in enumerate(values):
        for w in range(nw):
            out[i, w] = (v >> (64 * w)) & mask
    return out


def rref(data, ncols):
    """Reduced row echelon form. Returns (new array, pivot columns)."""
    rows = _to_ints(data)
    pivots = []
    top = 0
    n = len(rows)
    for col in range(ncols):
        if top == n:
            break
        bit = 1 << col
        sel = -1
        for i in range(top, n):
            if rows[i] & bit:
                sel = i
                break
        if sel < 0:
            continue
        rows[top], rows[sel] = rows[sel], rows[top]
        piv = rows[top]
        for i in range(n):
            if i != top and rows[i] & bit:
                rows[i] ^= piv
        pivots.append(col)
        top += 1
    return _from_ints(rows, data.shape[1]), pivots


def sd_scan(masks, full, order):
    """First pair/triple of distinct rows whose XOR is not a row or a row complement.

    Returns the index tuple of the lexicographically smallest violation,
    or None.
    """
    vals = _to_ints(masks)
    fullv = _to_ints(full.reshape(1, -1))[0]
    member = set(vals)
    member.update(v ^ fullv for v in vals)
    n = len(vals)
    if order == 2:
        for i in range(n):
            a = vals[i]
            for j in range(i + 1, n):
                if a ^ vals[j] not in member:
                    return (i, j)
        return None
    for i in range(n):
        a = vals[i]
        for j in range(i + 1, n):
            x = a ^ vals[j]
            tail = vals[j + 1:]
            missing = {x ^ c for c in tail} - member
            if missing:
                for k in range(j + 1, n):
                    if x ^ vals[k] in missing:
                        return (i, j, k)
    return None


def _span_table(rows_int, nw):
    """All XOR combinations of the given rows as a packed array; index = message bits."""
    span = np.zeros((1, nw), dtype=np.uint64)
    for r in rows_int:
        rv = _from_ints([r], nw)[0]
        span = np.concatenate([span, span ^ rv])
    return span


def _chunked_words(gen):
    """Yield (message offset, packed codeword block) covering the whole code."""
    k, nw = gen.shape
    rows = _to_ints(gen)
    low = min(k, 14)
    span = _span_table(rows[:low], nw)
    high = rows[low:]
    for hi in range(1 << len(high)):
        off = 0
        for t, r in enumerate(high):
            if hi >> t & 1:
                off ^= r
        block = span ^ _from_ints([off], nw)[0] if off else span
        yield hi << low, block


def weight_distribution(gen, n):
    counts = np.zeros(n + 1, dtype=np.int64)
    for _, block in _chunked_words(gen):
        w = np.bitwise_count(block).sum(axis=1)
        counts += np.bincount(w, minlength=n + 1)[: n + 1]
    return counts


def codewords_of_weight(gen, n, weight):
    """Messages (ascending) and packed codewords of the given weight."""
    msgs = []
    words = []
    nw = gen.shape[1]
    for off, block in _chunked_words(gen):
        w = np.bitwise_count(block).sum(axis=1)
        idx = np.nonzero(w == weight)[0]
        if len(idx):
            msgs.append(idx.astype(np.int64) + off)
            words.append(block[idx])
    if not msgs:
        return np.zeros(0, dtype=np.int64), np.zeros((0, nw), dtype=np.uint64)
    return np.concatenate(msgs), np.ascontiguousarray(np.concatenate(words))


def gl_rows(m, lo=1, hi=None):
    """Invertible matrices as row tuples, row-by-row extension order.

    Row i is the image of the unit vector for x_{i+1}; rows are integers in
    the global index convention. The first row is restricted to [lo, hi).
    """
    top = 1 << m
    if hi is None:
        hi = top
    rows = [0] * m

    def rec(i, span):
        if i == m:
            yield tuple(rows)
            return
        start, stop = (max(lo, 1), min(hi, top)) if i == 0 else (1, top)
        for r in range(start, stop):
            if span >> r & 1:
                continue
            rows[i] = r
            shifted = 0
            s = span
            while s:
                low = s & -s
                shifted |= 1 << ((low.bit_length() - 1) ^ r)
                s ^= low
            yield from rec(i + 1, span | shifted)

    yield from rec(0, 1)


def _images(rows, m):
    img = np.zeros(1 << m, dtype=np.int64)
    for x in range(1, 1 << m):
        low = (x & -x).bit_length() - 1
        img[x] = img[x & (x - 1)] ^ rows[m - 1 - low]
    return img


def scan_affine(f_bits, g_bits, m, mode, lo, hi, limit):
    """Scan (A, p) with A invertible and the first row of A in [lo, hi).

    mode 0 accepts when f(xA + p) + g(x) is affine in x; mode 1 when
    f(xA + p) = g(x) for all x. Tables are passed as integers whose bit x is
    the value at x.

    Returns (count, witnesses, complete). Witnesses are (rows, p) in
    enumeration order (matrices in GL order, then p ascending). limit = 0
    collects nothing, limit > 0 stops after that many witnesses, limit < 0
    collects everything.
    """
    size = 1 << m
    xs = np.arange(size, dtype=np.int64)
    ftab = np.array([(f_bits >> int(x)) & 1 for x in xs], dtype=np.uint8)
    gtab = np.array([(g_bits >> int(x)) & 1 for x in xs], dtype=np.uint8)
    xor_tab = xs[:, None] ^ xs[None, :]
    lin = (np.bitwise_count(xs[:, None] & xs[None, :]) & 1).astype(np.uint8)
    unit = [1 << j for j in range(m)]
    weights = np.array([1 << j for j in range(m)], dtype=np.int64)
    count = 0
    wits = []
    for rows in gl_rows(m, lo, hi):
        img = _images(rows, m)
        u = ftab[img]
        h = u[xor_tab] ^ gtab[None, :]
        if mode == 1:
            ok = ~h.any(axis=1)
        else:
            h0 = h[:, 0]
            c = ((h[:, unit] ^ h0[:, None]).astype(np.int64) * weights).sum(axis=1)
            ok = (h == (lin[c] ^ h0[:, None])).all(axis=1)
        hits = np.nonzero(ok)[0]
        if len(hits) == 0:
            continue
        count += len(hits)
        if limit != 0:
            ps = sorted(int(img[q]) for q in hits)
            for p in ps:
                wits.append((rows, p))
                if 0 < limit <= len(wits):
                    return count, wits, False
    return count, wits, True
