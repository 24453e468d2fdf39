# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_fallback`` exactly (same inputs, outputs, order)."""

import numpy as np
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, realloc, free
from libc.string cimport memcpy

BACKEND = "cython"

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil


def rref(data, Py_ssize_t ncols):
    cdef uint64_t[:, ::1] a = np.array(data, dtype=np.uint64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0], nw = a.shape[1]
    cdef Py_ssize_t top = 0, col, i, w, sel, word
    cdef uint64_t bit, tmp
    pivots = []
    for col in range(ncols):
        if top == n:
            break
        word = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        sel = -1
        for i in range(top, n):
            if a[i, word] & bit:
                sel = i
                break
        if sel < 0:
            continue
        if sel != top:
            for w in range(nw):
                tmp = a[sel, w]
                a[sel, w] = a[top, w]
                a[top, w] = tmp
        for i in range(n):
            if i != top and (a[i, word] & bit):
                for w in range(word, nw):
                    a[i, w] ^= a[top, w]
        pivots.append(col)
        top += 1
    return np.asarray(a), pivots


cdef inline uint64_t _hash(const uint64_t* p, Py_ssize_t nw) nogil:
    cdef uint64_t h = 0x9E3779B97F4A7C15ULL
    cdef Py_ssize_t w
    for w in range(nw):
        h ^= p[w]
        h *= 0xff51afd7ed558ccdULL
        h ^= h >> 33
    return h


cdef inline bint _eq(const uint64_t* p, const uint64_t* q, Py_ssize_t nw) nogil:
    cdef Py_ssize_t w
    for w in range(nw):
        if p[w] != q[w]:
            return False
    return True


cdef inline bint _member(const uint64_t* keys, const int64_t* table, uint64_t tmask,
                         const uint64_t* x, Py_ssize_t nw) nogil:
    cdef uint64_t slot = _hash(x, nw) & tmask
    cdef int64_t idx
    while True:
        idx = table[slot]
        if idx == 0:
            return False
        if _eq(keys + (idx - 1) * nw, x, nw):
            return True
        slot = (slot + 1) & tmask


def sd_scan(masks, full, int order):
    cdef const uint64_t[:, ::1] a = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef const uint64_t[::1] fv = np.ascontiguousarray(full, dtype=np.uint64)
    cdef Py_ssize_t n = a.shape[0], nw = a.shape[1]
    cdef Py_ssize_t i, j, k, w
    if n < order:
        return None
    keys_np = np.empty((2 * n, nw), dtype=np.uint64)
    cdef uint64_t[:, ::1] keys = keys_np
    for i in range(n):
        for w in range(nw):
            keys[i, w] = a[i, w]
            keys[n + i, w] = a[i, w] ^ fv[w]
    cdef uint64_t tsize = 1
    while tsize < 8 * n:
        tsize <<= 1
    cdef uint64_t tmask = tsize - 1
    cdef int64_t* table = <int64_t*>calloc(tsize, sizeof(int64_t))
    cdef uint64_t* x = <uint64_t*>malloc(nw * sizeof(uint64_t))
    cdef uint64_t* y = <uint64_t*>malloc(nw * sizeof(uint64_t))
    cdef uint64_t slot
    cdef const uint64_t* kp = &keys[0, 0]
    result = None
    try:
        for i in range(2 * n):
            if _member(kp, table, tmask, &keys[i, 0], nw):
                continue
            slot = _hash(&keys[i, 0], nw) & tmask
            while table[slot] != 0:
                slot = (slot + 1) & tmask
            table[slot] = i + 1
        if order == 2:
            for i in range(n):
                for j in range(i + 1, n):
                    for w in range(nw):
                        x[w] = a[i, w] ^ a[j, w]
                    if not _member(kp, table, tmask, x, nw):
                        result = (i, j)
                        return result
            return None
        for i in range(n):
            for j in range(i + 1, n):
                for w in range(nw):
                    x[w] = a[i, w] ^ a[j, w]
                for k in range(j + 1, n):
                    for w in range(nw):
                        y[w] = x[w] ^ a[k, w]
                    if not _member(kp, table, tmask, y, nw):
                        result = (i, j, k)
                        return result
        return None
    finally:
        free(table)
        free(x)
        free(y)


cdef uint64_t* _copy_rows(const uint64_t[:, ::1] g):
    cdef Py_ssize_t k = g.shape[0], nw = g.shape[1], r, w
    cdef uint64_t* out = <uint64_t*>calloc(k * nw if k * nw > 0 else 1, sizeof(uint64_t))
    for r in range(k):
        for w in range(nw):
            out[r * nw + w] = g[r, w]
    return out


def weight_distribution(gen, Py_ssize_t n):
    cdef const uint64_t[:, ::1] g = np.ascontiguousarray(gen, dtype=np.uint64)
    cdef Py_ssize_t k = g.shape[0], nw = g.shape[1]
    counts_np = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] counts = counts_np
    cdef uint64_t* rows = _copy_rows(g)
    cdef uint64_t* cur = <uint64_t*>calloc(nw if nw > 0 else 1, sizeof(uint64_t))
    cdef uint64_t i, total = (<uint64_t>1) << k
    cdef Py_ssize_t w, base
    cdef int wt
    try:
        with nogil:
            counts[0] = 1
            for i in range(1, total):
                base = ctz64(i) * nw
                wt = 0
                for w in range(nw):
                    cur[w] ^= rows[base + w]
                    wt += popcount64(cur[w])
                counts[wt] += 1
    finally:
        free(cur)
        free(rows)
    return counts_np


def codewords_of_weight(gen, Py_ssize_t n, int weight):
    """Walk messages in ascending order; u -> u+1 adds the prefix xor of rows 0..ctz(u+1)."""
    cdef const uint64_t[:, ::1] g = np.ascontiguousarray(gen, dtype=np.uint64)
    cdef Py_ssize_t k = g.shape[0], nw = g.shape[1]
    cdef uint64_t u, total = (<uint64_t>1) << k
    cdef Py_ssize_t w, base, hits = 0, cap = 1024
    cdef int wt
    cdef uint64_t* prefix = _copy_rows(g)
    cdef uint64_t* cur = <uint64_t*>calloc(nw if nw > 0 else 1, sizeof(uint64_t))
    cdef int64_t* msgs = <int64_t*>malloc(cap * sizeof(int64_t))
    cdef uint64_t* words = <uint64_t*>malloc(cap * (nw if nw > 0 else 1) * sizeof(uint64_t))
    cdef void* grown
    try:
        for base in range(1, k):
            for w in range(nw):
                prefix[base * nw + w] ^= prefix[(base - 1) * nw + w]
        with nogil:
            for u in range(total):
                if u:
                    base = ctz64(u) * nw
                    wt = 0
                    for w in range(nw):
                        cur[w] ^= prefix[base + w]
                        wt += popcount64(cur[w])
                else:
                    wt = 0
                if wt != weight:
                    continue
                if hits == cap:
                    cap *= 2
                    grown = realloc(msgs, cap * sizeof(int64_t))
                    if grown == NULL:
                        with gil:
                            raise MemoryError()
                    msgs = <int64_t*>grown
                    grown = realloc(words, cap * (nw if nw > 0 else 1) * sizeof(uint64_t))
                    if grown == NULL:
                        with gil:
                            raise MemoryError()
                    words = <uint64_t*>grown
                msgs[hits] = <int64_t>u
                for w in range(nw):
                    words[hits * nw + w] = cur[w]
                hits += 1
        m_np = np.empty(hits, dtype=np.int64)
        w_np = np.empty((hits, nw), dtype=np.uint64)
        if hits:
            _copy_out(msgs, words, hits, nw, m_np, w_np)
    finally:
        free(words)
        free(msgs)
        free(cur)
        free(prefix)
    return m_np, w_np


cdef void _copy_out(int64_t* msgs, uint64_t* words, Py_ssize_t hits, Py_ssize_t nw,
                    int64_t[::1] m_out, uint64_t[:, ::1] w_out):
    memcpy(&m_out[0], msgs, hits * sizeof(int64_t))
    if nw:
        memcpy(&w_out[0, 0], words, hits * nw * sizeof(uint64_t))


cdef struct ScanState:
    int m
    int size
    uint64_t full
    uint64_t f_bits
    uint64_t g_bits
    int mode
    int lo
    int hi
    long long limit
    long long count
    long long nwits
    bint stop
    uint64_t lin[64]
    uint64_t lomask[6]
    int rows[6]
    int img[64]
    int hits[64]


cdef inline uint64_t _translate(ScanState* st, uint64_t t, int j) nogil:
    cdef int s = 1 << j
    cdef uint64_t lm = st.lomask[j]
    return ((t >> s) & lm) | ((t & lm) << s)


cdef int _leaf(ScanState* st, list wits) except -1:
    cdef int m = st.m, size = st.size
    cdef int x, q, j, nh = 0, i
    cdef uint64_t u = 0, t, h, h0, c, expect
    st.img[0] = 0
    for x in range(1, size):
        st.img[x] = st.img[x & (x - 1)] ^ st.rows[m - 1 - ctz64(x)]
    for x in range(size):
        if (st.f_bits >> st.img[x]) & 1:
            u |= (<uint64_t>1) << x
    t = u
    q = 0
    for i in range(size):
        if i > 0:
            j = ctz64(i)
            t = _translate(st, t, j)
            q ^= 1 << j
        h = t ^ st.g_bits
        if st.mode == 1:
            if h == 0:
                st.hits[nh] = q
                nh += 1
        else:
            h0 = h & 1
            c = 0
            for j in range(m):
                c |= (((h >> (1 << j)) & 1) ^ h0) << j
            expect = st.lin[c] ^ (st.full if h0 else 0)
            if h == expect:
                st.hits[nh] = q
                nh += 1
    if nh == 0:
        return 0
    st.count += nh
    if st.limit != 0:
        ps = sorted([st.img[st.hits[i]] for i in range(nh)])
        rows = tuple([st.rows[i] for i in range(m)])
        for p in ps:
            wits.append((rows, p))
            st.nwits += 1
            if st.limit > 0 and st.nwits >= st.limit:
                st.stop = True
                return 0
    return 0


cdef uint64_t _shift_span(ScanState* st, uint64_t span, int r) nogil:
    cdef int j
    for j in range(st.m):
        if (r >> j) & 1:
            span = _translate(st, span, j)
    return span


cdef int _rec(ScanState* st, int i, uint64_t span, list wits) except -1:
    cdef int r, start, stop
    if i == st.m:
        _leaf(st, wits)
        return 0
    if i == 0:
        start = st.lo if st.lo > 1 else 1
        stop = st.hi if st.hi < st.size else st.size
    else:
        start = 1
        stop = st.size
    for r in range(start, stop):
        if (span >> r) & 1:
            continue
        st.rows[i] = r
        _rec(st, i + 1, span | _shift_span(st, span, r), wits)
        if st.stop:
            return 0
    return 0


def scan_affine(f_bits, g_bits, int m, int mode, int lo, int hi, long long limit):
    if m < 1 or m > 6:
        raise ValueError("compiled affine scan supports 1 <= m <= 6")
    cdef ScanState st
    cdef int x, c, j
    st.m = m
    st.size = 1 << m
    st.full = (~(<uint64_t>0)) if m == 6 else (((<uint64_t>1) << st.size) - 1)
    st.f_bits = <uint64_t>int(f_bits)
    st.g_bits = <uint64_t>int(g_bits)
    st.mode = mode
    st.lo = lo
    st.hi = hi
    st.limit = limit
    st.count = 0
    st.nwits = 0
    st.stop = False
    for j in range(m):
        st.lomask[j] = 0
        for x in range(st.size):
            if not (x >> j) & 1:
                st.lomask[j] |= (<uint64_t>1) << x
    for c in range(st.size):
        st.lin[c] = 0
        for x in range(st.size):
            if popcount64(c & x) & 1:
                st.lin[c] |= (<uint64_t>1) << x
    wits = []
    _rec(&st, 0, 1, wits)
    return int(st.count), wits, not st.stop
