# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bit-row relation kernels; same contract as ``_pykernels``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy


cdef inline Py_ssize_t _words(Py_ssize_t n):
    return (n + 63) >> 6


cdef uint64_t* _unpack(tuple rows, Py_ssize_t n, Py_ssize_t w) except NULL:
    cdef uint64_t* buf = <uint64_t*> calloc(n * w if n * w > 0 else 1, sizeof(uint64_t))
    cdef bytes raw
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        raw = (<object> rows[i]).to_bytes(w * 8, "little")
        memcpy(&buf[i * w], <const char*> raw, w * 8)
    return buf


cdef tuple _pack(uint64_t* buf, Py_ssize_t n, Py_ssize_t w):
    cdef Py_ssize_t i
    out = []
    for i in range(n):
        out.append(int.from_bytes((<char*> &buf[i * w])[: w * 8], "little"))
    return tuple(out)


def compose(tuple a, tuple b, Py_ssize_t n):
    cdef Py_ssize_t w = _words(n)
    cdef uint64_t* pa = _unpack(a, n, w)
    cdef uint64_t* pb = NULL
    cdef uint64_t* po = NULL
    cdef Py_ssize_t i, j, k
    cdef uint64_t word
    try:
        pb = _unpack(b, n, w)
        po = <uint64_t*> calloc(n * w if n * w > 0 else 1, sizeof(uint64_t))
        if po == NULL:
            raise MemoryError()
        for i in range(n):
            for j in range(n):
                word = pa[i * w + (j >> 6)]
                if (word >> (j & 63)) & 1:
                    for k in range(w):
                        po[i * w + k] |= pb[j * w + k]
        return _pack(po, n, w)
    finally:
        free(pa)
        free(pb)
        free(po)


def converse(tuple a, Py_ssize_t n):
    cdef Py_ssize_t w = _words(n)
    cdef uint64_t* pa = _unpack(a, n, w)
    cdef uint64_t* po = NULL
    cdef Py_ssize_t i, j
    try:
        po = <uint64_t*> calloc(n * w if n * w > 0 else 1, sizeof(uint64_t))
        if po == NULL:
            raise MemoryError()
        for i in range(n):
            for j in range(n):
                if (pa[i * w + (j >> 6)] >> (j & 63)) & 1:
                    po[j * w + (i >> 6)] |= (<uint64_t> 1) << (i & 63)
        return _pack(po, n, w)
    finally:
        free(pa)
        free(po)


def closure(tuple a, Py_ssize_t n):
    cdef Py_ssize_t w = _words(n)
    cdef uint64_t* p = _unpack(a, n, w)
    cdef Py_ssize_t i, k, x
    try:
        for i in range(n):
            p[i * w + (i >> 6)] |= (<uint64_t> 1) << (i & 63)
        for k in range(n):
            for i in range(n):
                if (p[i * w + (k >> 6)] >> (k & 63)) & 1:
                    for x in range(w):
                        p[i * w + x] |= p[k * w + x]
        return _pack(p, n, w)
    finally:
        free(p)
