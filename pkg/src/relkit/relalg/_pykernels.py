"""Pure-Python bit-row relation kernels.

A relation over ``n`` points is a tuple of ``n`` ints; bit ``j`` of row ``i``
is set iff ``(i, j)`` is in the relation.
"""

from __future__ import annotations

Rows = tuple[int, ...]


def compose(a: Rows, b: Rows, n: int) -> Rows:
    out = []
    for i in range(n):
        r = a[i]
        acc = 0
        while r:
            low = r & -r
            acc |= b[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return tuple(out)


def converse(a: Rows, n: int) -> Rows:
    out = [0] * n
    for i in range(n):
        r = a[i]
        bit = 1 << i
        while r:
            low = r & -r
            out[low.bit_length() - 1] |= bit
            r ^= low
    return tuple(out)


def closure(a: Rows, n: int) -> Rows:
    """Reflexive-transitive closure (Warshall over bit rows)."""
    rows = [a[i] | (1 << i) for i in range(n)]
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return tuple(rows)
