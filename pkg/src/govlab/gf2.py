"""Dense F2 linear algebra on bit-packed rows.

A matrix is a list of Python ints; bit j of row i is the (i, j) entry.
Everything here is tiny (dimensions rarely exceed 10), so plain
Gaussian elimination with XOR row operations is all we need.
"""

from __future__ import annotations


def from_entries(entries) -> list[int]:
    """Pack a list-of-lists of 0/1 entries into bit rows."""
    rows = []
    for r in entries:
        acc = 0
        for j, e in enumerate(r):
            if e & 1:
                acc |= 1 << j
        rows.append(acc)
    return rows


def to_entries(rows: list[int], ncols: int) -> list[list[int]]:
    return [[(r >> j) & 1 for j in range(ncols)] for r in rows]


def rank(rows: list[int]) -> int:
    """Rank over F2; the input list is not modified."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            low = b & -b
            if r & low:
                r ^= b
        if r:
            basis.append(r)
    return len(basis)


def corank(rows: list[int], n: int) -> int:
    return n - rank(rows)


def kernel_basis(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x : M x = 0}, x packed as an ncols-bit int.

    Row i of M is rows[i]; M x reads each row as a linear form.
    """
    # Column-echelon on the transpose: work with columns as vectors.
    cols = []
    for j in range(ncols):
        c = 0
        for i, r in enumerate(rows):
            if (r >> j) & 1:
                c |= 1 << i
        cols.append(c)
    # Gaussian elimination tracking the combination of original columns.
    reduced: list[tuple[int, int]] = []  # (column vector, combination mask)
    kernel = []
    for j in range(ncols):
        c, comb = cols[j], 1 << j
        for vec, vcomb in reduced:
            low = vec & -vec
            if c & low:
                c ^= vec
                comb ^= vcomb
        if c:
            reduced.append((c, comb))
        else:
            kernel.append(comb)
    return kernel


def add(a: list[int], b: list[int]) -> list[int]:
    return [x ^ y for x, y in zip(a, b, strict=True)]


def zero(m: int) -> list[int]:
    return [0] * m


def is_symmetric(rows: list[int], n: int) -> bool:
    return all((rows[i] >> j) & 1 == (rows[j] >> i) & 1 for i in range(n) for j in range(i))


def is_alternating(rows: list[int], n: int) -> bool:
    if any((rows[i] >> i) & 1 for i in range(n)):
        return False
    return is_symmetric(rows, n)


def random_matrix(rng, m: int) -> list[int]:
    return [rng.getrandbits(m) if m else 0 for _ in range(m)]


def all_matrices(m: int):
    """Yield every m x m matrix over F2 (2^(m^2) of them)."""
    for code in range(1 << (m * m)):
        yield [(code >> (m * i)) & ((1 << m) - 1) for i in range(m)]


def all_alternating(m: int):
    """Yield every alternating m x m matrix (zero diagonal, symmetric)."""
    npairs = m * (m - 1) // 2
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for code in range(1 << npairs):
        rows = [0] * m
        for k, (i, j) in enumerate(pairs):
            if (code >> k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        yield rows
