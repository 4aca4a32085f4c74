"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow no matter how
large the intermediate entries of an elimination become.  Relations are rows:
a matrix ``A`` with ``c`` columns stands for the sublattice of ``Z^c`` spanned
by its rows.

Pivoting is deterministic (smallest absolute value, first occurrence in
row-major order on ties), so the transformation matrices returned by
:func:`hermite_normal_form` and :func:`smith_normal_form` are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, ParameterError

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "AbGroupStructure",
    "smith_normal_form",
    "hermite_normal_form",
    "hnf_basis",
    "quotient_invariants",
    "is_saturated",
    "kernel_mod_m",
    "sublattice_equal",
    "rank",
]


class IntMatrix:
    """Immutable integer matrix stored row-major as a tuple of tuples.

    ``IntMatrix([], ncols=3)`` is the legal 0x3 matrix; shapes with zero rows
    or columns represent the zero lattice / zero map.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]] = (), ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise DimensionError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise DimensionError(f"row of length {len(r)} in a matrix with {ncols} columns")
        if ncols < 0:
            raise DimensionError("negative column count")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(([0] * ncols for _ in range(nrows)), ncols=ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return self.nrows

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"

    def transpose(self) -> "IntMatrix":
        if not self.nrows:
            return IntMatrix(([] for _ in range(self.ncols)), ncols=0)
        return IntMatrix(zip(*self.rows), ncols=self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows),
            ncols=other.ncols,
        )

    def select_columns(self, cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(([r[j] for j in cols] for r in self.rows), ncols=len(cols))

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise DimensionError(f"cannot stack {self.shape} on {other.shape}")
        return IntMatrix(self.rows + other.rows, ncols=self.ncols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise DimensionError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return sign * a[n - 1][n - 1]


def _as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(self.D.nrows, self.D.ncols)
        return tuple(self.D[i, i] for i in range(k))


@dataclass(frozen=True)
class AbGroupStructure:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``1 < d_1 | d_2 | ...``."""

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        fs = self.invariant_factors
        if any(d <= 1 for d in fs):
            raise ValueError(f"invariant factors must exceed 1: {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {fs}")

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int | None:
        """Order of the group, or None when it is infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# elementary operations on lists of lists (in place)


def _row_axpy(M, dst, src, q):
    """M[dst] -= q * M[src]"""
    if q:
        M[dst] = [a - q * b for a, b in zip(M[dst], M[src])]


def _col_axpy(M, dst, src, q):
    """column dst -= q * column src"""
    if q:
        for row in M:
            b = row[src]
            if b:
                row[dst] -= q * b


def _swap_cols(M, i, j):
    if i != j:
        for row in M:
            row[i], row[j] = row[j], row[i]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Hermite normal form


def _hnf_in_place(H, U=None):
    """Row-style HNF of ``H`` (list of lists), applying the same row ops to ``U``.

    Returns the list of pivot columns; rows ``len(pivots):`` of ``H`` are zero.
    """
    m = len(H)
    n = len(H[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            if p != r:
                H[r], H[p] = H[p], H[r]
                if U is not None:
                    U[r], U[p] = U[p], U[r]
            if len(nz) == 1:
                break
            piv = H[r][c]
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // piv
                    _row_axpy(H, i, r, q)
                    if U is not None:
                        _row_axpy(U, i, r, q)
        if not H[r][c]:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            if H[i][c]:
                q = H[i][c] // piv
                _row_axpy(H, i, r, q)
                if U is not None:
                    _row_axpy(U, i, r, q)
        pivots.append(c)
        r += 1
    return pivots


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Return ``(H, U)`` with ``U @ A == H``, ``U`` unimodular and ``H`` in row HNF.

    Pivots of ``H`` are positive and the entries above each pivot lie in
    ``[0, pivot)``; zero rows are kept at the bottom so ``H`` has the shape of ``A``.
    """
    A = _as_matrix(A)
    H = A.tolist()
    U = _identity(A.nrows)
    _hnf_in_place(H, U)
    return IntMatrix(H, ncols=A.ncols), IntMatrix(U, ncols=A.nrows)


def hnf_basis(A) -> IntMatrix:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    A = _as_matrix(A)
    H = A.tolist()
    pivots = _hnf_in_place(H)
    return IntMatrix(H[: len(pivots)], ncols=A.ncols)


def rank(A) -> int:
    return hnf_basis(A).nrows


# ---------------------------------------------------------------------------
# Smith normal form


def _smallest_entry(D, t):
    best = None
    best_abs = 0
    for i in range(t, len(D)):
        row = D[i]
        for j in range(t, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best_abs):
                best, best_abs = (i, j), abs(v)
                if best_abs == 1:
                    return best
    return best


def _snf_in_place(D, U=None, V=None):
    m = len(D)
    n = len(D[0]) if m else 0
    for t in range(min(m, n)):
        pos = _smallest_entry(D, t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            D[t], D[i] = D[i], D[t]
            if U is not None:
                U[t], U[i] = U[i], U[t]
        _swap_cols(D, t, j)
        if V is not None:
            _swap_cols(V, t, j)
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // piv
                    _row_axpy(D, i, t, q)
                    if U is not None:
                        _row_axpy(U, i, t, q)
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // piv
                    _col_axpy(D, j, t, q)
                    if V is not None:
                        _col_axpy(V, j, t, q)
            # a nonzero remainder becomes the new pivot
            rem = [(abs(D[i][t]), 0, i) for i in range(t + 1, m) if D[i][t]]
            rem += [(abs(D[t][j]), 1, j) for j in range(t + 1, n) if D[t][j]]
            if rem:
                _, kind, k = min(rem)
                if kind == 0:
                    D[t], D[k] = D[k], D[t]
                    if U is not None:
                        U[t], U[k] = U[k], U[t]
                else:
                    _swap_cols(D, t, k)
                    if V is not None:
                        _swap_cols(V, t, k)
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_axpy(D, t, bad, -1)
            if U is not None:
                _row_axpy(U, t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form ``U @ A @ V == D`` with unimodular ``U`` and ``V``.

    The diagonal of ``D`` is non-negative and each entry divides the next.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    (2, 4)
    """
    A = _as_matrix(A)
    D = A.tolist()
    U = _identity(A.nrows)
    V = _identity(A.ncols)
    _snf_in_place(D, U, V)
    return SmithDecomposition(
        IntMatrix(U, ncols=A.nrows), IntMatrix(D, ncols=A.ncols), IntMatrix(V, ncols=A.ncols)
    )


def _elementary_divisors(rows, ncols):
    """Nonzero SNF diagonal of the row lattice spanned by ``rows``."""
    H = [list(r) for r in rows]
    pivots = _hnf_in_place(H)
    H = H[: len(pivots)]
    # a unit pivot lets its generator be eliminated: drop its row and column
    keep_rows = [i for i, c in enumerate(pivots) if H[i][c] != 1]
    units = len(pivots) - len(keep_rows)
    if not keep_rows:
        return [1] * units
    unit_cols = {c for i, c in enumerate(pivots) if H[i][c] == 1}
    cols = [j for j in range(ncols) if j not in unit_cols]
    D = [[H[i][j] for j in cols] for i in keep_rows]
    _snf_in_place(D)
    diag = [D[i][i] for i in range(min(len(D), len(cols)))]
    return [1] * units + [d for d in diag if d]


def quotient_invariants(relation_rows, ambient_rank: int) -> AbGroupStructure:
    """Structure of ``Z^ambient_rank`` modulo the row lattice of ``relation_rows``."""
    rows = _rows_for(relation_rows, ambient_rank)
    divisors = _elementary_divisors(rows, ambient_rank)
    return AbGroupStructure(ambient_rank - len(divisors), tuple(d for d in divisors if d > 1))


def _rows_for(relation_rows, ambient_rank):
    if isinstance(relation_rows, IntMatrix):
        if relation_rows.ncols != ambient_rank:
            raise DimensionError(
                f"relation matrix has {relation_rows.ncols} columns, ambient rank is {ambient_rank}"
            )
        return relation_rows.rows
    rows = [tuple(r) for r in relation_rows]
    for r in rows:
        if len(r) != ambient_rank:
            raise DimensionError(f"relation of length {len(r)}, ambient rank is {ambient_rank}")
    return rows


def is_saturated(relation_rows) -> bool:
    """True iff ``Z^c / L`` is torsion-free, i.e. every nonzero SNF factor is 1."""
    A = _as_matrix(relation_rows)
    return all(d == 1 for d in _elementary_divisors(A.rows, A.ncols))


def kernel_mod_m(A, m: int) -> IntMatrix:
    """HNF basis of ``{x in Z^c : A x = 0 (mod m)}`` where ``c = A.ncols``."""
    if m < 2:
        raise ParameterError(f"modulus must be at least 2, got {m}")
    A = _as_matrix(A)
    r, c = A.nrows, A.ncols
    # rows (x A^T + m y | x); echelon on the left block isolates the kernel
    cols = A.transpose().rows if r else [()] * c
    M = [list(cols[i]) + [int(i == j) for j in range(c)] for i in range(c)]
    M += [[m * int(i == j) for j in range(r)] + [0] * c for i in range(r)]
    pivots = _hnf_in_place(M)
    kernel = [row[r:] for row in M[: len(pivots)] if not any(row[:r])]
    return hnf_basis(IntMatrix(kernel, ncols=c))


def sublattice_equal(A_rows, B_rows) -> bool:
    A = _as_matrix(A_rows)
    B = _as_matrix(B_rows)
    if A.ncols != B.ncols:
        raise DimensionError(f"column mismatch: {A.ncols} vs {B.ncols}")
    return hnf_basis(A) == hnf_basis(B)


def lattice_index(basis) -> int:
    """Index of a full-rank sublattice, 0 when the rank is deficient."""
    H = hnf_basis(basis)
    if H.nrows != H.ncols:
        return 0
    out = 1
    for i in range(H.nrows):
        out *= H[i, i]
    return out


def content(vector: Iterable[int]) -> int:
    g = 0
    for x in vector:
        g = gcd(g, x)
    return g
