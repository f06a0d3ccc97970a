"""Exact linear algebra over the prime field F_p.

Vectors are row vectors and matrices act on the right, so ``v`` is mapped to
``v @ m``.  All arithmetic is integer arithmetic on residues mod p; there is
no floating point anywhere.  Subspaces are stored as bases in reduced
row-echelon form with zero rows removed, which makes equality of subspaces a
literal comparison of arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

__all__ = ["FpMatrix", "Subspace", "rref", "nullspace", "is_odd_prime"]


def is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


_INV_TABLES = {}


def _inverse_table(p):
    tab = _INV_TABLES.get(p)
    if tab is None:
        tab = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
        _INV_TABLES[p] = tab
    return tab


def _rref_array(m, p):
    """Row reduce an int64 array in place-free fashion; returns (rref, rank)."""
    m = np.asarray(m, dtype=np.int64) % p
    rows, cols = m.shape
    if rows == 0:
        return m, 0
    inv = _inverse_table(p)
    m = m.copy()
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = (m[r] * int(inv[m[r, c]])) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        r += 1
        if r == rows:
            break
    return m, r


def _pivot_columns(rr, rank):
    pivots = []
    for i in range(rank):
        nz = np.nonzero(rr[i])[0]
        pivots.append(int(nz[0]))
    return pivots


def _right_kernel_rows(m, p):
    """Basis rows of {v : v @ m.T == 0}, i.e. vectors orthogonal to the rows of m."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    rr, rank = _rref_array(m, p)
    pivots = _pivot_columns(rr, rank)
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for row, c in enumerate(free):
        basis[row, c] = 1
        for i, pc in enumerate(pivots):
            basis[row, pc] = (-rr[i, c]) % p
    basis, _ = _rref_array(basis, p)
    return basis


class FpMatrix:
    """An immutable matrix of residues mod an odd prime p."""

    __slots__ = ("p", "a")

    def __init__(self, p, entries):
        if not is_odd_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        a = np.asarray(entries, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        a.setflags(write=False)

    def __setattr__(self, *args):
        raise AttributeError("FpMatrix is immutable")

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    def _check(self, other):
        if self.p != other.p:
            raise DimensionMismatchError("matrices over different primes")

    def __add__(self, other):
        self._check(other)
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other):
        self._check(other)
        return FpMatrix(self.p, self.a - other.a)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatchError("inner dimensions differ")
        return FpMatrix(self.p, (self.a @ other.a) % self.p)

    def __pow__(self, k):
        if self.rows != self.cols:
            raise DimensionMismatchError("only square matrices have powers")
        if k < 0:
            raise ValueError("negative powers not supported")
        result = np.eye(self.rows, dtype=np.int64)
        base = self.a
        while k:
            if k & 1:
                result = (result @ base) % self.p
            base = (base @ base) % self.p
            k >>= 1
        return FpMatrix(self.p, result)

    def transpose(self):
        return FpMatrix(self.p, self.a.T)

    def is_zero(self):
        return not self.a.any()

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.a.tolist()})"


def rref(m):
    """Reduced row-echelon form of ``m`` together with its rank."""
    rr, rank = _rref_array(m.a, m.p)
    return FpMatrix(m.p, rr), rank


def nullspace(m):
    """The subspace {v : v @ m.T == 0}; its dimension is cols(m) - rank(m)."""
    basis = _right_kernel_rows(m.a, m.p)
    return Subspace(m.p, m.cols, basis, _reduced=True)


class Subspace:
    """A subspace of the row space F_p^n, held as a reduced echelon basis."""

    __slots__ = ("p", "ambient_dim", "basis")

    def __init__(self, p, ambient_dim, rows, _reduced=False):
        if not is_odd_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient_dim) % p
        if not _reduced:
            rr, rank = _rref_array(rows, p)
            rows = rr[:rank]
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", rows)
        rows.setflags(write=False)

    def __setattr__(self, *args):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, p, ambient_dim):
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), _reduced=True)

    @classmethod
    def full(cls, p, ambient_dim):
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64), _reduced=True)

    @property
    def dim(self):
        return self.basis.shape[0]

    def _check(self, other):
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("subspaces of different ambient spaces")

    def contains_vector(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape != (self.ambient_dim,):
            raise DimensionMismatchError("vector has the wrong length")
        for row in self.basis:
            lead = int(np.nonzero(row)[0][0])
            if v[lead]:
                v = (v - v[lead] * row) % self.p
        return not v.any()

    def contains(self, other):
        self._check(other)
        return all(self.contains_vector(row) for row in other.basis)

    def sum(self, other):
        self._check(other)
        stacked = np.vstack([self.basis, other.basis])
        return Subspace(self.p, self.ambient_dim, stacked)

    def intersect(self, other):
        """Kernel-of-concatenation method: relations u*A + w*B = 0 give u*A."""
        self._check(other)
        a, b = self.basis, other.basis
        if a.shape[0] == 0 or b.shape[0] == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        stacked = np.vstack([a, b])
        relations = _right_kernel_rows(stacked.T, self.p)
        if relations.shape[0] == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        vectors = (relations[:, : a.shape[0]] @ a) % self.p
        return Subspace(self.p, self.ambient_dim, vectors)

    def vectors(self):
        """Iterate all p^dim vectors of the subspace (small dims only)."""
        k = self.dim
        coeffs = np.zeros(k, dtype=np.int64)
        while True:
            yield (coeffs @ self.basis) % self.p if k else np.zeros(self.ambient_dim, dtype=np.int64)
            i = k - 1
            while i >= 0 and coeffs[i] == self.p - 1:
                coeffs[i] = 0
                i -= 1
            if i < 0:
                return
            coeffs[i] += 1

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim} of {self.ambient_dim})"
