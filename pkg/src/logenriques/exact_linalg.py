"""Exact rational linear algebra on small symmetric matrices.

Everything here works over :class:`fractions.Fraction` (aliased as
``Rational``) and Python's arbitrary precision integers. There is no
floating point anywhere: definiteness decisions for intersection matrices
sit exactly on the ``det = 0`` boundary, so rounding is not an option.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from fractions import Fraction
from math import lcm

from gmpy2 import mpq

Rational = Fraction

__all__ = [
    "Rational",
    "SingularMatrix",
    "SymMatrix",
    "det_exact",
    "leading_minors",
    "is_negative_definite",
    "solve_exact",
    "negative_definite_sparse",
]


class SingularMatrix(ValueError):
    """Raised when a linear system has no unique solution."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'p/q'")
    return Fraction(x)


class SymMatrix:
    """Immutable square symmetric matrix of rationals."""

    __slots__ = ("_rows",)

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(as_rational(x) for x in row) for row in entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        self._rows = rows

    @property
    def order(self) -> int:
        return len(self._rows)

    @property
    def entries(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"SymMatrix([{body}])"

    def principal(self, indices: Sequence[int]) -> SymMatrix:
        """Principal submatrix on ``indices`` (in the given order)."""
        return SymMatrix([[self._rows[i][j] for j in indices] for i in indices])

    def mul_vector(self, x: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self._rows]


def _integer_rows(m: SymMatrix) -> tuple[list[list[int]], int]:
    """Scale ``m`` by the lcm of its denominators; returns (rows, scale)."""
    scale = 1
    for row in m.entries:
        for x in row:
            scale = lcm(scale, x.denominator)
    rows = [[int(x * scale) for x in row] for row in m.entries]
    return rows, scale


def det_exact(m: SymMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = m.order
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], scale**n)


def leading_minors(m: SymMatrix, stop_at_zero: bool = False) -> list[Fraction]:
    """Leading principal minors ``[D_1, ..., D_n]`` of ``m``.

    Bareiss elimination without pivoting leaves ``D_k`` (times the k-th power
    of the denominator scale) as the k-th pivot. If a minor vanishes the
    remaining ones are computed directly with :func:`det_exact`, unless
    ``stop_at_zero`` is set, in which case the list ends at the zero minor.
    """
    n = m.order
    a, scale = _integer_rows(m)
    minors: list[Fraction] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(Fraction(pivot, scale ** (k + 1)))
        if pivot == 0:
            if stop_at_zero:
                return minors
            for kk in range(k + 1, n):
                minors.append(det_exact(m.principal(range(kk + 1))))
            return minors
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def is_negative_definite(m: SymMatrix) -> bool:
    """Sylvester test: ``sign(D_k) == (-1)**k`` for every leading minor."""
    for k, d in enumerate(leading_minors(m, stop_at_zero=True), start=1):
        if d == 0 or (d > 0) != (k % 2 == 0):
            return False
    return True


def solve_exact(m: SymMatrix, b: Sequence) -> list[Fraction]:
    """Unique solution of ``m x = b``; raises :class:`SingularMatrix` otherwise."""
    n = m.order
    if len(b) != n:
        raise ValueError(f"right-hand side has length {len(b)}, expected {n}")
    # augmented rows; zero entries are skipped so sparse systems stay cheap
    a = [list(row) + [as_rational(v)] for row, v in zip(m.entries, b)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix of order {n} is singular")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        row_k = a[k]
        inv = 1 / row_k[k]
        nz = [j for j in range(k + 1, n + 1) if row_k[j] != 0]
        for i in range(n):
            if i == k:
                continue
            row_i = a[i]
            f = row_i[k]
            if f == 0:
                continue
            f *= inv
            for j in nz:
                row_i[j] -= f * row_k[j]
            row_i[k] = Fraction(0)
    return [a[i][n] / a[i][i] for i in range(n)]


def negative_definite_sparse(
    rows: Mapping[Hashable, Mapping[Hashable, object]], order: Sequence[Hashable]
) -> bool:
    """Negative definiteness of a sparse symmetric matrix.

    ``rows[i][j]`` holds the nonzero entries (diagonal included) and ``order``
    lists every index once. Gaussian elimination is done in that order; the
    product of the first ``k`` pivots is the k-th leading minor of the
    correspondingly permuted matrix, so this is the Sylvester test on a
    symmetric permutation. An elimination order that removes leaves first
    keeps fill-in tiny for the near-tree graphs of this package.
    """
    # mpq is an exact C-level rational; Fraction here costs ~5x the runtime
    a: dict = {
        i: {j: mpq(x) if type(x) is int else mpq(x.numerator, x.denominator) for j, x in rows[i].items()}
        for i in order
    }
    for k in order:
        row_k = a.pop(k)
        pivot = row_k.pop(k, 0)
        if pivot >= 0:
            return False
        nbrs = [(j, v) for j, v in row_k.items() if j in a]
        for idx, (i, vi) in enumerate(nbrs):
            row_i = a[i]
            del row_i[k]
            f = vi / pivot
            for j, vj in nbrs[idx:]:
                new = row_i.get(j, 0) - f * vj
                if new:
                    row_i[j] = new
                    if j != i:
                        a[j][i] = new
                else:
                    row_i.pop(j, None)
                    if j != i:
                        a[j].pop(i, None)
    return True
