"""Exact rational scalars, matrices and linear-algebra primitives.

The scalar type is the standard-library ``Fraction``, which already keeps
values in canonical form (reduced, positive denominator) and computes
exactly. ``ExtendedRational`` adds the two infinities needed for arc
capacities. ``RatMatrix`` plus the module functions provide the exact
rank / solve / affine-dimension routines everything else builds on.
No floating point appears anywhere.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rational = Fraction

F0 = Fraction(0)
F1 = Fraction(1)


def rat(value, den=None) -> Rational:
    """Coerce an int, Fraction or "num/den" string to an exact rational."""
    if den is not None:
        return Fraction(value, den)
    return Fraction(value)


def format_rat(q: Rational) -> str:
    """Render with an explicit denominator, e.g. ``3/2``, ``0/1``."""
    return f"{q.numerator}/{q.denominator}"


@functools.total_ordering
class ExtendedRational:
    """A rational or one of the two infinities, totally ordered.

    Sums are exact; forming ``(-inf) + (+inf)`` raises, since that
    combination never occurs in a valid capacity computation and hitting
    it indicates a caller bug.
    """

    __slots__ = ("_kind", "_value")

    def __init__(self, value=0, *, _kind=0):
        if _kind != 0:
            self._kind = _kind
            self._value = None
            return
        if isinstance(value, ExtendedRational):
            self._kind = value._kind
            self._value = value._value
        else:
            self._kind = 0
            self._value = Fraction(value)

    @property
    def is_finite(self) -> bool:
        return self._kind == 0

    @property
    def finite(self) -> Rational:
        if self._kind != 0:
            raise ValueError("value is infinite")
        return self._value

    def __add__(self, other) -> "ExtendedRational":
        other = as_extended(other)
        if self._kind == 0 and other._kind == 0:
            return ExtendedRational(self._value + other._value)
        if self._kind == 0:
            return other
        if other._kind == 0:
            return self
        if self._kind != other._kind:
            raise ArithmeticError("(-inf) + (+inf) is undefined")
        return self

    __radd__ = __add__

    def __neg__(self) -> "ExtendedRational":
        if self._kind:
            return NEG_INF if self._kind > 0 else POS_INF
        return ExtendedRational(-self._value)

    def __sub__(self, other) -> "ExtendedRational":
        return self + (-as_extended(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (ExtendedRational, Fraction, int)):
            return NotImplemented
        other = as_extended(other)
        if self._kind != other._kind:
            return False
        return self._kind != 0 or self._value == other._value

    def __lt__(self, other) -> bool:
        other = as_extended(other)
        if self._kind != other._kind:
            return self._kind < other._kind
        return self._kind == 0 and self._value < other._value

    def __hash__(self):
        return hash((self._kind, self._value))

    def __repr__(self):
        return f"ExtendedRational({self})"

    def __str__(self):
        if self._kind < 0:
            return "-inf"
        if self._kind > 0:
            return "inf"
        return format_rat(self._value)

    to_str = __str__

    @classmethod
    def parse(cls, text: str) -> "ExtendedRational":
        text = text.strip()
        if text in ("-inf", "-oo"):
            return NEG_INF
        if text in ("inf", "+inf", "oo", "+oo"):
            return POS_INF
        return cls(Fraction(text))


NEG_INF = ExtendedRational(_kind=-1)
POS_INF = ExtendedRational(_kind=1)


def as_extended(value) -> ExtendedRational:
    if isinstance(value, ExtendedRational):
        return value
    return ExtendedRational(value)


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rectangular matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        return cls(len(data), width, data)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows(
            [[F1 if i == j else F0 for j in range(n)] for i in range(n)], cols=n
        )

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )


def _echelon(rows: list) -> int:
    """Forward elimination in place over Fractions; returns the rank."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank_so_far = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank_so_far, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank_so_far], rows[pivot] = rows[pivot], rows[rank_so_far]
        prow = rows[rank_so_far]
        pval = prow[c]
        for i in range(rank_so_far + 1, len(rows)):
            f = rows[i][c]
            if f:
                ratio = f / pval
                ri = rows[i]
                for j in range(c, ncols):
                    ri[j] -= ratio * prow[j]
        rank_so_far += 1
        if rank_so_far == len(rows):
            break
    return rank_so_far


def rank(m: RatMatrix) -> int:
    """Linear rank via exact rational Gaussian elimination."""
    return _echelon([list(row) for row in m.entries])


def solve_linear(m: RatMatrix, rhs: Sequence) -> tuple | None:
    """One exact solution of ``m x = rhs``, or None when inconsistent.

    Free variables are set to zero, so the returned solution is
    deterministic.
    """
    rhs = [Fraction(b) for b in rhs]
    if len(rhs) != m.rows:
        raise DimensionMismatch("rhs length does not match row count")
    aug = [list(row) + [b] for row, b in zip(m.entries, rhs)]
    ncols = m.cols
    pivots = []  # (row, col)
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(aug)):
            if aug[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        prow = aug[r]
        pval = prow[c]
        for i in range(r + 1, len(aug)):
            f = aug[i][c]
            if f:
                ratio = f / pval
                ri = aug[i]
                for j in range(c, ncols + 1):
                    ri[j] -= ratio * prow[j]
        pivots.append((r, c))
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols]:
            return None
    x = [F0] * ncols
    for i, c in reversed(pivots):
        s = aug[i][ncols]
        for j in range(c + 1, ncols):
            if aug[i][j]:
                s -= aug[i][j] * x[j]
        x[c] = s / aug[i][c]
    return tuple(x)


def affine_dimension(points: Iterable[Sequence]) -> int:
    """Dimension of the affine hull: -1 for no points, 0 for a single one."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        return -1
    width = len(pts[0])
    for p in pts:
        if len(p) != width:
            raise DimensionMismatch("points of mixed lengths")
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    if not diffs:
        return 0
    return _echelon(diffs)
