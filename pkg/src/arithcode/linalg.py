"""Small exact square-matrix type over Fractions."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .exact import as_rational, format_rational

Vector = Tuple[Fraction, ...]


class RationalMatrix:
    """Immutable square matrix with Fraction entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("RationalMatrix must be square and non-empty")
        self.rows = rows

    @classmethod
    def _wrap(cls, rows) -> "RationalMatrix":
        m = object.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        return m

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._wrap((one if i == j else zero for j in range(size)) for i in range(size))

    @classmethod
    def constant(cls, size: int, value) -> "RationalMatrix":
        v = as_rational(value)
        return cls._wrap((v,) * size for _ in range(size))

    @classmethod
    def from_function(cls, size: int, fn) -> "RationalMatrix":
        return cls._wrap((as_rational(fn(i, j)) for j in range(size)) for i in range(size))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows)
        return f"RationalMatrix([{body}])"

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix._wrap(
            (a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix._wrap(
            (a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def scale(self, factor) -> "RationalMatrix":
        f = as_rational(factor)
        return RationalMatrix._wrap((f * x for x in r) for r in self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        cols = list(zip(*other.rows))
        return RationalMatrix._wrap(
            (sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows
        )

    def __pow__(self, n: int) -> "RationalMatrix":
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = RationalMatrix.identity(self.size)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def apply(self, vec: Sequence) -> Vector:
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._wrap(zip(*self.rows))

    def diagonal(self) -> Vector:
        return tuple(self.rows[i][i] for i in range(self.size))

    def row_sums(self) -> Vector:
        return tuple(sum(r) for r in self.rows)

    def column_sums(self) -> Vector:
        return tuple(sum(c) for c in zip(*self.rows))

    def is_lower_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.size) for j in range(i + 1, self.size))

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.size) for j in range(i))

    def max_abs_deviation(self, other: "RationalMatrix") -> Fraction:
        return max(abs(a - b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def nullspace(self) -> List[Vector]:
        """Exact basis of ``{x : M x = 0}`` by Gauss-Jordan elimination."""
        n = self.size
        a: List[List[Fraction]] = [list(r) for r in self.rows]
        pivots: List[int] = []
        row = 0
        for col in range(n):
            pr: Optional[int] = next((r for r in range(row, n) if a[r][col] != 0), None)
            if pr is None:
                continue
            a[row], a[pr] = a[pr], a[row]
            piv = a[row][col]
            a[row] = [x / piv for x in a[row]]
            for r in range(n):
                if r != row and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[row])]
            pivots.append(col)
            row += 1
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            x = [Fraction(0)] * n
            x[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                x[pc] = -a[r][fc]
            basis.append(tuple(x))
        return basis

    def to_json(self) -> List[List[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls(data)
