"""Dense matrices of :class:`~hyperctrl.poly.Poly` entries."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .poly import Poly, PolyError, Scalar, dot

Vector = list[Poly]


class PolyMatrix:
    """Row-major ``rows x cols`` grid of Polys sharing one ``nvars``."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]], nvars: int | None = None, cols: int | None = None):
        grid = [list(r) for r in entries]
        if grid and cols is not None and any(len(r) != cols for r in grid):
            raise PolyError("ragged matrix")
        ncols = len(grid[0]) if grid else (cols or 0)
        if any(len(r) != ncols for r in grid):
            raise PolyError("ragged matrix")
        seen = {p.nvars for r in grid for p in r}
        if nvars is not None:
            seen.add(nvars)
        if len(seen) > 1:
            raise PolyError(f"entries disagree on nvars: {sorted(seen)}")
        if not seen:
            raise PolyError("nvars required for an empty matrix")
        self.nvars = seen.pop()
        self.rows = len(grid)
        self.cols = ncols
        self.entries = grid

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int) -> "PolyMatrix":
        z = Poly.zero(nvars)
        return cls([[z] * cols for _ in range(rows)], nvars, cols)

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        one, z = Poly.const(nvars, 1), Poly.zero(nvars)
        return cls([[one if i == j else z for j in range(n)] for i in range(n)], nvars, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Poly]], nrows: int, nvars: int) -> "PolyMatrix":
        for c in columns:
            if len(c) != nrows:
                raise PolyError(f"column of length {len(c)} in a {nrows}-row matrix")
        return cls([[c[i] for c in columns] for i in range(nrows)], nvars, len(columns))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Poly]], ncols: int, nvars: int) -> "PolyMatrix":
        return cls(rows, nvars, ncols)

    @classmethod
    def from_scalars(cls, data: Sequence[Sequence[Scalar]], nvars: int) -> "PolyMatrix":
        return cls([[Poly.const(nvars, v) for v in row] for row in data], nvars,
                   len(data[0]) if data else 0)

    # access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.entries]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def row(self, i: int) -> Vector:
        return list(self.entries[i])

    def __iter__(self):
        return (p for r in self.entries for p in r)

    # algebra ----------------------------------------------------------

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_columns(self.entries, self.cols, self.nvars)

    def map(self, fn: Callable[[Poly], Poly]) -> "PolyMatrix":
        return PolyMatrix([[fn(p) for p in r] for r in self.entries], self.nvars, self.cols)

    def dt(self) -> "PolyMatrix":
        return self.map(Poly.dt)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.nvars, self.cols)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.nvars, self.cols)

    def scale(self, c: Scalar) -> "PolyMatrix":
        return self.map(lambda p: p.scale(c))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise PolyError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return PolyMatrix([[dot(r, c, self.nvars) for c in cols] for r in self.entries],
                          self.nvars, other.cols)

    def apply(self, v: Sequence[Poly]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise PolyError(f"vector of length {len(v)} against {self.cols} columns")
        return [dot(r, v, self.nvars) for r in self.entries]

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows:
            raise PolyError("hstack row mismatch")
        return PolyMatrix([r + s for r, s in zip(self.entries, other.entries)], self.nvars,
                          self.cols + other.cols)

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.cols:
            raise PolyError("vstack column mismatch")
        return PolyMatrix(self.entries + other.entries, self.nvars, self.cols)

    def max_total_degree(self) -> int:
        return max((p.total_degree() for p in self), default=-1)

    def depends_on_state(self) -> bool:
        return any(p.depends_on_state() for p in self)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self)

    def _same_shape(self, other: "PolyMatrix") -> None:
        if self.shape != other.shape:
            raise PolyError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.nvars == other.nvars and self.entries == other.entries

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(p) for p in r) for r in self.entries)
        return f"PolyMatrix({self.rows}x{self.cols}: [{body}])"


def jacobian(v: Sequence[Poly], nvars: int) -> PolyMatrix:
    """``d v_i / d x_j`` over the state variables."""
    return PolyMatrix([p.gradient() for p in v], nvars, nvars)


def jvp(v: Sequence[Poly], w: Sequence[Poly], nvars: int) -> Vector:
    """``(dv/dx) w`` without materialising the Jacobian."""
    return [dot(p.gradient(), w, nvars) for p in v]


def is_zero_vector(v: Iterable[Poly]) -> bool:
    return all(p.is_zero() for p in v)
