"""Dense matrices over the rational function field, plus exact row reduction."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import Singular
from .ratfunc import RationalFunction

RF = RationalFunction


def rref(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows ``{col: value}``.

    Works for any exact field whose elements support + - * / and truth
    testing (Fraction, RationalFunction). Pivots are taken column by
    column, choosing the first available row with the sparsest pivot
    entry, so the output depends only on the input matrix.
    """
    work = [{c: v for c, v in r.items() if v} for r in rows]
    work = [r for r in work if r]
    pivots: list[int] = []
    done: list[dict] = []
    for col in range(ncols):
        cands = [i for i, r in enumerate(work) if col in r]
        if not cands:
            continue
        best = min(cands, key=lambda i: (_weight(work[i][col]), len(work[i]), i))
        prow = work.pop(best)
        inv = 1 / prow[col] if not isinstance(prow[col], RF) else prow[col].inverse()
        prow = {c: v * inv for c, v in prow.items()}
        prow[col] = _one_like(prow[col])
        for i, r in enumerate(work):
            if col in r:
                work[i] = _axpy(r, prow, r[col])
        for i, r in enumerate(done):
            if col in r:
                done[i] = _axpy(r, prow, r[col])
        work = [r for r in work if r]
        done.append(prow)
        pivots.append(col)
    return done, pivots


def _weight(v) -> int:
    if isinstance(v, RF):
        return len(v.num.terms) + len(v.den.terms)
    return 0


def _one_like(v):
    return RF.constant(1) if isinstance(v, RF) else Fraction(1)


def _axpy(row: dict, prow: dict, factor) -> dict:
    """row - factor*prow with zero entries dropped."""
    out = dict(row)
    for c, v in prow.items():
        nv = out.get(c)
        nv = -(factor * v) if nv is None else nv - factor * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def nullspace_rows(rows: list[dict], ncols: int, one=None) -> list[list]:
    """Right kernel basis from sparse rows, one vector per free column."""
    red, pivots = rref(rows, ncols)
    one = RF.constant(1) if one is None else one
    zero = one - one
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, pc in zip(red, pivots):
            if f in r:
                vec[pc] = -r[f]
        lead = next(v for v in vec if v)
        if lead != one:
            inv = one / lead
            vec = [v * inv for v in vec]
        basis.append(vec)
    return basis


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    return len(rref(sparse, ncols)[1])


class Matrix:
    """Rectangular matrix of RationalFunction entries (immutable)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(RF.coerce(v) for v in r) for r in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("matrix rows must have equal length")

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "Matrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"

    def transpose(self) -> Matrix:
        return Matrix(zip(*self.rows)) if self.rows else Matrix([])

    def map(self, fn: Callable[[RF], RF]) -> Matrix:
        return Matrix([[fn(v) for v in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            n, k = self.shape
            k2, m = other.shape
            if k != k2:
                raise ValueError("shape mismatch in matrix product")
            cols = other.transpose().rows
            return Matrix([[_dot(r, c) for c in cols] for r in self.rows])
        return self.map(lambda v: v * other)

    def apply(self, vec: Sequence) -> list[RF]:
        vec = [RF.coerce(v) for v in vec]
        if len(vec) != self.shape[1]:
            raise ValueError("vector length does not match matrix")
        return [_dot(r, vec) for r in self.rows]

    def minor(self, i: int, j: int) -> Matrix:
        return Matrix([r[:j] + r[j + 1 :] for k, r in enumerate(self.rows) if k != i])

    def det(self) -> RF:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return RF.constant(1)
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        if n == 3:
            (a, b, c), (d, e, f), (g, h, i) = self.rows
            return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        # fraction-field Gaussian elimination
        work = [list(r) for r in self.rows]
        det = RF.constant(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col]), None)
            if piv is None:
                return RF.constant(0)
            if piv != col:
                work[col], work[piv] = work[piv], work[col]
                det = -det
            p = work[col][col]
            det = det * p
            for r in range(col + 1, n):
                if work[r][col]:
                    f = work[r][col] / p
                    work[r] = [x - f * y for x, y in zip(work[r], work[col])]
        return det

    def adjugate(self) -> Matrix:
        n = self.shape[0]
        if n == 1:
            return Matrix([[1]])
        cof = [[self.minor(i, j).det() * (1 if (i + j) % 2 == 0 else -1) for j in range(n)] for i in range(n)]
        return Matrix(cof).transpose()

    def det_and_inverse(self) -> tuple[RF, Matrix]:
        d = self.det()
        if d.is_zero():
            raise Singular("matrix is singular (determinant is identically zero)")
        inv_d = d.inverse()
        return d, self.adjugate().map(lambda v: v * inv_d)

    def inverse(self) -> Matrix:
        return self.det_and_inverse()[1]

    def nullspace(self) -> list[list[RF]]:
        """Basis of the right kernel over the fraction field, from the RREF."""
        n, m = self.shape
        sparse = [{j: v for j, v in enumerate(r) if v} for r in self.rows]
        return nullspace_rows(sparse, m)

    def rank(self) -> int:
        return rank(self.rows, self.shape[1])


def _dot(a: Sequence[RF], b: Sequence[RF]) -> RF:
    total = RF.constant(0)
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return total


def det_and_inverse(m: Matrix) -> tuple[RF, Matrix]:
    return m.det_and_inverse()


def nullspace(m: Matrix) -> list[list[RF]]:
    return m.nullspace()
