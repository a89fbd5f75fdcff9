"""Exact sparse linear algebra over the rationals.

Everything is built on ``fractions.Fraction`` so ranks, kernels and
quotient dimensions are exact.  Vectors are sparse dicts index -> Fraction
with no stored zeros; matrices store a sparse entry map.  All values are
treated as immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Vec = dict[int, Fraction]


class ContainmentViolation(Exception):
    """A claimed boundary vector is not in the span of the cycles."""


def vec_add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for i, c in v.items():
        s = out.get(i, Fraction(0)) + c
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vec_scale(v: Vec, c: Fraction) -> Vec:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), c in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) out of range")
            if c == 0:
                raise ValueError("stored zero entry")

    @staticmethod
    def from_columns(cols: list[Vec], rows: int) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(cols):
            for i, c in col.items():
                entries[(i, j)] = Fraction(c)
        return SparseMatrix(rows, len(cols), entries)

    @staticmethod
    def from_dense(data: list[list]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            for j, c in enumerate(row):
                c = Fraction(c)
                if c:
                    entries[(i, j)] = c
        return SparseMatrix(rows, cols, entries)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(j, i): c for (i, j), c in self.entries.items()}
        )

    def column(self, j: int) -> Vec:
        return {i: c for (i, jj), c in self.entries.items() if jj == j}

    def columns(self) -> list[Vec]:
        cols: list[Vec] = [dict() for _ in range(self.cols)]
        for (i, j), c in self.entries.items():
            cols[j][i] = c
        return cols

    def apply(self, v: Vec) -> Vec:
        """Matrix-vector product for a sparse column vector."""
        out: Vec = {}
        for (i, j), c in self.entries.items():
            x = v.get(j)
            if x:
                s = out.get(i, Fraction(0)) + c * x
                if s:
                    out[i] = s
                else:
                    del out[i]
        return out


@dataclass(frozen=True)
class SubspaceBasis:
    ambient_dim: int
    vectors: list[Vec]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def matrix(self) -> SparseMatrix:
        return SparseMatrix.from_columns(self.vectors, self.ambient_dim)

    def is_independent(self) -> bool:
        return rank(self.matrix()) == len(self.vectors)


class Echelon:
    """Incremental row echelon form; pivot = minimal nonzero index."""

    def __init__(self):
        self.pivots: dict[int, Vec] = {}

    def reduce(self, v: Vec) -> Vec:
        v = dict(v)
        while v:
            p = min(v)
            row = self.pivots.get(p)
            if row is None:
                return v
            v = vec_add(v, vec_scale(row, -v[p]))
        return v

    def insert(self, v: Vec) -> int | None:
        """Reduce v and, if nonzero, insert it.  Returns the new pivot."""
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        self.pivots[p] = vec_scale(r, Fraction(1) / r[p])
        return p

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(m: SparseMatrix) -> int:
    ech = Echelon()
    for col in m.columns():
        ech.insert(col)
    return ech.rank


def kernel_basis(m: SparseMatrix) -> SubspaceBasis:
    """Basis of {v : Mv = 0}, via column reduction with history."""
    pivots: dict[int, Vec] = {}
    combos: dict[int, Vec] = {}  # pivot -> column combination producing that row
    kernel: list[Vec] = []
    for j, col in enumerate(m.columns()):
        combo: Vec = {j: Fraction(1)}
        v = dict(col)
        while v:
            p = min(v)
            row = pivots.get(p)
            if row is None:
                break
            c = -v[p]
            v = vec_add(v, vec_scale(row, c))
            combo = vec_add(combo, vec_scale(combos[p], c))
        if v:
            p = min(v)
            inv = Fraction(1) / v[p]
            pivots[p] = vec_scale(v, inv)
            combos[p] = vec_scale(combo, inv)
        else:
            kernel.append(combo)
    return SubspaceBasis(m.cols, kernel)


def image_basis(m: SparseMatrix) -> SubspaceBasis:
    """Independent subset of the columns spanning the image (first-found)."""
    ech = Echelon()
    vectors: list[Vec] = []
    for col in m.columns():
        if ech.insert(col) is not None:
            vectors.append(col)
    return SubspaceBasis(m.rows, vectors)


@dataclass(frozen=True)
class QuotientResult:
    rank: int
    representatives: list[Vec]  # cycle vectors completing the boundaries


def quotient_rank(cycles: SubspaceBasis, boundaries: SubspaceBasis) -> QuotientResult:
    """Rank of cycles/boundaries with first-found cycle representatives.

    Raises ContainmentViolation when a boundary vector escapes the span
    of the cycles (a broken differential upstream).
    """
    if cycles.ambient_dim != boundaries.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    cyc = Echelon()
    for v in cycles.vectors:
        cyc.insert(v)
    bound = Echelon()
    for v in boundaries.vectors:
        if cyc.reduce(v):
            raise ContainmentViolation("boundary vector not in span of cycles")
        bound.insert(v)
    reps: list[Vec] = []
    for v in cycles.vectors:
        if bound.insert(v) is not None:
            reps.append(v)
    return QuotientResult(rank=len(reps), representatives=reps)


def reduce_modulo(span: list[Vec], v: Vec) -> Vec:
    """Remainder of v after reduction against the echelon form of span."""
    ech = Echelon()
    for u in span:
        ech.insert(u)
    return ech.reduce(v)


def solve_in_span(columns: list[Vec], target: Vec, dim: int) -> Vec | None:
    """Coordinates x with  sum_j x_j columns[j] = target, or None.

    Deterministic: Gaussian elimination with first-found pivots.
    """
    pivots: dict[int, Vec] = {}
    combos: dict[int, Vec] = {}
    for j, col in enumerate(columns):
        combo: Vec = {j: Fraction(1)}
        v = dict(col)
        while v:
            p = min(v)
            row = pivots.get(p)
            if row is None:
                break
            c = -v[p]
            v = vec_add(v, vec_scale(row, c))
            combo = vec_add(combo, vec_scale(combos[p], c))
        if v:
            p = min(v)
            inv = Fraction(1) / v[p]
            pivots[p] = vec_scale(v, inv)
            combos[p] = vec_scale(combo, inv)
    coords: Vec = {}
    v = dict(target)
    while v:
        p = min(v)
        row = pivots.get(p)
        if row is None:
            return None
        c = v[p]
        v = vec_add(v, vec_scale(row, -c))
        coords = vec_add(coords, vec_scale(combos[p], c))
    return coords
