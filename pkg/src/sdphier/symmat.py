"""Symmetric matrix kernel with exact-rational and 256-bit float modes.

Provides the matrix values used everywhere else: triangular-storage
symmetric matrices, general square matrices for congruence transforms and
variable recombinations, a pivoted LDL^T definiteness classifier, and a
Jacobi rotation eigensolver that serves both as the independent oracle for
the classifier and as the factorization engine of the facial reduction.

All values are immutable after construction and all operations are pure,
so they can be shared freely between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp

from .errors import DimensionMismatchError, IndexRangeError
from .scalars import (
    DEFINITENESS_TOL,
    FLOAT,
    RATIONAL,
    format_mpf,
    format_rational,
    mpf_to_fraction,
    parse_rational,
    to_mpf,
    workprec,
)


@dataclass(frozen=True)
class IndexSet:
    """Strictly ascending 1-based indices, a subset of 1..n."""

    members: tuple

    def __post_init__(self):
        members = tuple(int(i) for i in self.members)
        object.__setattr__(self, "members", members)
        if any(b <= a for a, b in zip(members, members[1:])):
            raise IndexRangeError(f"index set not strictly ascending: {members}")
        if members and members[0] < 1:
            raise IndexRangeError(f"index set must be 1-based: {members}")

    @staticmethod
    def of(indices: Iterable[int]) -> "IndexSet":
        return IndexSet(tuple(sorted(set(int(i) for i in indices))))

    @staticmethod
    def range(lo: int, hi: int) -> "IndexSet":
        """Consecutive indices lo..hi inclusive (empty when lo > hi)."""
        return IndexSet(tuple(range(lo, hi + 1)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.of(list(self.members) + list(other.members))


def _coerce(value, mode):
    if mode == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise DimensionMismatchError(
            f"rational-mode matrix cannot hold {type(value).__name__}"
        )
    return to_mpf(value)


class SymmetricMatrix:
    """n x n symmetric matrix, stored as an upper-triangle map.

    The scalar mode (RATIONAL / FLOAT) is uniform across one matrix;
    the accessor symmetrizes, so entry(i, j) == entry(j, i) always.
    """

    __slots__ = ("n", "mode", "_entries")

    def __init__(self, n: int, mode: str, entries=None):
        if n < 0:
            raise DimensionMismatchError(f"negative dimension {n}")
        if mode not in (RATIONAL, FLOAT):
            raise DimensionMismatchError(f"unknown scalar mode {mode!r}")
        self.n = int(n)
        self.mode = mode
        store = {}
        for (i, j), value in (entries or {}).items():
            i, j = int(i), int(j)
            if i > j:
                i, j = j, i
            if not (1 <= i and j <= self.n):
                raise IndexRangeError(f"entry ({i},{j}) outside 1..{self.n}")
            value = _coerce(value, mode)
            if value != 0:
                store[(i, j)] = value
        self._entries = store

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zeros(n: int, mode: str = RATIONAL) -> "SymmetricMatrix":
        return SymmetricMatrix(n, mode)

    @staticmethod
    def identity(n: int, mode: str = RATIONAL) -> "SymmetricMatrix":
        one = Fraction(1) if mode == RATIONAL else to_mpf(1)
        return SymmetricMatrix(n, mode, {(i, i): one for i in range(1, n + 1)})

    @staticmethod
    def from_rows(rows: Sequence[Sequence], mode: str = RATIONAL) -> "SymmetricMatrix":
        """Build from dense rows; the strict lower triangle is ignored."""
        n = len(rows)
        entries = {}
        for i in range(n):
            if len(rows[i]) != n:
                raise DimensionMismatchError("ragged rows")
            for j in range(i, n):
                entries[(i + 1, j + 1)] = rows[i][j]
        return SymmetricMatrix(n, mode, entries)

    # -- access -----------------------------------------------------------

    def entry(self, i: int, j: int):
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexRangeError(f"({i},{j}) outside 1..{self.n}")
        if i > j:
            i, j = j, i
        zero = Fraction(0) if self.mode == RATIONAL else to_mpf(0)
        return self._entries.get((i, j), zero)

    def items(self):
        """Stored nonzero upper-triangle entries, sorted by (row, col)."""
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def rows(self) -> list:
        """Dense list-of-lists copy."""
        zero = Fraction(0) if self.mode == RATIONAL else to_mpf(0)
        out = [[zero] * self.n for _ in range(self.n)]
        for (i, j), v in self._entries.items():
            out[i - 1][j - 1] = v
            out[j - 1][i - 1] = v
        return out

    def abs_trace(self):
        """Sum of |diagonal| entries, the scale reference for tolerances."""
        total = Fraction(0) if self.mode == RATIONAL else to_mpf(0)
        for i in range(1, self.n + 1):
            total += abs(self.entry(i, i))
        return total

    def max_abs(self):
        if not self._entries:
            return Fraction(0) if self.mode == RATIONAL else to_mpf(0)
        return max(abs(v) for v in self._entries.values())

    # -- arithmetic --------------------------------------------------------

    def _check_same_shape(self, other: "SymmetricMatrix"):
        if self.n != other.n or self.mode != other.mode:
            raise DimensionMismatchError(
                f"shape/mode mismatch: {self.n}/{self.mode} vs {other.n}/{other.mode}"
            )

    def add(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        self._check_same_shape(other)
        entries = dict(self._entries)
        for key, v in other._entries.items():
            entries[key] = entries.get(key, 0) + v
        return SymmetricMatrix(self.n, self.mode, entries)

    def scale(self, factor) -> "SymmetricMatrix":
        factor = _coerce(factor, self.mode)
        return SymmetricMatrix(
            self.n, self.mode, {k: factor * v for k, v in self._entries.items()}
        )

    def inner(self, other: "SymmetricMatrix"):
        """Trace inner product <A, B> = trace(AB)."""
        self._check_same_shape(other)
        total = Fraction(0) if self.mode == RATIONAL else to_mpf(0)
        for (i, j), v in self._entries.items():
            w = other._entries.get((i, j))
            if w is not None:
                total += v * w if i == j else 2 * v * w
        return total

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and self.mode == other.mode
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.n, self.mode, tuple(sorted(self._entries.items()))))

    def __repr__(self):
        return f"SymmetricMatrix(n={self.n}, mode={self.mode}, nnz={len(self._entries)})"

    # -- mode conversion -----------------------------------------------------

    def to_float(self) -> "SymmetricMatrix":
        if self.mode == FLOAT:
            return self
        return SymmetricMatrix(
            self.n, FLOAT, {k: to_mpf(v) for k, v in self._entries.items()}
        )

    def to_rational(self) -> "SymmetricMatrix":
        """Exact conversion; float entries are dyadic rationals."""
        if self.mode == RATIONAL:
            return self
        return SymmetricMatrix(
            self.n, RATIONAL, {k: mpf_to_fraction(v) for k, v in self._entries.items()}
        )

    # -- serialization ---------------------------------------------------------

    def to_triplets(self) -> list:
        """Sparse [row, col, scalar] list, row <= col, 1-based, sorted."""
        out = []
        for (i, j), v in self.items():
            if self.mode == RATIONAL:
                out.append([i, j, format_rational(v)])
            else:
                out.append([i, j, format_mpf(v)])
        return out

    @staticmethod
    def from_triplets(n: int, triplets, mode: str = RATIONAL) -> "SymmetricMatrix":
        entries = {}
        for item in triplets:
            if len(item) != 3:
                raise DimensionMismatchError(f"bad triplet {item!r}")
            i, j, raw = item
            if int(i) > int(j):
                raise IndexRangeError(f"triplet ({i},{j}) must have row <= col")
            key = (int(i), int(j))
            if key in entries:
                raise DimensionMismatchError(f"duplicate triplet for {key}")
            if mode == RATIONAL:
                entries[key] = parse_rational(raw)
            else:
                with workprec():
                    entries[key] = mp.mpf(raw)
        return SymmetricMatrix(n, mode, entries)


class SquareMatrix:
    """Dense square matrix (not necessarily symmetric), mode-tagged.

    Used for congruence transforms and for the variable-recombination
    matrices of facial-reduction certificates.
    """

    __slots__ = ("n", "mode", "_rows")

    def __init__(self, rows: Sequence[Sequence], mode: str = RATIONAL):
        self.n = len(rows)
        self.mode = mode
        self._rows = [[_coerce(v, mode) for v in row] for row in rows]
        if any(len(row) != self.n for row in self._rows):
            raise DimensionMismatchError("square matrix rows must all have length n")

    @staticmethod
    def identity(n: int, mode: str = RATIONAL) -> "SquareMatrix":
        one = Fraction(1) if mode == RATIONAL else to_mpf(1)
        zero = Fraction(0) if mode == RATIONAL else to_mpf(0)
        return SquareMatrix(
            [[one if i == j else zero for j in range(n)] for i in range(n)], mode
        )

    def rows(self) -> list:
        return [list(row) for row in self._rows]

    def entry(self, i: int, j: int):
        return self._rows[i - 1][j - 1]

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(
            [[self._rows[j][i] for j in range(self.n)] for i in range(self.n)],
            self.mode,
        )

    def matmul(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.n != other.n or self.mode != other.mode:
            raise DimensionMismatchError("matmul shape/mode mismatch")
        n = self.n
        a, b = self._rows, other._rows
        out = [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        return SquareMatrix(out, self.mode)

    def determinant(self) -> Fraction:
        """Exact determinant; rational mode only."""
        if self.mode != RATIONAL:
            raise DimensionMismatchError("determinant requires rational mode")
        n = self.n
        a = [row[:] for row in self._rows]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = Fraction(1) / a[col][col]
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    f = a[r][col] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def inverse(self) -> "SquareMatrix":
        """Exact inverse by Gauss-Jordan; rational mode only."""
        if self.mode != RATIONAL:
            raise DimensionMismatchError("inverse requires rational mode")
        n = self.n
        a = [row[:] + ident_row for row, ident_row in zip(
            self._rows,
            ([Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)),
        )]
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                raise DimensionMismatchError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            inv = Fraction(1) / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return SquareMatrix([row[n:] for row in a], RATIONAL)

    def to_float(self) -> "SquareMatrix":
        if self.mode == FLOAT:
            return self
        return SquareMatrix([[to_mpf(v) for v in row] for row in self._rows], FLOAT)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.n == other.n and self.mode == other.mode and self._rows == other._rows

    def __repr__(self):
        return f"SquareMatrix(n={self.n}, mode={self.mode})"


# -- operations ------------------------------------------------------------


def congruence(matrix: SymmetricMatrix, transform: SquareMatrix) -> SymmetricMatrix:
    """T^t M T.  Invertible T preserves the inertia of M (Sylvester)."""
    if matrix.n != transform.n:
        raise DimensionMismatchError(
            f"congruence: matrix is {matrix.n}x{matrix.n}, transform {transform.n}x{transform.n}"
        )
    if matrix.mode != transform.mode:
        raise DimensionMismatchError(
            f"congruence: mode mismatch {matrix.mode} vs {transform.mode}"
        )
    n = matrix.n
    m = matrix.rows()
    t = transform.rows()

    def compute():
        # mt = M T, then result = T^t (M T)
        mt = [[sum(m[i][s] * t[s][j] for s in range(n)) for j in range(n)] for i in range(n)]
        entries = {}
        for i in range(n):
            for j in range(i, n):
                upper = sum(t[s][i] * mt[s][j] for s in range(n))
                if matrix.mode == FLOAT:
                    lower = sum(t[s][j] * mt[s][i] for s in range(n))
                    upper = (upper + lower) / 2  # symmetrize rounding noise
                entries[(i + 1, j + 1)] = upper
        return SymmetricMatrix(n, matrix.mode, entries)

    if matrix.mode == FLOAT:
        with workprec():
            return compute()
    return compute()


def principal_submatrix(matrix: SymmetricMatrix, subset: IndexSet) -> SymmetricMatrix:
    """M(S, S), rows and columns restricted to the index set."""
    members = list(subset)
    if members and members[-1] > matrix.n:
        raise IndexRangeError(f"index set {members} exceeds dimension {matrix.n}")
    pos = {orig: new + 1 for new, orig in enumerate(members)}
    entries = {}
    for (i, j), v in matrix.items():
        if i in pos and j in pos:
            entries[(pos[i], pos[j])] = v
    return SymmetricMatrix(len(members), matrix.mode, entries)


class Definiteness(enum.Enum):
    PD = "PD"
    PSD = "PSD"
    INDEFINITE = "INDEFINITE"


def definiteness(matrix: SymmetricMatrix, tol=DEFINITENESS_TOL) -> Definiteness:
    """Classify positive (semi)definiteness by pivoted LDL^T.

    Symmetric pivoting picks the largest remaining diagonal entry (ties
    broken by lowest index).  Pivots are compared against
    tol * (1 + abs_trace); a step with no usable pivot classifies the
    remaining block directly.  Total and deterministic for fixed input.
    """
    if tol < 0:
        raise DimensionMismatchError("tol must be nonnegative")
    work = matrix.to_float()
    n = work.n
    if n == 0:
        return Definiteness.PD
    with workprec():
        thresh = to_mpf(tol) * (1 + work.abs_trace())
        a = work.rows()
        active = list(range(n))
        for _ in range(n):
            pivot = active[0]
            for i in active[1:]:
                if a[i][i] > a[pivot][pivot]:
                    pivot = i
            if a[pivot][pivot] <= thresh:
                # No strongly positive diagonal left.
                if any(a[i][i] < -thresh for i in active):
                    return Definiteness.INDEFINITE
                for x in active:
                    for y in active:
                        if x < y and abs(a[x][y]) > thresh:
                            # near-zero diagonal with off-diagonal mass
                            return Definiteness.INDEFINITE
                return Definiteness.PSD
            d = a[pivot][pivot]
            active.remove(pivot)
            col = {i: a[i][pivot] for i in active}
            for i in active:
                ci = col[i] / d
                for j in active:
                    if j >= i:
                        a[i][j] -= ci * col[j]
                        a[j][i] = a[i][j]
        return Definiteness.PD


def _sqrt(x):
    if isinstance(x, float):
        return x**0.5
    return mp.sqrt(x)


def jacobi_eigh(matrix: SymmetricMatrix, float64: bool = False):
    """Eigendecomposition by cyclic Jacobi rotations.

    Returns (eigenvalues, V) with eigenvalues sorted descending and V a
    SquareMatrix whose columns are the matching eigenvectors, so that
    M = V diag(w) V^t.  With float64=True the sweep runs in Python floats
    (used as the fast independent oracle); otherwise in 256-bit mpf.

    Column signs are normalized (largest-magnitude component positive,
    lowest index on ties) so the output is deterministic.
    """
    n = matrix.n
    work = matrix.to_float()
    if float64:
        a = [[float(v) for v in row] for row in work.rows()]
        eps = 1e-14
        one = 1.0
    else:
        a = work.rows()
        eps = mp.mpf(2) ** (-(mp.prec if mp.prec >= 256 else 256) + 16)
        one = to_mpf(1)

    def run():
        v = [[one * (1 if i == j else 0) for j in range(n)] for i in range(n)]
        if n <= 1:
            return a, v
        frob = _sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n)))
        if frob == 0:
            return a, v
        for _ in range(120):  # sweeps; quadratic convergence makes this ample
            off = _sqrt(sum(a[p][q] ** 2 for p in range(n) for q in range(p + 1, n)))
            if off <= eps * frob:
                break
            for p in range(n):
                for q in range(p + 1, n):
                    apq = a[p][q]
                    if abs(apq) <= eps * frob / (10 * n * n):
                        continue
                    theta = (a[q][q] - a[p][p]) / (2 * apq)
                    if theta >= 0:
                        t = one / (theta + _sqrt(theta * theta + 1))
                    else:
                        t = -one / (-theta + _sqrt(theta * theta + 1))
                    c = one / _sqrt(t * t + 1)
                    s = t * c
                    for i in range(n):
                        aip, aiq = a[i][p], a[i][q]
                        a[i][p] = c * aip - s * aiq
                        a[i][q] = s * aip + c * aiq
                    for j in range(n):
                        apj, aqj = a[p][j], a[q][j]
                        a[p][j] = c * apj - s * aqj
                        a[q][j] = s * apj + c * aqj
                    for i in range(n):
                        vip, viq = v[i][p], v[i][q]
                        v[i][p] = c * vip - s * viq
                        v[i][q] = s * vip + c * viq
        return a, v

    if float64:
        diag, vecs = run()
    else:
        with workprec():
            diag, vecs = run()

    order = sorted(range(n), key=lambda i: (-diag[i][i], i))
    eigenvalues = [diag[i][i] for i in order]
    columns = []
    for idx in order:
        col = [vecs[r][idx] for r in range(n)]
        lead = max(range(n), key=lambda r: (abs(col[r]), -r)) if n else 0
        if n and col[lead] < 0:
            col = [-x for x in col]
        columns.append(col)
    vmat_rows = [[columns[j][i] for j in range(n)] for i in range(n)]
    if float64:
        vmat_rows = [[to_mpf(x) for x in row] for row in vmat_rows]
        eigenvalues = [to_mpf(w) for w in eigenvalues]
    vmat = SquareMatrix(vmat_rows, FLOAT)
    return eigenvalues, vmat


def jacobi_eigenvalues(matrix: SymmetricMatrix, float64: bool = False) -> list:
    """Eigenvalues only, sorted descending."""
    return jacobi_eigh(matrix, float64=float64)[0]
