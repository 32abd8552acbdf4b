"""
Exact integer matrix algebra.

Every computation in cosheaftools reduces to integer matrices: relation
presentations of abelian groups, homomorphism matrices and boundary maps. This
module provides an immutable :class:`IntMatrix` backed by Python integers
(arbitrary precision, so coefficient growth during elimination never
overflows), the Smith normal form with both transformation matrices, and the
lattice utilities built on top of it:

    * :func:`snf` - U * M * V = D with U, V unimodular and d1 | d2 | ...
    * :func:`solve_integer` - an integer solution of M * x = b or None
    * :func:`in_column_lattice` - membership of b in the column lattice of M
    * :func:`integer_kernel` - a basis of {x : M * x = 0}
    * :func:`lattice_basis` - a basis of the column lattice of M

The elimination follows the usual row/column gcd reduction: the entry of
smallest magnitude is moved to the pivot, the pivot row and column are cleared
by Euclidean steps and any entry not divisible by the pivot is folded back into
the pivot row until the pivot divides the whole remaining block.
"""
import functools
import logging
from dataclasses import dataclass

from cosheaftools.common.exceptions import DimensionMismatch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rows x cols integer matrix stored in row-major order."""
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(
                'Matrix dimensions must be nonnegative, got {0}x{1}'.format(
                    self.rows, self.cols
                )
            )
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                'Expected {0} entries for a {1}x{2} matrix, got {3}'.format(
                    self.rows * self.cols, self.rows, self.cols,
                    len(self.entries)
                )
            )

    # Construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, cols=None):
        """Build a matrix from a sequence of rows. *cols* is only needed when
        there are no rows to infer it from."""
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for idx, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch(
                    'Row {0} has {1} entries, expected {2}'.format(
                        idx, len(row), cols
                    )
                )
        return cls(len(rows), cols, tuple(int(v) for r in rows for v in r))

    @classmethod
    def from_columns(cls, columns, rows):
        """Build a rows x len(columns) matrix from a sequence of columns."""
        columns = [list(c) for c in columns]
        for idx, col in enumerate(columns):
            if len(col) != rows:
                raise DimensionMismatch(
                    'Column {0} has {1} entries, expected {2}'.format(
                        idx, len(col), rows
                    )
                )
        ncols = len(columns)
        entries = tuple(
            int(columns[j][i]) for i in range(rows) for j in range(ncols)
        )
        return cls(rows, ncols, entries)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(
            1 if i == j else 0 for i in range(n) for j in range(n)
        ))

    @classmethod
    def block_diagonal(cls, blocks):
        """Place the given matrices along the diagonal of a zero matrix."""
        blocks = list(blocks)
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for block in blocks:
            for i in range(block.rows):
                for j in range(block.cols):
                    data[r0 + i][c0 + j] = block[i, j]
            r0 += block.rows
            c0 += block.cols
        return cls.from_rows(data, cols)

    # Access -----------------------------------------------------------------

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j):
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self):
        return not any(self.entries)

    # Arithmetic -------------------------------------------------------------

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch(
                'Cannot multiply {0}x{1} by {2}x{3}'.format(
                    self.rows, self.cols, other.rows, other.cols
                )
            )
        left = self.to_rows()
        right_cols = other.columns()
        return IntMatrix.from_rows(
            [
                [sum(a * b for a, b in zip(row, col) if a) for col in right_cols]
                for row in left
            ],
            other.cols
        )

    def apply(self, vector):
        """Return self * vector for a plain integer sequence."""
        if len(vector) != self.cols:
            raise DimensionMismatch(
                'Vector of length {0} does not match {1} columns'.format(
                    len(vector), self.cols
                )
            )
        return [
            sum(a * b for a, b in zip(self.row(i), vector) if a)
            for i in range(self.rows)
        ]

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(
                'Shape mismatch {0} vs {1}'.format(self.shape, other.shape)
            )

    def __add__(self, other):
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            a + b for a, b in zip(self.entries, other.entries)
        ))

    def __sub__(self, other):
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            a - b for a, b in zip(self.entries, other.entries)
        ))

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, factor):
        return IntMatrix(self.rows, self.cols, tuple(
            factor * a for a in self.entries
        ))

    def transpose(self):
        return IntMatrix.from_columns(self.to_rows(), self.cols)

    def hstack(self, other):
        """Concatenate the columns of *other* to the right of this matrix."""
        if self.rows != other.rows:
            raise DimensionMismatch(
                'Cannot stack {0} rows beside {1} rows'.format(
                    self.rows, other.rows
                )
            )
        return IntMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def select_columns(self, indices):
        return IntMatrix.from_columns(
            [self.column(j) for j in indices], self.rows
        )

    def __repr__(self):
        return 'IntMatrix({0})'.format(self.to_rows())


@dataclass(frozen=True)
class SnfResult:
    """U * M * V = D with U and V unimodular and D in Smith normal form."""
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    diagonal: tuple

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)


def xgcd(a, b):
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class _Reducer:
    """Mutable working state for one Smith normal form computation. Row
    operations are mirrored on U and column operations on V so that
    U * M * V equals the working matrix at all times."""

    def __init__(self, matrix):
        self.m = matrix.rows
        self.n = matrix.cols
        self.A = matrix.to_rows()
        self.U = _identity_rows(self.m)
        self.V = _identity_rows(self.n)

    def swap_rows(self, i, k):
        if i != k:
            self.A[i], self.A[k] = self.A[k], self.A[i]
            self.U[i], self.U[k] = self.U[k], self.U[i]

    def swap_cols(self, j, k):
        if j != k:
            for row in self.A:
                row[j], row[k] = row[k], row[j]
            for row in self.V:
                row[j], row[k] = row[k], row[j]

    def add_row(self, target, source, factor):
        """row[target] += factor * row[source]"""
        if factor == 0:
            return
        for mat in (self.A, self.U):
            src = mat[source]
            dst = mat[target]
            for jj, v in enumerate(src):
                if v:
                    dst[jj] += factor * v

    def add_col(self, target, source, factor):
        """col[target] += factor * col[source]"""
        if factor == 0:
            return
        for mat in (self.A, self.V):
            for row in mat:
                v = row[source]
                if v:
                    row[target] += factor * v

    def negate_row(self, i):
        self.A[i] = [-v for v in self.A[i]]
        self.U[i] = [-v for v in self.U[i]]

    def smallest_entry(self, t):
        """Position of the nonzero entry of least magnitude in A[t:, t:]."""
        best = None
        for i in range(t, self.m):
            row = self.A[i]
            for j in range(t, self.n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        return i, j
        return None if best is None else (best[1], best[2])

    def clear_pivot_cross(self, t):
        """Euclidean reduction of row t and column t against the pivot.
        Return True once every off-pivot entry in the cross is zero."""
        A = self.A
        pivot = A[t][t]
        clean = True
        for i in range(t + 1, self.m):
            if A[i][t]:
                self.add_row(i, t, -(A[i][t] // pivot))
                if A[i][t]:
                    clean = False
        for j in range(t + 1, self.n):
            if A[t][j]:
                self.add_col(j, t, -(A[t][j] // pivot))
                if A[t][j]:
                    clean = False
        return clean

    def move_smallest_to_pivot(self, t):
        """Move the least nonzero entry of row t / column t onto (t, t)."""
        A = self.A
        best = (abs(A[t][t]), t, t) if A[t][t] else None
        for i in range(t + 1, self.m):
            v = A[i][t]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, t)
        for j in range(t + 1, self.n):
            v = A[t][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), t, j)
        _, i, j = best
        self.swap_rows(t, i)
        self.swap_cols(t, j)

    def non_divisible_row(self, t):
        pivot = self.A[t][t]
        for i in range(t + 1, self.m):
            row = self.A[i]
            for j in range(t + 1, self.n):
                if row[j] % pivot:
                    return i
        return None

    def run(self):
        limit = min(self.m, self.n)
        for t in range(limit):
            position = self.smallest_entry(t)
            if position is None:
                break
            self.swap_rows(t, position[0])
            self.swap_cols(t, position[1])
            while True:
                if not self.clear_pivot_cross(t):
                    self.move_smallest_to_pivot(t)
                    continue
                offender = self.non_divisible_row(t)
                if offender is None:
                    break
                # Fold the offending row into the pivot row; the next pass
                # replaces the pivot by a proper divisor of itself.
                self.add_row(t, offender, 1)
            if self.A[t][t] < 0:
                self.negate_row(t)
        return self


@functools.lru_cache(maxsize=4096)
def snf(matrix):
    """
    Compute the Smith normal form of *matrix*.

    Returns an :class:`SnfResult` with U * M * V = D, U and V unimodular, and
    the diagonal d1, ..., dk (k = min(rows, cols)) nonnegative with
    d_i | d_{i+1} and zeros trailing.

    >>> snf(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal
    (2, 4)
    >>> snf(IntMatrix.from_rows([[0]])).diagonal
    (0,)
    """
    reducer = _Reducer(matrix).run()
    D = IntMatrix.from_rows(reducer.A, matrix.cols)
    U = IntMatrix.from_rows(reducer.U, matrix.rows)
    V = IntMatrix.from_rows(reducer.V, matrix.cols)
    diagonal = tuple(
        D[i, i] for i in range(min(matrix.rows, matrix.cols))
    )
    log.debug('SNF of {0}x{1} matrix: {2}'.format(
        matrix.rows, matrix.cols, diagonal
    ))
    return SnfResult(U=U, D=D, V=V, diagonal=diagonal)


def _check_rhs(matrix, b):
    if len(b) != matrix.rows:
        raise DimensionMismatch(
            'Right-hand side has length {0} but the matrix has {1} rows'.format(
                len(b), matrix.rows
            )
        )


def lattice_obstruction(matrix, b):
    """
    Return None when M * x = b is solvable over the integers, otherwise a
    tuple (index, value, divisor) certifying the failure: coordinate *index* of
    U * b equals *value*, which is not divisible by the diagonal entry
    *divisor* (divisor 0 means the coordinate lies outside the image).
    """
    _check_rhs(matrix, b)
    result = snf(matrix)
    c = result.U.apply(list(b))
    for i, value in enumerate(c):
        d = result.diagonal[i] if i < len(result.diagonal) else 0
        if d == 0:
            if value != 0:
                return (i, value, 0)
        elif value % d:
            return (i, value, d)
    return None


def solve_integer(matrix, b):
    """
    Return an integer vector x with matrix * x == b, or None when no integer
    solution exists.

    >>> solve_integer(IntMatrix.from_rows([[1, 1], [0, 2]]), [3, 2])
    [2, 1]
    >>> solve_integer(IntMatrix.from_rows([[2]]), [3]) is None
    True
    """
    _check_rhs(matrix, b)
    if lattice_obstruction(matrix, b) is not None:
        return None
    result = snf(matrix)
    c = result.U.apply(list(b))
    y = [0] * matrix.cols
    for i, d in enumerate(result.diagonal):
        if d:
            y[i] = c[i] // d
    return result.V.apply(y)


def in_column_lattice(matrix, b):
    """True iff b is an integer combination of the columns of *matrix*."""
    _check_rhs(matrix, b)
    if matrix.cols == 0:
        return not any(b)
    return lattice_obstruction(matrix, b) is None


def integer_kernel(matrix):
    """Return a matrix whose columns form a basis of {x : matrix * x = 0}."""
    result = snf(matrix)
    rank = result.rank
    return IntMatrix.from_columns(
        [result.V.column(j) for j in range(rank, matrix.cols)],
        matrix.cols
    )


def lattice_basis(matrix):
    """
    Return a matrix whose columns form a basis of the column lattice of
    *matrix*. If U * M * V = D then M * V = U^-1 * D, so the first rank
    columns of M * V are independent and span the same lattice as M.
    """
    if matrix.cols == 0:
        return matrix
    result = snf(matrix)
    spanned = matrix @ result.V
    return spanned.select_columns(range(result.rank))


if __name__ == '__main__':
    import doctest
    doctest.testmod()
