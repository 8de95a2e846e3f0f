"""Exact rational and integer linear algebra.

Everything here is exact: rationals are :class:`fractions.Fraction` at the
API boundary, integers are Python ints.  Row reduction has two backends that
produce identical canonical output:

* ``"flint"`` -- FLINT's ``fmpq_mat`` (via python-flint), used by default;
* ``"python"`` -- a pure-Python Gaussian elimination over ``Fraction``,
  kept as a reference implementation and fallback.

The backend can be forced with the ``COXNL_LINALG`` environment variable or
:func:`set_backend`.  Because the reduced row echelon form of a matrix is
unique, the choice of backend never changes a result, only its speed.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

__all__ = [
    "RationalMatrix",
    "IntegerMatrix",
    "rank",
    "kernel_basis",
    "solve",
    "smith_normal_form",
    "hermite_normal_form",
    "integer_inverse",
    "determinant",
    "set_backend",
    "get_backend",
]

_BACKEND = os.environ.get("COXNL_LINALG", "flint" if flint is not None else "python")


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in ("flint", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "flint" and flint is None:
        raise RuntimeError("python-flint is not installed")
    _BACKEND = name


def get_backend() -> str:
    return _BACKEND


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if flint is not None and isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if flint is not None and isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, float):
        raise TypeError("floating point entries are not allowed")
    return Fraction(x)


def _to_fmpq(x):
    if isinstance(x, int):
        return flint.fmpq(x)
    x = _frac(x)
    return flint.fmpq(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# pure-Python elimination


def _bitlen(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def _rref_python(rows: list[list[Fraction]], ncols: int):
    """Dense reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(rows):
            break
        # pivot on the entry of smallest bit length to limit growth
        best = None
        for i in range(top, len(rows)):
            v = rows[i][col]
            if v and (best is None or _bitlen(v) < _bitlen(rows[best][col])):
                best = i
        if best is None:
            continue
        rows[top], rows[best] = rows[best], rows[top]
        prow = rows[top]
        inv = 1 / prow[col]
        if inv != 1:
            prow = [v * inv for v in prow]
            rows[top] = prow
        nz = [j for j in range(col, ncols) if prow[j]]
        for i in range(len(rows)):
            if i == top:
                continue
            c = rows[i][col]
            if c:
                r = rows[i]
                for j in nz:
                    r[j] -= c * prow[j]
        pivots.append(col)
        top += 1
    return rows[:top], tuple(pivots)


def _rref_sparse(rows: Sequence[dict], ncols: int):
    """Sparse incremental reduced row echelon form.

    Rows are inserted one at a time; the pivot rows are kept fully reduced,
    so each insertion is a single pass.  Returns (pivot rows as dicts sorted
    by pivot, pivot columns).
    """
    piv: dict[int, dict] = {}          # pivot column -> reduced row (pivot entry 1)
    occ: dict[int, set[int]] = {}      # column -> pivot columns whose row uses it
    for row in rows:
        r = {j: Fraction(v) for j, v in row.items() if v}
        for p in [j for j in r if j in piv]:
            c = r.get(p)
            if not c:
                continue
            for j, v in piv[p].items():
                w = r.get(j, 0) - c * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        if inv != 1:
            r = {j: v * inv for j, v in r.items()}
        for q in list(occ.get(p, ())):
            other = piv[q]
            c = other[p]
            for j, v in r.items():
                w = other.get(j, 0) - c * v
                if w:
                    if j not in other:
                        occ.setdefault(j, set()).add(q)
                    other[j] = w
                else:
                    other.pop(j, None)
                    occ[j].discard(q)
        occ.pop(p, None)
        piv[p] = r
        for j in r:
            if j != p:
                occ.setdefault(j, set()).add(p)
    order = sorted(piv)
    return [piv[p] for p in order], tuple(order)


# rows with at most this many nonzeros on average go to the sparse path
SPARSE_NNZ_PER_ROW = 3.0


# ---------------------------------------------------------------------------


class RationalMatrix:
    """An immutable matrix of exact rationals.

    Held as dense ``Fraction`` rows, sparse ``{column: value}`` rows, or a
    FLINT ``fmpq_mat``; the other representations are produced on demand.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_sp", "_fl", "_rref")

    def __init__(self, rows: Iterable[Sequence] = (), ncols: int | None = None):
        rows = tuple(tuple(_frac(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        self.nrows = len(rows)
        self.ncols = ncols
        self._rows = rows
        self._sp = None
        self._fl = None
        self._rref = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def _empty(cls, nrows: int, ncols: int) -> "RationalMatrix":
        m = cls.__new__(cls)
        m.nrows, m.ncols = nrows, ncols
        m._rows = m._sp = m._fl = m._rref = None
        return m

    @classmethod
    def _from_flint(cls, fl) -> "RationalMatrix":
        m = cls._empty(fl.nrows(), fl.ncols())
        m._fl = fl
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        m = cls._empty(nrows, ncols)
        m._sp = [{} for _ in range(nrows)]
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls._empty(n, n)
        m._sp = [{i: Fraction(1)} for i in range(n)]
        return m

    @classmethod
    def from_sparse(cls, rows: Sequence[dict], ncols: int) -> "RationalMatrix":
        """Build from rows given as ``{column: value}`` dictionaries."""
        m = cls._empty(len(rows), ncols)
        m._sp = [{j: _frac(v) for j, v in r.items() if v} for r in rows]
        return m

    # -- representations -----------------------------------------------------

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        if self._rows is None:
            if self._sp is not None:
                out = []
                for r in self._sp:
                    row = [Fraction(0)] * self.ncols
                    for j, v in r.items():
                        row[j] = v
                    out.append(tuple(row))
                self._rows = tuple(out)
            else:
                self._rows = tuple(
                    tuple(_frac(v) for v in r) for r in self._fl.tolist()
                ) if self.nrows else ()
        return self._rows

    def sparse_rows(self) -> list[dict]:
        if self._sp is None:
            self._sp = [{j: v for j, v in enumerate(r) if v} for r in self.rows]
        return self._sp

    def _flint(self):
        if self._fl is None:
            if self._sp is not None and self._rows is None:
                zero = flint.fmpq(0)
                flat = [zero] * (self.nrows * self.ncols)
                for i, r in enumerate(self._sp):
                    base = i * self.ncols
                    for j, v in r.items():
                        flat[base + j] = _to_fmpq(v)
            else:
                flat = [_to_fmpq(v) for r in self.rows for v in r]
            self._fl = flint.fmpq_mat(self.nrows, self.ncols, flat)
        return self._fl

    def _use_flint(self) -> bool:
        return _BACKEND == "flint" and self.nrows > 0 and self.ncols > 0

    def nnz(self) -> int:
        return sum(len(r) for r in self.sparse_rows())

    def __repr__(self):
        return f"RationalMatrix({self.nrows}x{self.ncols})"

    def __getitem__(self, idx):
        i, j = idx
        if self._sp is not None:
            return self._sp[i].get(j, Fraction(0))
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        if self._fl is not None and other._fl is not None:
            return self._fl == other._fl
        if self._sp is not None and other._sp is not None:
            return self._sp == other._sp
        return self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def is_zero(self) -> bool:
        if self._sp is not None or not self._use_flint():
            return all(not r for r in self.sparse_rows())
        return self._fl == flint.fmpq_mat(self.nrows, self.ncols)

    # -- arithmetic ------------------------------------------------------------

    def transpose(self) -> "RationalMatrix":
        if self._fl is not None and self._use_flint():
            return RationalMatrix._from_flint(self._fl.transpose())
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.sparse_rows()):
            for j, v in r.items():
                cols[j][i] = v
        return RationalMatrix.from_sparse(cols, self.nrows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        if self._use_flint() and other._use_flint():
            return RationalMatrix._from_flint(self._flint() * other._flint())
        right = other.sparse_rows()
        out = []
        for r in self.sparse_rows():
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in right[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return RationalMatrix.from_sparse(out, other.ncols)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        if self._use_flint() and (self._fl is not None or other._fl is not None):
            return RationalMatrix._from_flint(self._flint() - other._flint())
        out = []
        for r, s in zip(self.sparse_rows(), other.sparse_rows()):
            acc = dict(r)
            for j, v in s.items():
                acc[j] = acc.get(j, 0) - v
            out.append({j: v for j, v in acc.items() if v})
        return RationalMatrix.from_sparse(out, self.ncols)

    def take_columns(self, cols: Sequence[int]) -> "RationalMatrix":
        cols = list(cols)
        if self._fl is not None and self._use_flint() and cols:
            sel = [flint.fmpq(0)] * (self.ncols * len(cols))
            for k, j in enumerate(cols):
                sel[j * len(cols) + k] = flint.fmpq(1)
            return RationalMatrix._from_flint(
                self._fl * flint.fmpq_mat(self.ncols, len(cols), sel))
        where = {j: k for k, j in enumerate(cols)}
        return RationalMatrix.from_sparse(
            [{where[j]: v for j, v in r.items() if j in where} for r in self.sparse_rows()],
            len(cols))

    def take_rows(self, idx: Sequence[int]) -> "RationalMatrix":
        sp = self.sparse_rows()
        return RationalMatrix.from_sparse([sp[i] for i in idx], self.ncols)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return RationalMatrix.from_sparse(self.sparse_rows() + other.sparse_rows(), self.ncols)

    # -- elimination -----------------------------------------------------------

    def rref(self) -> tuple["RationalMatrix", tuple[int, ...]]:
        """Reduced row echelon form with zero rows dropped, plus pivot columns."""
        if self._rref is None:
            self._rref = self._compute_rref()
        return self._rref

    def _compute_rref(self):
        if self.nrows == 0 or self.ncols == 0:
            return RationalMatrix.zeros(0, self.ncols), ()
        sparse_ok = self._prefers_sparse()
        if self._use_flint() and not sparse_ok:
            fl, rk = self._flint().rref()
            pivots, j = [], 0
            for i in range(rk):
                while fl[i, j] == 0:
                    j += 1
                pivots.append(j)
                j += 1
            if rk == self.nrows:
                out = RationalMatrix._from_flint(fl)
            else:
                flat = fl.entries()[: rk * self.ncols]
                out = RationalMatrix._from_flint(flint.fmpq_mat(rk, self.ncols, flat))
            return out, tuple(pivots)
        if sparse_ok:
            rows, pivots = _rref_sparse(self.sparse_rows(), self.ncols)
            return RationalMatrix.from_sparse(rows, self.ncols), pivots
        rows, pivots = _rref_python([list(r) for r in self.rows], self.ncols)
        return RationalMatrix(rows, self.ncols), pivots

    def _prefers_sparse(self) -> bool:
        return self._fl is None and (
            not self._use_flint() and self._sp is not None
            or self.nnz() <= SPARSE_NNZ_PER_ROW * self.nrows)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "RationalMatrix":
        """Canonical basis (as rows) of the right null space."""
        return kernel_basis(self)



class IntegerMatrix:
    """A small dense integer matrix; rows are tuples of Python ints."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: int | None = None):
        self.rows = tuple(tuple(int(v) for v in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = ncols if ncols is not None else (len(self.rows[0]) if self.rows else 0)

    def __repr__(self):
        return f"IntegerMatrix({list(map(list, self.rows))})"

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.rows == other.rows \
            and self.ncols == other.ncols

    def __hash__(self):
        return hash(self.rows)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        cols = list(zip(*other.rows))
        return IntegerMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
            other.ncols)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(zip(*self.rows), self.nrows)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# rational operations


def rank(m: RationalMatrix) -> int:
    return m.rank()


def kernel_basis(m: RationalMatrix, canonical: bool = True) -> RationalMatrix:
    """Basis of ``{x : m x = 0}`` as the rows of a matrix.

    With ``canonical`` the basis is in reduced row echelon form.  Without it
    the rows are some basis of primitive integer vectors, which is much
    cheaper for large dense inputs and enough for membership tests.
    """
    if m._rref is None and m._use_flint() and not m._prefers_sparse():
        # fraction-free nullspace avoids materializing a dense rational RREF
        num, _ = m._flint().numer_denom()
        X, k = num.nullspace()
        if k == 0:
            return RationalMatrix.zeros(0, m.ncols)
        cols = []
        for j in range(k):
            col = [int(X[i, j]) for i in range(m.ncols)]
            g = math.gcd(*col)
            cols.append([v // g for v in col])
        flat = [v for col in cols for v in col]
        out = RationalMatrix._from_flint(flint.fmpq_mat(k, m.ncols, flat))
        return out.rref()[0] if canonical else out
    r, pivots = m.rref()
    pset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pset]
    if not free:
        return RationalMatrix.zeros(0, m.ncols)
    vecs = {j: {j: Fraction(1)} for j in free}
    for p, row in zip(pivots, r.sparse_rows()):
        for j, v in row.items():
            if j != p:
                vecs[j][p] = -v
    return RationalMatrix.from_sparse([vecs[j] for j in free], m.ncols).rref()[0]


def solve(m: RationalMatrix, b: Sequence) -> list[Fraction] | None:
    """One solution of ``m x = b`` (free coordinates set to zero), or None."""
    if len(b) != m.nrows:
        raise ValueError("right-hand side has the wrong length")
    rows = []
    for r, v in zip(m.sparse_rows(), b):
        r = dict(r)
        if v:
            r[m.ncols] = _frac(v)
        rows.append(r)
    r, pivots = RationalMatrix.from_sparse(rows, m.ncols + 1).rref()
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for p, row in zip(pivots, r.sparse_rows()):
        x[p] = row.get(m.ncols, Fraction(0))
    return x


# ---------------------------------------------------------------------------
# integer operations


def determinant(rows: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant by Bareiss elimination (integers stay integers)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("square matrix expected")
    if any(isinstance(v, Fraction) and v.denominator != 1 for r in a for v in r):
        m = [[_frac(v) for v in row] for row in a]
        det = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            det *= m[c][c]
            for i in range(c + 1, n):
                f = m[i][c] / m[c][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det
    a = [[int(v) for v in r] for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_inverse(m: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular integer matrix."""
    n = m.nrows
    aug = RationalMatrix([list(r) + [int(i == j) for j in range(n)]
                          for i, r in enumerate(m.rows)], 2 * n)
    r, piv = aug.rref()
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    inv = [[v for v in row[n:]] for row in r.rows]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return IntegerMatrix([[int(v) for v in row] for row in inv], n)


def smith_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return ``(D, U, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries and each diagonal entry divides the next.
    """
    nr, nc = m.nrows, m.ncols
    a = [list(r) for r in m.rows]
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in a:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(nr, nc):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the rest of the block
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntegerMatrix(a, nc), IntegerMatrix(U, nr), IntegerMatrix(V, nc)


def hermite_normal_form(m: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row-style Hermite normal form: returns ``(H, W)`` with ``W @ m == H``.

    ``W`` is unimodular; ``H`` is in row echelon form with positive pivots and
    the entries above each pivot reduced into ``[0, pivot)``.  Zero rows of
    ``H`` come last.
    """
    nr, nc = m.nrows, m.ncols
    a = [list(r) for r in m.rows]
    W = [[int(i == j) for j in range(nr)] for i in range(nr)]
    row = 0
    pivots = []
    for col in range(nc):
        if row == nr:
            break
        while True:
            nz = [(abs(a[i][col]), i) for i in range(row, nr) if a[i][col]]
            if not nz:
                break
            _, p = min(nz)
            a[row], a[p] = a[p], a[row]
            W[row], W[p] = W[p], W[row]
            clean = True
            for i in range(row + 1, nr):
                if a[i][col]:
                    q = a[i][col] // a[row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[row])]
                    clean = clean and a[i][col] == 0
            if clean:
                break
        if row < nr and a[row][col]:
            if a[row][col] < 0:
                a[row] = [-x for x in a[row]]
                W[row] = [-x for x in W[row]]
            for i in range(row):
                q = a[i][col] // a[row][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[row])]
            pivots.append(col)
            row += 1
    return IntegerMatrix(a, nc), IntegerMatrix(W, nr)
