"""Dense exact square matrices over the Gaussian rationals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from math import gcd
from typing import Iterable, Sequence

from .combinatorics import IndexSet, Permutation
from .exact import (
    ONE,
    ZERO,
    GaussianRational,
    InputError,
    Number,
    as_gaussian,
    format_entry,
    parse_entry,
)

__all__ = [
    "Matrix",
    "BlockPartition",
    "determinant",
    "principal_submatrix",
    "hadamard_product",
    "permutation_matrix",
    "columns_collinear",
    "rank",
    "block_determinant_matrix",
    "block",
]


def _coerce(x: Number | str) -> GaussianRational:
    if isinstance(x, str):
        return parse_entry(x)
    return as_gaussian(x)


class Matrix:
    """Immutable n-by-n matrix of :class:`GaussianRational` entries (row-major)."""

    def __init__(self, rows: Iterable[Iterable[Number | str]]):
        data = tuple(tuple(_coerce(x) for x in row) for row in rows)
        n = len(data)
        if n == 0:
            raise InputError("matrix must be at least 1x1")
        if any(len(row) != n for row in data):
            raise InputError("matrix must be square")
        self._rows = data
        self.n = n

    @classmethod
    def _wrap(cls, rows: tuple[tuple[GaussianRational, ...], ...]) -> Matrix:
        m = cls.__new__(cls)
        m._rows = rows
        m.n = len(rows)
        return m

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._wrap(tuple(tuple(ONE if i == j else ZERO for j in range(n))
                               for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> Matrix:
        return cls._wrap(tuple((ZERO,) * n for _ in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Number]) -> Matrix:
        n = len(values)
        return cls._wrap(tuple(tuple(as_gaussian(values[i]) if i == j else ZERO
                                     for j in range(n)) for i in range(n)))

    @classmethod
    def outer(cls, v: Sequence[Number]) -> Matrix:
        """The rank-one matrix ``v v*``."""
        v = [as_gaussian(x) for x in v]
        return cls._wrap(tuple(tuple(a * b.conjugate() for b in v) for a in v))

    @property
    def rows(self) -> tuple[tuple[GaussianRational, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> GaussianRational:
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[GaussianRational, ...]:
        return tuple(row[j] for row in self._rows)

    def diag(self) -> list[GaussianRational]:
        return [self._rows[i][i] for i in range(self.n)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(map(format_entry, r)) + "]" for r in self._rows)
        return f"Matrix([{body}])"

    def _check_same(self, other: Matrix) -> None:
        if not isinstance(other, Matrix):
            raise TypeError("expected Matrix")
        if other.n != self.n:
            raise InputError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._wrap(tuple(tuple(a + b for a, b in zip(r, s))
                                  for r, s in zip(self._rows, other._rows)))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._wrap(tuple(tuple(a - b for a, b in zip(r, s))
                                  for r, s in zip(self._rows, other._rows)))

    def __neg__(self) -> Matrix:
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c: Number) -> Matrix:
        c = as_gaussian(c)
        return Matrix._wrap(tuple(tuple(c * a for a in r) for r in self._rows))

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        cols = list(zip(*other._rows))
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out_row = []
            for col in cols:
                acc = ZERO
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix._wrap(tuple(out))

    @cached_property
    def H(self) -> Matrix:
        """Conjugate transpose."""
        return Matrix._wrap(tuple(tuple(self._rows[j][i].conjugate() for j in range(self.n))
                                  for i in range(self.n)))

    def transpose(self) -> Matrix:
        return Matrix._wrap(tuple(zip(*self._rows)))

    def permuted(self, sigma: Permutation) -> Matrix:
        """The similarity ``P^T A P`` that relabels index ``k`` as ``sigma(k)``."""
        inv = sigma.inverse().image
        return Matrix._wrap(tuple(tuple(self._rows[inv[i]][inv[j]] for j in range(self.n))
                                  for i in range(self.n)))

    def trace(self) -> GaussianRational:
        acc = ZERO
        for i in range(self.n):
            acc = acc + self._rows[i][i]
        return acc

    @cached_property
    def is_hermitian(self) -> bool:
        n = self.n
        return all(self._rows[i][j] == self._rows[j][i].conjugate()
                   for i in range(n) for j in range(i, n))

    def is_diagonal(self) -> bool:
        return all(not self._rows[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.n)

    @cached_property
    def det(self) -> GaussianRational:
        return determinant(self)

    @cached_property
    def principal_minors(self) -> dict[IndexSet, GaussianRational]:
        """``det(A[G])`` for every nonempty ``G`` (0-based, sorted tuples)."""
        from itertools import combinations

        # one common denominator for the whole matrix, so each minor is a
        # Bareiss run on an integer submatrix divided by scale**|G|
        scale = 1
        for row in self._rows:
            for z in row:
                if z._d != 1:
                    scale = scale * z._d // gcd(scale, z._d)
        M = [[(z._a * (scale // z._d), z._b * (scale // z._d)) if z else None for z in row]
             for row in self._rows]
        out = {}
        for k in range(1, self.n + 1):
            denom = scale ** k
            for G in combinations(range(self.n), k):
                if k == self.n:
                    out[G] = self.det
                    continue
                re_, im = _bareiss_det([[M[i][j] for j in G] for i in G])
                out[G] = GaussianRational.from_parts(re_, im, denom)
        return out

    def to_complex(self):
        import numpy as np

        return np.array([[complex(x) for x in r] for r in self._rows], dtype=complex)

    def to_json(self) -> dict:
        return {"n": self.n, "data": [[format_entry(x) for x in r] for r in self._rows]}

    @classmethod
    def from_json(cls, obj: dict | str) -> Matrix:
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed matrix JSON: {exc}") from None
        if not isinstance(obj, dict) or "data" not in obj:
            raise InputError("matrix JSON needs a 'data' field")
        data = obj["data"]
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise InputError("'data' must be a list of rows")
        for r in data:
            for x in r:
                if not isinstance(x, str):
                    raise InputError(f"matrix entries must be strings, got {x!r}")
        m = cls(data)
        if "n" in obj and obj["n"] != m.n:
            raise InputError(f"declared n={obj['n']} but data is {m.n}x{m.n}")
        return m


@dataclass(frozen=True)
class BlockPartition:
    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise InputError(f"block sizes must be positive, got {list(sizes)}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def parse(cls, text: str) -> BlockPartition:
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError:
            raise InputError(f"malformed partition {text!r}") from None

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        return (0, *accumulate(self.sizes))

    def indices(self, k: int) -> IndexSet:
        off = self.offsets
        return tuple(range(off[k], off[k + 1]))

    def to_json(self) -> dict:
        return {"sizes": list(self.sizes)}

    @classmethod
    def from_json(cls, obj: dict) -> BlockPartition:
        if not isinstance(obj, dict) or "sizes" not in obj:
            raise InputError("partition JSON needs a 'sizes' field")
        return cls(tuple(obj["sizes"]))


def _gaussian_integer_rows(rows: Sequence[Sequence[GaussianRational]]):
    """Scale each row to Gaussian integers; return (int rows, product of scales)."""
    out = []
    scale = 1
    for row in rows:
        lcm = 1
        for z in row:
            d = z._d
            if d != 1:
                lcm = lcm * d // gcd(lcm, d)
        out.append([((z._a * (lcm // z._d), z._b * (lcm // z._d)) if z._a or z._b else None)
                    for z in row])
        scale *= lcm
    return out, scale


def _bareiss_det(m: list[list[tuple[int, int] | None]]) -> tuple[int, int]:
    """Fraction-free elimination over Z[i]; ``None`` marks a zero entry."""
    n = len(m)
    sign = 1
    pr, pi = 1, 0
    for k in range(n - 1):
        if m[k][k] is None:
            for p in range(k + 1, n):
                if m[p][k] is not None:
                    m[k], m[p] = m[p], m[k]
                    sign = -sign
                    break
            else:
                return 0, 0
        kr, ki = m[k][k]
        rowk = m[k]
        norm = pr * pr + pi * pi
        for i in range(k + 1, n):
            rowi = m[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                aij = rowi[j]
                akj = rowk[j]
                if aij is None:
                    if aik is None or akj is None:
                        continue
                    xr, xi = 0, 0
                else:
                    xr = kr * aij[0] - ki * aij[1]
                    xi = kr * aij[1] + ki * aij[0]
                if aik is not None and akj is not None:
                    xr -= aik[0] * akj[0] - aik[1] * akj[1]
                    xi -= aik[0] * akj[1] + aik[1] * akj[0]
                if pi == 0:
                    if pr != 1:
                        xr //= pr
                        xi //= pr
                else:
                    xr, xi = (xr * pr + xi * pi) // norm, (xi * pr - xr * pi) // norm
                rowi[j] = (xr, xi) if (xr or xi) else None
        pr, pi = kr, ki
    last = m[n - 1][n - 1]
    if last is None:
        return 0, 0
    return sign * last[0], sign * last[1]


def determinant(A: Matrix) -> GaussianRational:
    """Exact determinant by Bareiss elimination over the Gaussian integers."""
    m, scale = _gaussian_integer_rows(A.rows)
    re_, im = _bareiss_det(m)
    return GaussianRational.from_parts(re_, im, scale)


def _rank_of_rows(rows: Sequence[Sequence[GaussianRational]]) -> int:
    """Rank of a (possibly rectangular) list of rows, fraction-free echelon form."""
    if not rows:
        return 0
    m, _ = _gaussian_integer_rows(rows)
    nrows, ncols = len(m), len(m[0])
    r = 0
    pr, pi = 1, 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((p for p in range(r, nrows) if m[p][c] is not None), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        kr, ki = m[r][c]
        rowk = m[r]
        norm = pr * pr + pi * pi
        for i in range(r + 1, nrows):
            rowi = m[i]
            aik = rowi[c] or (0, 0)
            for j in range(c + 1, ncols):
                aij = rowi[j] or (0, 0)
                akj = rowk[j] or (0, 0)
                xr = kr * aij[0] - ki * aij[1] - (aik[0] * akj[0] - aik[1] * akj[1])
                xi = kr * aij[1] + ki * aij[0] - (aik[0] * akj[1] + aik[1] * akj[0])
                xr, xi = (xr * pr + xi * pi) // norm, (xi * pr - xr * pi) // norm
                rowi[j] = (xr, xi) if (xr or xi) else None
            rowi[c] = None
        pr, pi = kr, ki
        r += 1
    return r


def rank(A: Matrix) -> int:
    return _rank_of_rows(A.rows)


def column_rank(A: Matrix, columns: Sequence[int]) -> int:
    """Rank of the n-by-k submatrix of ``A`` made of the given columns."""
    return _rank_of_rows([[row[j] for j in columns] for row in A.rows])


def principal_submatrix(A: Matrix, G: Sequence[int]) -> Matrix:
    """Rows and columns of ``A`` indexed by ``G`` (0-based), order preserved."""
    G = tuple(G)
    if not G:
        raise InputError("index set must be nonempty")
    if any(not 0 <= g < A.n for g in G) or len(set(G)) != len(G):
        raise InputError(f"invalid index set {[g + 1 for g in G]} for n={A.n}")
    rows = A.rows
    return Matrix._wrap(tuple(tuple(rows[i][j] for j in G) for i in G))


def hadamard_product(A: Matrix, B: Matrix) -> Matrix:
    if A.n != B.n:
        raise InputError(f"dimension mismatch: {A.n} vs {B.n}")
    return Matrix._wrap(tuple(tuple(a * b if a and b else ZERO for a, b in zip(r, s))
                              for r, s in zip(A.rows, B.rows)))


def permutation_matrix(tau: Permutation) -> Matrix:
    """Row ``i`` has its single one in column ``tau(i)``."""
    n = tau.n
    return Matrix._wrap(tuple(tuple(ONE if j == tau.image[i] else ZERO for j in range(n))
                              for i in range(n)))


def columns_collinear(A: Matrix, i: int, j: int) -> bool:
    """True iff every 2x2 minor built from columns ``i`` and ``j`` vanishes."""
    if i == j:
        return True
    ci = A.column(i)
    cj = A.column(j)
    nz = [r for r in range(A.n) if ci[r] or cj[r]]
    for a in range(len(nz)):
        r = nz[a]
        for s in nz[a + 1:]:
            if ci[r] * cj[s] != ci[s] * cj[r]:
                return False
    return True


def block(A: Matrix, part: BlockPartition, i: int, j: int) -> tuple[tuple[GaussianRational, ...], ...]:
    off = part.offsets
    return tuple(row[off[j]:off[j + 1]] for row in A.rows[off[i]:off[i + 1]])


def _check_partition(A: Matrix, part: BlockPartition) -> None:
    if part.total != A.n:
        raise InputError(f"partition sizes {list(part.sizes)} do not sum to n={A.n}")


def block_determinant_matrix(A: Matrix, part: BlockPartition) -> Matrix:
    """The m-by-m matrix of block determinants ``det(A_ij)``."""
    _check_partition(A, part)
    m = part.count
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            if part.sizes[i] != part.sizes[j]:
                raise InputError(
                    f"block ({i + 1},{j + 1}) is {part.sizes[i]}x{part.sizes[j]}, not square")
            row.append(determinant(Matrix._wrap(block(A, part, i, j))))
        out.append(tuple(row))
    return Matrix._wrap(tuple(out))


def is_block_diagonal(A: Matrix, part: BlockPartition) -> bool:
    _check_partition(A, part)
    owner = [k for k, s in enumerate(part.sizes) for _ in range(s)]
    return all(not A.rows[i][j] for i in range(A.n) for j in range(A.n)
               if owner[i] != owner[j])


def vector_rational(values: Iterable[Number]) -> list[Fraction]:
    out = []
    for v in values:
        g = as_gaussian(v)
        if not g.is_real():
            raise InputError(f"expected a real value, got {format_entry(g)}")
        out.append(g.real)
    return out
