"""Majorization, elementary symmetric functions and doubly stochastic matrices.

Also holds the frame machinery: a *frame* is a square matrix whose rows and
columns are unit vectors, and ``B = V* diag(lam) V`` is its congruence image.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .combinatorics import Permutation
from .exact import (
    ZERO,
    GaussianRational,
    InputError,
    format_rational,
    parse_rational,
)
from .matrix import Matrix

__all__ = [
    "SpectrumVector",
    "DoublyStochasticMatrix",
    "PQReport",
    "majorizes",
    "esym",
    "esym_all",
    "check_frame",
    "is_frame",
    "frame_to_ds",
    "is_permutation_ds",
    "frame_congruence",
    "frame_congruence_diagonal",
    "check_lemma_pq",
    "product",
]


def product(values: Iterable[Fraction]) -> Fraction:
    acc = Fraction(1)
    for v in values:
        acc *= v
    return acc


class SpectrumVector(tuple):
    """Tuple of nonnegative rationals ``lam_1, ..., lam_n``."""

    def __new__(cls, values: Iterable) -> SpectrumVector:
        vals = []
        for v in values:
            if isinstance(v, str):
                v = parse_rational(v)
            elif isinstance(v, GaussianRational):
                if not v.is_real():
                    raise InputError("spectrum entries must be real")
                v = v.real
            v = Fraction(v)
            if v < 0:
                raise InputError(f"spectrum entry {v} is negative")
            vals.append(v)
        if not vals:
            raise InputError("spectrum must be nonempty")
        return super().__new__(cls, vals)

    def to_json(self) -> dict:
        return {"lambda": [format_rational(v) for v in self]}

    @classmethod
    def from_json(cls, obj: dict | str) -> SpectrumVector:
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "lambda" not in obj:
            raise InputError("spectrum JSON needs a 'lambda' field")
        if not all(isinstance(x, str) for x in obj["lambda"]):
            raise InputError("spectrum entries must be strings like '3/1'")
        return cls(obj["lambda"])


def majorizes(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """True iff ``x`` majorizes ``y``."""
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")
    xs = sorted(x, reverse=True)
    ys = sorted(y, reverse=True)
    sx = sy = Fraction(0)
    for a, b in zip(xs, ys):
        sx += a
        sy += b
        if sx < sy:
            return False
    return sx == sy


def esym_all(x: Sequence[Fraction]) -> list[Fraction]:
    """``[e_0(x), ..., e_n(x)]``."""
    e = [Fraction(1)] + [Fraction(0)] * len(x)
    for m, v in enumerate(x, start=1):
        for k in range(m, 0, -1):
            e[k] += e[k - 1] * v
    return e


def esym(k: int, x: Sequence[Fraction]) -> Fraction:
    if not 0 <= k <= len(x):
        raise InputError(f"k={k} out of range 0..{len(x)}")
    return esym_all(x)[k]


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InputError("doubly stochastic matrix must be square and nonempty")
        for i, r in enumerate(rows):
            if any(x < 0 for x in r):
                raise InputError(f"negative entry in row {i + 1}")
            if sum(r) != 1:
                raise InputError(f"row {i + 1} sums to {sum(r)}, not 1")
        for j in range(n):
            s = sum(r[j] for r in rows)
            if s != 1:
                raise InputError(f"column {j + 1} sums to {s}, not 1")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_permutations(cls, weights: Sequence[Fraction],
                          perms: Sequence[Permutation]) -> DoublyStochasticMatrix:
        """Convex combination ``sum_k w_k P_k`` of permutation matrices."""
        if len(weights) != len(perms) or not perms:
            raise InputError("need one weight per permutation")
        if any(w < 0 for w in weights) or sum(weights) != 1:
            raise InputError("weights must be nonnegative and sum to 1")
        n = perms[0].n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for w, p in zip(weights, perms):
            for i in range(n):
                rows[i][p.image[i]] += w
        return cls(tuple(tuple(r) for r in rows))

    def left_apply(self, x: Sequence[Fraction]) -> list[Fraction]:
        """Row vector times matrix, ``x S``."""
        if len(x) != self.n:
            raise InputError("length mismatch")
        return [sum((x[i] * self.entries[i][j] for i in range(self.n)), Fraction(0))
                for j in range(self.n)]


def check_frame(V: Matrix) -> None:
    """Raise :class:`InputError` unless every row and column of ``V`` is a unit vector."""
    rows = V.rows
    for j in range(V.n):
        s = sum((rows[i][j].modulus_squared() for i in range(V.n)), Fraction(0))
        if s != 1:
            raise InputError(f"column {j + 1} of V has squared norm {s}, not 1")
    for i in range(V.n):
        s = sum((z.modulus_squared() for z in rows[i]), Fraction(0))
        if s != 1:
            raise InputError(f"row {i + 1} of V has squared norm {s}, not 1")


def is_frame(V: Matrix) -> bool:
    try:
        check_frame(V)
    except InputError:
        return False
    return True


def frame_to_ds(V: Matrix) -> DoublyStochasticMatrix:
    check_frame(V)
    return DoublyStochasticMatrix(tuple(tuple(z.modulus_squared() for z in r) for r in V.rows))


def is_permutation_ds(S: DoublyStochasticMatrix) -> bool:
    return all(x == 0 or x == 1 for r in S.entries for x in r)


def _check_spectrum(lam: Sequence[Fraction], V: Matrix) -> SpectrumVector:
    lam = lam if isinstance(lam, SpectrumVector) else SpectrumVector(lam)
    if len(lam) != V.n:
        raise InputError(f"spectrum has {len(lam)} entries but V is {V.n}x{V.n}")
    return lam


def frame_congruence(lam: Sequence[Fraction], V: Matrix) -> Matrix:
    """``B = V* diag(lam) V``."""
    lam = _check_spectrum(lam, V)
    n = V.n
    rows = V.rows
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = ZERO
            for j in range(n):
                if lam[j] and rows[j][i] and rows[j][k]:
                    acc = acc + rows[j][i].conjugate() * rows[j][k] * lam[j]
            row.append(acc)
        out.append(row)
    return Matrix(out)


def frame_congruence_diagonal(lam: Sequence[Fraction], V: Matrix) -> list[Fraction]:
    """Diagonal of ``V* diag(lam) V``: ``b_ii = sum_j lam_j |v_ji|^2``."""
    lam = _check_spectrum(lam, V)
    rows = V.rows
    return [sum((lam[j] * rows[j][i].modulus_squared() for j in range(V.n)), Fraction(0))
            for i in range(V.n)]


@dataclass(frozen=True)
class PQReport:
    """Outcome of comparing P(u) = prod(lam_i - u) with Q(u) = prod(b_ii - u)."""

    p_s: Fraction
    p_t: Fraction
    q_s: Fraction
    q_t: Fraction
    b_diag: tuple[Fraction, ...]
    # None when not applicable: n < 3 or the difference inequality is strict
    spectrum_permutation: Optional[bool] = field(default=None)

    @property
    def gap_t(self) -> Fraction:
        return self.q_t - self.p_t

    @property
    def gap_difference(self) -> Fraction:
        return (self.q_s - self.q_t) - (self.p_s - self.p_t)

    @property
    def holds_t(self) -> bool:
        return self.gap_t >= 0

    @property
    def holds_difference(self) -> bool:
        return self.gap_difference >= 0

    @property
    def holds(self) -> bool:
        return self.holds_t and self.holds_difference

    @property
    def equality(self) -> bool:
        return self.gap_difference == 0

    @property
    def consistent(self) -> bool:
        """False only if equality in the difference failed to force a spectrum permutation."""
        return self.spectrum_permutation is not False

    def to_json(self) -> dict:
        sp = self.spectrum_permutation
        return {
            "theorem": "lemmaPQ",
            "holds": self.holds,
            "P(s)": format_rational(self.p_s),
            "P(t)": format_rational(self.p_t),
            "Q(s)": format_rational(self.q_s),
            "Q(t)": format_rational(self.q_t),
            "gap_t": format_rational(self.gap_t),
            "gap_difference": format_rational(self.gap_difference),
            "equality": self.equality,
            "spectrum_permutation": "n/a" if sp is None else sp,
        }


def check_lemma_pq(lam: Sequence[Fraction], V: Matrix, s: Fraction, t: Fraction) -> PQReport:
    lam = _check_spectrum(lam, V)
    s, t = Fraction(s), Fraction(t)
    if not s < t:
        raise InputError(f"need s < t, got s={s}, t={t}")
    if t > min(lam):
        raise InputError(f"need t <= min(lambda) = {min(lam)}, got t={t}")
    check_frame(V)
    b = frame_congruence_diagonal(lam, V)
    p_s = product(x - s for x in lam)
    p_t = product(x - t for x in lam)
    q_s = product(x - s for x in b)
    q_t = product(x - t for x in b)
    spectrum_permutation = None
    if V.n >= 3 and (q_s - q_t) == (p_s - p_t):
        spectrum_permutation = sorted(b) == sorted(lam)
    return PQReport(p_s, p_t, q_s, q_t, tuple(b), spectrum_permutation)

