"""Seeded, deterministic construction of exact test matrices.

All randomness flows from :class:`SplitMix64`, so identical arguments give
identical matrices on every platform and Python version.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import Permutation, derangements, orbits
from .exact import ONE, ZERO, GaussianRational, InputError
from .majorization import DoublyStochasticMatrix, SpectrumVector
from .matrix import BlockPartition, Matrix, rank

__all__ = [
    "SplitMix64",
    "derive_seed",
    "GeneratorSpec",
    "FAMILIES",
    "generate",
    "rational_unitary",
    "gram_psd",
    "random_pd",
    "diagonal_psd",
    "random_hermitian",
    "random_spectrum",
    "random_doubly_stochastic",
    "random_derangement",
    "random_non_identity",
    "rotation_frame",
    "pad_frame",
    "sqrt_block_frame",
    "random_frame",
    "rank_one_orbit_family",
    "block_pd",
    "structured_pd",
]

_MASK = (1 << 64) - 1
DEFAULT_DENOMINATOR = 8
MAX_REGENERATE = 64

PYTHAGOREAN = (
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(4, 5), Fraction(3, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(12, 13), Fraction(5, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
    (Fraction(15, 17), Fraction(8, 17)),
)

UNIMODULAR = (
    ONE,
    GaussianRational(0, 1),
    GaussianRational(-1),
    GaussianRational(0, -1),
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(3, 5), Fraction(-4, 5)),
    GaussianRational(Fraction(-4, 5), Fraction(3, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(12, 13), Fraction(-5, 13)),
    GaussianRational(Fraction(8, 17), Fraction(15, 17)),
)


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea, Flood), 64-bit state."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def rational(self, m: int = DEFAULT_DENOMINATOR) -> Fraction:
        return Fraction(self.randint(-m, m), m)

    def gaussian(self, m: int = DEFAULT_DENOMINATOR) -> GaussianRational:
        return GaussianRational(self.rational(m), self.rational(m))


def derive_seed(seed: int, *parts: object) -> int:
    """Child seed for ``parts`` (e.g. a trial index); independent of worker layout."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed)).encode())
    for part in parts:
        h.update(b"|")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "big")


def _rng(seed: int, *parts: object) -> SplitMix64:
    return SplitMix64(derive_seed(seed, *parts) if parts else seed)


def random_permutation(n: int, rng: SplitMix64) -> Permutation:
    return Permutation(tuple(rng.shuffle(list(range(n)))))


def random_derangement(n: int, rng: SplitMix64) -> Permutation:
    if n < 2:
        raise InputError("no derangement exists for n < 2")
    while True:
        p = random_permutation(n, rng)
        if p.is_derangement():
            return p


def random_non_identity(n: int, rng: SplitMix64) -> Permutation:
    if n < 2:
        raise InputError("no non-identity permutation exists for n < 2")
    while True:
        p = random_permutation(n, rng)
        if not p.is_identity():
            return p


# -- unitaries and frames -------------------------------------------------------

def _rotate_columns(cols: list[list[GaussianRational]], p: int, q: int,
                    c: Fraction, s: Fraction, phase: GaussianRational) -> None:
    """``V <- V G`` for the complex Givens rotation ``[[c, -s conj(phase)], [s phase, c]]``."""
    sp = phase * s
    sq = -(phase.conjugate() * s)
    cp, cq = cols[p], cols[q]
    cols[p] = [a * c + b * sp for a, b in zip(cp, cq)]
    cols[q] = [a * sq + b * c for a, b in zip(cp, cq)]


def rational_unitary(n: int, seed: int, rotations: int | None = None) -> Matrix:
    """Exactly unitary matrix: phases times a product of Pythagorean Givens rotations."""
    if n < 1:
        raise InputError("n must be >= 1")
    rng = SplitMix64(seed)
    cols = [[rng.choice(UNIMODULAR) if i == j else ZERO for i in range(n)] for j in range(n)]
    if rotations is None:
        rotations = n * (n - 1) // 2
    for _ in range(rotations if n > 1 else 0):
        p = rng.below(n)
        q = rng.below(n - 1)
        q = q + 1 if q >= p else q
        c, s = rng.choice(PYTHAGOREAN)
        if rng.below(2):
            s = -s
        _rotate_columns(cols, p, q, c, s, rng.choice(UNIMODULAR))
    return Matrix([[cols[j][i] for j in range(n)] for i in range(n)])


def rotation_frame(c: Fraction, s: Fraction) -> tuple[SpectrumVector, Matrix]:
    """Unit spectrum and the 3x3 frame ``[[i c, i s, 0], [s, c, 0], [0, 0, -1]]``."""
    c, s = Fraction(c), Fraction(s)
    if c * c + s * s != 1:
        raise InputError(f"({c}, {s}) is not a unit pair")
    i = GaussianRational(0, 1)
    V = Matrix([[i * c, i * s, 0], [s, c, 0], [0, 0, -1]])
    return SpectrumVector([1, 1, 1]), V


def pad_frame(lam: Sequence[Fraction], V: Matrix) -> tuple[SpectrumVector, Matrix]:
    """Pad with a zero eigenvalue and a trailing 1: ``diag(lam, 0)`` and ``diag(V, 1)``."""
    lam = SpectrumVector(lam)
    if len(lam) != V.n:
        raise InputError("spectrum and frame sizes differ")
    n = V.n
    rows = [list(r) + [ZERO] for r in V.rows] + [[ZERO] * n + [ONE]]
    return SpectrumVector(list(lam) + [0]), Matrix(rows)


def sqrt_block_frame(pairs: Sequence[tuple[Fraction, Fraction] | None],
                            relabel: Permutation | None = None) -> Matrix:
    """Non-unitary frame ``V = (I + T)^(1/2)`` with an exact rational square root.

    Each entry of ``pairs`` is either ``None`` (a 1x1 block ``[1]``) or a unit
    pair ``(a, b)`` giving the symmetric block ``[[a, b], [b, a]]`` whose square
    is ``[[1, 2ab], [2ab, 1]]``.  ``relabel`` scatters the blocks.
    """
    rows: list[list] = []
    sizes = [1 if pr is None else 2 for pr in pairs]
    n = sum(sizes)
    off = 0
    for pr in pairs:
        if pr is None:
            rows.append([ZERO] * off + [ONE] + [ZERO] * (n - off - 1))
            off += 1
            continue
        a, b = Fraction(pr[0]), Fraction(pr[1])
        if a * a + b * b != 1 or a < abs(b):
            raise InputError(f"({a}, {b}) must be a unit pair with a >= |b|")
        rows.append([ZERO] * off + [a, b] + [ZERO] * (n - off - 2))
        rows.append([ZERO] * off + [b, a] + [ZERO] * (n - off - 2))
        off += 2
    V = Matrix(rows)
    return V.permuted(relabel) if relabel is not None else V


def random_frame(n: int, seed: int) -> Matrix:
    """A frame drawn from rational unitaries, rotation frames, padded frames,
    or rational square-root frames."""
    rng = SplitMix64(seed)
    kind = rng.below(4)
    if kind == 0 or n < 2:
        return rational_unitary(n, derive_seed(seed, "unitary"))
    if kind == 1 and n >= 3:
        c, s = rng.choice(PYTHAGOREAN)
        _, V = rotation_frame(c, s)
        while V.n < n:
            _, V = pad_frame([1] * V.n, V)
        return V.permuted(random_permutation(n, rng))
    if kind == 2:
        pairs: list = []
        left = n
        while left:
            if left >= 2 and rng.below(3):
                a, b = rng.choice(PYTHAGOREAN)
                pairs.append((max(a, b), min(a, b)))
                left -= 2
            else:
                pairs.append(None)
                left -= 1
        return sqrt_block_frame(pairs, random_permutation(n, rng))
    # a smaller unitary padded by ones on the diagonal
    k = rng.randint(1, n - 1)
    V = rational_unitary(k, derive_seed(seed, "pad"))
    while V.n < n:
        _, V = pad_frame([1] * V.n, V)
    return V.permuted(random_permutation(n, rng))


# -- Hermitian / PSD families ---------------------------------------------------

def _gram(M: list[list[GaussianRational]], n: int) -> Matrix:
    """``M* M`` for a k-by-n matrix ``M``; Hermitian by construction."""
    cols = [[row[j] for row in M] for j in range(n)]
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = ZERO
            for a, b in zip(cols[i], cols[j]):
                if a and b:
                    acc = acc + a.conjugate() * b
            out[i][j] = acc
            out[j][i] = acc.conjugate()
    return Matrix(out)


def gram_psd(n: int, rank_: int, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    """``M* M`` for a seeded ``rank_``-by-``n`` Gaussian-rational ``M``.

    Draws are regenerated (with derived seeds) until the rank is exactly
    ``min(rank_, n)``.
    """
    if not 1 <= rank_ <= n:
        raise InputError(f"need 1 <= rank <= n, got rank={rank_}, n={n}")
    for attempt in range(MAX_REGENERATE):
        rng = _rng(seed, "gram", attempt) if attempt else SplitMix64(seed)
        M = [[rng.gaussian(m) for _ in range(n)] for _ in range(rank_)]
        A = _gram(M, n)
        if rank(A) == rank_:
            return A
    raise RuntimeError(f"could not draw a rank-{rank_} Gram matrix for seed {seed}")


def random_pd(n: int, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    """Full-rank Gram matrix, certified positive definite by leading minors."""
    from .inequalities import is_pd

    for attempt in range(MAX_REGENERATE):
        A = gram_psd(n, n, derive_seed(seed, "pd", attempt) if attempt else seed, m)
        if is_pd(A):
            return A
    raise RuntimeError(f"could not certify a PD draw for seed {seed}")


def diagonal_psd(n: int, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    rng = SplitMix64(seed)
    return Matrix.diagonal([Fraction(rng.randint(0, m), m) for _ in range(n)])


def structured_pd(n: int, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    """PD matrix that is block diagonal (blocks of size 1 or 2) up to relabelling.

    Such matrices realise the equality cases of the sharpened inequality for
    transpositions, which generic Gram draws almost never hit.
    """
    rng = SplitMix64(seed)
    sizes = []
    left = n
    while left:
        s = 2 if left >= 2 and rng.below(2) else 1
        sizes.append(s)
        left -= s
    A = block_pd(sizes, derive_seed(seed, "blocks"), block_diagonal=True, m=m)[0]
    return A.permuted(random_permutation(n, rng))


def random_hermitian(n: int, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    rng = SplitMix64(seed)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussianRational(rng.rational(m))
        for j in range(i + 1, n):
            z = rng.gaussian(m)
            rows[i][j] = z
            rows[j][i] = z.conjugate()
    return Matrix(rows)


def rank_one_orbit_family(tau: Permutation, seed: int, m: int = DEFAULT_DENOMINATOR) -> Matrix:
    """One rank-one PSD block ``v v*`` per orbit of ``tau``, zeros elsewhere."""
    if not tau.is_derangement():
        raise InputError(f"{tau} is not a derangement")
    rng = SplitMix64(seed)
    n = tau.n
    rows = [[ZERO] * n for _ in range(n)]
    for J in orbits(tau):
        v = []
        for _ in J:
            z = ZERO
            while not z:
                z = rng.gaussian(m)
            v.append(z)
        for a, i in enumerate(J):
            for b, j in enumerate(J):
                rows[i][j] = v[a] * v[b].conjugate()
    return Matrix(rows)


def block_pd(sizes: Sequence[int], seed: int, block_diagonal: bool = False,
             m: int = DEFAULT_DENOMINATOR) -> tuple[Matrix, BlockPartition]:
    """PD matrix partitioned by ``sizes``; optionally block diagonal."""
    part = BlockPartition(tuple(sizes))
    n = part.total
    if not block_diagonal:
        return random_pd(n, seed, m), part
    rows = [[ZERO] * n for _ in range(n)]
    off = part.offsets
    for k, size in enumerate(part.sizes):
        blk = random_pd(size, derive_seed(seed, "block", k), m)
        for i in range(size):
            for j in range(size):
                rows[off[k] + i][off[k] + j] = blk[i, j]
    return Matrix(rows), part


def random_spectrum(n: int, seed: int, distinct: bool = False, positive: bool = False,
                    m: int = DEFAULT_DENOMINATOR) -> SpectrumVector:
    rng = SplitMix64(seed)
    lo = 1 if positive else 0
    if distinct:
        pool = list(range(lo, 4 * m + n + 1))
        return SpectrumVector(Fraction(k, m) for k in rng.shuffle(pool)[:n])
    return SpectrumVector(Fraction(rng.randint(lo, 4 * m), m) for _ in range(n))


def random_doubly_stochastic(n: int, seed: int) -> DoublyStochasticMatrix:
    """Convex combination of at most ``n`` permutation matrices with small-denominator weights."""
    rng = SplitMix64(seed)
    k = rng.randint(1, n)
    raw = [rng.randint(1, 6) for _ in range(k)]
    total = sum(raw)
    weights = [Fraction(r, total) for r in raw]
    perms = [random_permutation(n, rng) for _ in range(k)]
    return DoublyStochasticMatrix.from_permutations(weights, perms)


# -- dispatch -------------------------------------------------------------------------

FAMILIES = ("psd", "pd", "gram", "diag", "rationalUnitary", "frame", "eg1", "eg2", "eg3",
            "rankOneOrbit", "blockPD", "structuredPD", "hermitian")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    seed: int
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        canon = {f.lower(): f for f in FAMILIES}
        fam = canon.get(self.family.lower())
        if fam is None:
            raise InputError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        object.__setattr__(self, "family", fam)
        if fam not in ("eg1", "eg2", "eg3", "blockPD", "rankOneOrbit") and not 1 <= self.n <= 12:
            raise InputError(f"n={self.n} outside 1..12")


def generate(spec: GeneratorSpec) -> dict:
    """Build one instance; returns a dict with ``matrix`` and optional
    ``lambda``, ``partition`` and ``perm``."""
    fam, n, seed, params = spec.family, spec.n, spec.seed, spec.params
    rng = SplitMix64(derive_seed(seed, fam, "aux"))
    if fam in ("psd", "gram"):
        r = params.get("rank")
        r = rng.randint(1, n) if r is None else int(r)
        return {"matrix": gram_psd(n, r, seed)}
    if fam == "pd":
        return {"matrix": random_pd(n, seed)}
    if fam == "diag":
        return {"matrix": diagonal_psd(n, seed)}
    if fam == "structuredPD":
        return {"matrix": structured_pd(n, seed)}
    if fam == "hermitian":
        return {"matrix": random_hermitian(n, seed)}
    if fam == "rationalUnitary":
        return {"matrix": rational_unitary(n, seed),
                "lambda": random_spectrum(n, derive_seed(seed, "lambda"))}
    if fam == "frame":
        return {"matrix": random_frame(n, seed),
                "lambda": random_spectrum(n, derive_seed(seed, "lambda"))}
    if fam == "eg1":
        c, s = params.get("c"), params.get("s")
        if c is None:
            c, s = rng.choice(PYTHAGOREAN)
        lam, V = rotation_frame(c, s)
        return {"matrix": V, "lambda": lam}
    if fam == "eg2":
        c, s = params.get("c"), params.get("s")
        if c is None:
            c, s = rng.choice(PYTHAGOREAN)
        lam, V = pad_frame(*rotation_frame(c, s))
        return {"matrix": V, "lambda": lam}
    if fam == "eg3":
        count = max(1, n // 2)
        pairs = [tuple(sorted(rng.choice(PYTHAGOREAN), reverse=True)) for _ in range(count)]
        if n % 2:
            pairs.append(None)
        V = sqrt_block_frame(pairs)
        return {"matrix": V, "lambda": random_spectrum(V.n, derive_seed(seed, "lambda"))}
    if fam == "rankOneOrbit":
        perm = params.get("perm")
        if perm is None:
            perm = random_derangement(n, rng)
        return {"matrix": rank_one_orbit_family(perm, seed), "perm": perm}
    if fam == "blockPD":
        sizes = params.get("sizes") or [n]
        A, part = block_pd(sizes, seed, block_diagonal=bool(params.get("block_diagonal")))
        return {"matrix": A, "partition": part}
    raise InputError(f"unhandled family {fam}")  # pragma: no cover


def all_derangements_cached(n: int) -> list[Permutation]:
    return _DERANGEMENTS.setdefault(n, derangements(n))


_DERANGEMENTS: dict[int, list[Permutation]] = {}
