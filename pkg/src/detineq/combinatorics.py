"""Permutations, derangements, orbits and fixed points.

Internally everything is 0-based; text forms (``"2,3,1"``) are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterator, Sequence

from .exact import InputError

IndexSet = tuple[int, ...]

MAX_ENUMERATION_N = 9


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``; ``image[i]`` is sigma(i)."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(x) for x in self.image)
        if sorted(image) != list(range(len(image))):
            raise InputError(f"not a permutation: {[x + 1 for x in image]}")
        object.__setattr__(self, "image", image)

    @classmethod
    def from_one_based(cls, image: Sequence[int]) -> Permutation:
        return cls(tuple(int(x) - 1 for x in image))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        try:
            values = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError:
            raise InputError(f"malformed permutation {text!r}") from None
        if not values:
            raise InputError("empty permutation")
        return cls.from_one_based(values)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self) -> int:
        return len(self.image)

    def __str__(self) -> str:
        return ",".join(str(x + 1) for x in self.image)

    def one_based(self) -> list[int]:
        return [x + 1 for x in self.image]

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.image))

    def is_derangement(self) -> bool:
        return all(i != x for i, x in enumerate(self.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, x in enumerate(self.image):
            inv[x] = i
        return Permutation(tuple(inv))

    @cached_property
    def sign(self) -> int:
        return -1 if sum(len(o) - 1 for o in orbits(self)) % 2 else 1


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order."""
    for image in permutations(range(n)):
        yield Permutation(image)


def derangements(n: int) -> list[Permutation]:
    """Fixed-point-free permutations of size ``n`` in lexicographic order."""
    if n < 1:
        raise InputError("n must be >= 1")
    out: list[Permutation] = []
    image = [0] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            out.append(Permutation(tuple(image)))
            return
        for x in range(n):
            if x != i and not used[x]:
                used[x] = True
                image[i] = x
                extend(i + 1)
                used[x] = False

    extend(0)
    return out


def fixed_points(sigma: Permutation) -> IndexSet:
    return tuple(i for i, x in enumerate(sigma.image) if i == x)


def orbits(sigma: Permutation) -> list[IndexSet]:
    """Cycles of ``sigma``, each sorted, listed by least element."""
    seen = [False] * sigma.n
    out = []
    for start in range(sigma.n):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = sigma.image[i]
        out.append(tuple(sorted(cycle)))
    return out


def is_transposition(sigma: Permutation) -> bool:
    sizes = sorted(len(o) for o in orbits(sigma))
    return sizes[-1] == 2 and sizes.count(2) == 1 and sizes.count(1) == len(sizes) - 1


def restrict(sigma: Permutation, support: IndexSet) -> Permutation:
    """Restriction of ``sigma`` to an invariant set, relabelled to ``0..k-1``."""
    pos = {x: k for k, x in enumerate(support)}
    try:
        return Permutation(tuple(pos[sigma.image[i]] for i in support))
    except KeyError:
        raise InputError("support is not invariant under the permutation") from None


def subfactorial(n: int) -> int:
    if n == 0:
        return 1
    a, b = 1, 0  # d(0), d(1)
    for k in range(2, n + 1):
        a, b = b, (k - 1) * (a + b)
    return b
