"""Signed permutations, (n, m)-shuffles and pair-ordered permutation sets.

Everything here is enumerated in a fixed lexicographic order so that any sum
indexed by these sets is reproducible term for term.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{base, ..., base + n - 1}`` stored by its images."""

    images: tuple[int, ...]
    base: int = 0

    def __post_init__(self) -> None:
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(self.base, self.base + len(images))):
            raise ValueError(
                f"images {images} are not a bijection of "
                f"{{{self.base}..{self.base + len(images) - 1}}}"
            )

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - self.base]

    @property
    def inversions(self) -> int:
        im = self.images
        return sum(1 for a, b in itertools.combinations(range(len(im)), 2) if im[a] > im[b])

    @property
    def parity(self) -> int:
        return sign(self)

    def shifted(self, base: int) -> "Permutation":
        d = base - self.base
        return Permutation(tuple(i + d for i in self.images), base)


def sign(p: Permutation | tuple[int, ...] | list[int]) -> int:
    """Return ``(-1) ** inversions``."""
    if not isinstance(p, Permutation):
        images = tuple(p)
        p = Permutation(images, min(images) if images else 0)
    return -1 if p.inversions % 2 else 1


def permutations(n: int, base: int = 0) -> Iterator[Permutation]:
    for images in itertools.permutations(range(base, base + n)):
        yield Permutation(images, base)


class Shuffle(NamedTuple):
    """An (n, m)-shuffle: ``mu`` lists where the first block lands, ``nu`` the second."""

    mu: tuple[int, ...]
    nu: tuple[int, ...]
    sign: int

    @property
    def permutation(self) -> Permutation:
        return Permutation(self.mu + self.nu)


@dataclass(frozen=True)
class ShuffleSet:
    n: int
    m: int
    members: tuple[Shuffle, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Shuffle]:
        return iter(self.members)


def enumerate_shuffles(n: int, m: int) -> ShuffleSet:
    if n < 0 or m < 0:
        raise ValueError("block sizes must be non-negative")
    members = []
    for mu in itertools.combinations(range(n + m), n):
        taken = set(mu)
        nu = tuple(i for i in range(n + m) if i not in taken)
        # inversions of mu+nu: each mu[i] jumps over mu[i] - i entries of nu
        inv = sum(x - i for i, x in enumerate(mu))
        members.append(Shuffle(mu, nu, -1 if inv % 2 else 1))
    return ShuffleSet(n, m, tuple(members))


@dataclass(frozen=True)
class SEPermutationSet:
    """Permutations whose consecutive pairs ``(s(2i), s(2i+1))`` increase.

    ``convention == "even"``: ground set ``{0..n-1}``, every pair constrained.
    ``convention == "odd"``: ground set ``{1..n}`` with ``s(0) = 0`` pinned,
    so ``s(1)`` is free and the pairs ``(s(2), s(3)), ...`` are constrained.
    """

    n: int
    convention: str
    members: tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)


def _pairs_increase(images: tuple[int, ...], first: int) -> bool:
    # images[k] is s(first + k)
    for pos in range(first, first + len(images) - 1):
        if pos % 2 == 0 and images[pos - first] > images[pos - first + 1]:
            return False
    return True


def enumerate_se(n: int, convention: str = EVEN) -> SEPermutationSet:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if convention == EVEN:
        members = tuple(p for p in permutations(n, 0) if _pairs_increase(p.images, 0))
    elif convention == ODD:
        members = tuple(p for p in permutations(n, 1) if _pairs_increase(p.images, 1))
    else:
        raise ValueError(f"unknown ground-set convention {convention!r}")
    return SEPermutationSet(n, convention, members)


def rotate_to_zero(s: Permutation) -> Permutation:
    """Cyclically rotate the pairs of an even-convention member so 0 leads.

    The result is returned in the odd convention (index 0 dropped).
    """
    if s.base != 0 or len(s) % 2:
        raise ValueError("expected an even-convention permutation of even length")
    pairs = [s.images[i:i + 2] for i in range(0, len(s), 2)]
    k = next(i for i, pr in enumerate(pairs) if 0 in pr)
    rotated = pairs[k:] + pairs[:k]
    flat = tuple(v for pr in rotated for v in pr)
    if flat[0] != 0:
        raise ValueError(f"{s.images} is not pair-increasing")
    return Permutation(flat[1:], 1)


def se_cyclic_classes(p: int) -> dict[Permutation, Permutation]:
    """Map each member of SE_{2p} (even) to its class representative in SE_{2p-1} (odd)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return {s: rotate_to_zero(s) for s in enumerate_se(2 * p, EVEN)}
