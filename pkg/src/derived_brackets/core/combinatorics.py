"""Permutations, shuffles and the sign rules of graded symmetric algebras."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Hashable, Iterator, Sequence


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``{1..n}`` stored by its images.

    ``act`` rearranges a sequence: ``act(w)[k] == w[images[k] - 1]``.
    Products are defined so that ``(s * t).act(w) == s.act(t.act(w))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = imgs[j - 1], imgs[i - 1]
        return cls(tuple(imgs))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def act(self, seq: Sequence) -> list:
        if len(seq) != len(self.images):
            raise ValueError("sequence length does not match permutation size")
        return [seq[i - 1] for i in self.images]

    def __mul__(self, other: Permutation) -> Permutation:
        if len(other) != len(self):
            raise ValueError("cannot compose permutations of different sizes")
        return Permutation(tuple(other.images[i - 1] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for pos, img in enumerate(self.images, start=1):
            inv[img - 1] = pos
        return Permutation(tuple(inv))

    def inversions(self) -> Iterator[tuple[int, int]]:
        imgs = self.images
        for k in range(len(imgs)):
            for l in range(k + 1, len(imgs)):
                if imgs[k] > imgs[l]:
                    yield imgs[k], imgs[l]

    @property
    def sign(self) -> int:
        return -1 if sum(1 for _ in self.inversions()) % 2 else 1


def koszul_sign(perm: Permutation, degrees: Sequence[int]) -> int:
    """Sign ``e`` with ``x_1...x_n = e * x_{perm(1)}...x_{perm(n)}`` in S(V)."""
    if len(degrees) != len(perm):
        raise ValueError(f"expected {len(perm)} degrees, got {len(degrees)}")
    sign = 1
    for a, b in perm.inversions():
        if degrees[a - 1] % 2 and degrees[b - 1] % 2:
            sign = -sign
    return sign


def odd_sign(perm: Permutation, degrees: Sequence[int]) -> int:
    """Same as :func:`koszul_sign` for the odd representation (Lambda(V))."""
    return koszul_sign(perm, degrees) * perm.sign


def shuffles(r: int, s: int) -> list[Permutation]:
    """All (r, s)-shuffles, lexicographic in the chosen r-subset."""
    if r < 0 or s < 0:
        raise ValueError("shuffle sizes must be non-negative")
    n = r + s
    out = []
    for head in combinations(range(1, n + 1), r):
        chosen = set(head)
        tail = tuple(i for i in range(1, n + 1) if i not in chosen)
        out.append(Permutation(head + tail))
    return out


def decalage_sign(degrees: Sequence[int]) -> int:
    n = len(degrees)
    exponent = sum((n - i) * d for i, d in enumerate(degrees, start=1))
    return -1 if exponent % 2 else 1


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in permutations(range(1, n + 1))]


# --- symmetric words -------------------------------------------------------

def sort_with_sign(letters: Sequence[Hashable], degree: Callable) -> tuple[int, tuple]:
    """Sort a word of basis letters into canonical order.

    Returns ``(sign, word)``; ``sign`` is the Koszul sign of the sort and is 0
    when an odd letter repeats (the word is zero in S(V)).
    """
    seq = list(letters)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            if degree(seq[j - 1]) % 2 and degree(seq[j]) % 2:
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    for a, b in zip(seq, seq[1:]):
        if a == b and degree(a) % 2:
            return 0, ()
    return sign, tuple(seq)


@dataclass(frozen=True)
class SymWord:
    """A canonical monomial of S(V) together with the sign picked up while sorting."""

    letters: tuple
    sign: int = 1

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @classmethod
    def normalize(cls, letters: Sequence[Hashable], degree: Callable) -> SymWord:
        sign, word = sort_with_sign(letters, degree)
        return cls(word, sign)

    def __len__(self) -> int:
        return len(self.letters)


def canonical_words(letters: Sequence[Hashable], max_len: int, degree: Callable,
                    min_len: int = 0) -> list[tuple]:
    """Every nonzero canonical word of length ``min_len..max_len`` over ``letters``."""
    letters = sorted(set(letters))
    out: list[tuple] = []

    def extend(prefix: tuple, start: int):
        if len(prefix) >= min_len:
            out.append(prefix)
        if len(prefix) == max_len:
            return
        for i in range(start, len(letters)):
            x = letters[i]
            if prefix and prefix[-1] == x and degree(x) % 2:
                continue
            extend(prefix + (x,), i)

    extend((), 0)
    out.sort(key=lambda w: (len(w), w))
    return out


# --- partitions and compositions -------------------------------------------

def compositions(n: int, k: int | None = None) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to ``n`` (optionally with k parts)."""
    if n == 0:
        if k in (None, 0):
            yield ()
        return
    if k == 0:
        return
    for first in range(1, n + 1):
        rest_k = None if k is None else k - 1
        for rest in compositions(n - first, rest_k):
            yield (first,) + rest


def set_partitions(n: int) -> Iterator[list[tuple[int, ...]]]:
    """Unordered partitions of positions ``0..n-1`` into blocks.

    Blocks are increasing and listed by their smallest element.
    """
    if n == 0:
        yield []
        return
    for smaller in set_partitions(n - 1):
        yield smaller + [(n - 1,)]
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + (n - 1,)] + smaller[i + 1:]


def partition_sign(blocks: Sequence[Sequence[int]], degrees: Sequence[int]) -> int:
    """Koszul sign of rearranging a word into the concatenation of ``blocks``."""
    order = [i + 1 for block in blocks for i in block]
    return koszul_sign(Permutation(tuple(order)), degrees)


def factorial_product(parts: Sequence[int]) -> int:
    return math.prod(math.factorial(p) for p in parts)
