"""Exact scalars, graded linear algebra, sign combinatorics and truncated series."""

from .combinatorics import (
    Permutation, SymWord, all_permutations, canonical_words, compositions,
    decalage_sign, koszul_sign, odd_sign, set_partitions, shuffles, sort_with_sign,
)
from .linear import GradedBasis, LinMap, Vector, accumulate, series_map, series_vector
from .scalar import format_scalar, parse_scalar
from .series import FormalSeries, TruncationMismatch
