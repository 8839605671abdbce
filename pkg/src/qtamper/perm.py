"""Symmetric-group machinery: cycle decomposition, the odd/even valuation
map, transposition distance, and the parity-swapping set used by the
off-diagonal moment patterns.

Points are stored 0-based; the valuation map and the parity-swapper set
are defined on 1-based labels (label = point + 1), since oddness of a
label is what the combinatorics keys on.  Reports render 1-based.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded

MAX_ENUM_DEGREE = 9           # exhaustive S_n enumeration budget
MAX_SWAPPER_DEGREE = 10       # parity swappers live in S_{2t}, 2t <= 10
MAX_LEMMA_DEGREE = 7          # fixed-point lemma checked on S_n, n <= 7
MAX_COROLLARY_2T = 6          # cycle-bound corollary checked on S_{2t} x B_{2t}


# ---------------------------------------------------------------------------
# tuple-level helpers (hot paths elsewhere use these directly)
# ---------------------------------------------------------------------------

def iter_tuples(n: int) -> Iterator[tuple[int, ...]]:
    """All of S_n as image tuples, in lexicographic order."""
    return itertools.permutations(range(n))


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """(a o b)(x) = a(b(x))."""
    return tuple(a[b[i]] for i in range(len(a)))


def invert(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def cycles_of(images: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles covering [n]; fixed points appear as 1-cycles.

    Each cycle starts at its smallest point and follows the permutation;
    cycles are ordered by their smallest point.
    """
    n = len(images)
    seen = bytearray(n)
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = 1
        j = images[start]
        while j != start:
            cyc.append(j)
            seen[j] = 1
            j = images[j]
        cycles.append(tuple(cyc))
    return cycles


def num_cycles(images: Sequence[int]) -> int:
    n = len(images)
    seen = bytearray(n)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            j = images[j]
    return count


def cycle_type_of(images: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths sorted descending; sums to the degree."""
    return tuple(sorted((len(c) for c in cycles_of(images)), reverse=True))


# ---------------------------------------------------------------------------
# Permutation
# ---------------------------------------------------------------------------

class Permutation:
    """A bijection on {0, ..., n-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection on [{len(imgs)}]: {imgs}")
        self.images = imgs

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from disjoint cycles of 0-based points."""
        imgs = list(range(n))
        for cyc in cycles:
            for i, p in enumerate(cyc):
                imgs[p] = cyc[(i + 1) % len(cyc)]
        return cls(imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """(self * other)(x) = self(other(x))."""
        return Permutation(compose(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(invert(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def cycles(self) -> list[tuple[int, ...]]:
        return cycles_of(self.images)

    def cycle_type(self) -> tuple[int, ...]:
        return cycle_type_of(self.images)

    def num_cycles(self) -> int:
        return num_cycles(self.images)


# ---------------------------------------------------------------------------
# valuation, fixed points, transposition distance
# ---------------------------------------------------------------------------

def valuation(sigma: Permutation) -> int:
    """Sum over cycles of |#odd - #even| counted on 1-based labels.

    Equals the degree exactly when sigma maps odd labels to odd labels
    and even labels to even labels.
    """
    total = 0
    for cyc in sigma.cycles():
        odd = sum(1 for p in cyc if (p + 1) % 2 == 1)
        total += abs(odd - (len(cyc) - odd))
    return total


def fix_move(sigma: Permutation) -> tuple[frozenset[int], frozenset[int]]:
    """(Fix, Move) as disjoint 0-based point sets covering [n]."""
    fixed = frozenset(i for i, j in enumerate(sigma.images) if i == j)
    moved = frozenset(range(sigma.degree)) - fixed
    return fixed, moved


def min_transpositions(sigma: Permutation) -> int:
    """Minimum number of transpositions composing to sigma: n - |C(sigma)|."""
    return sigma.degree - sigma.num_cycles()


@lru_cache(maxsize=None)
def _transposition_histogram(n: int) -> tuple[int, ...]:
    """histogram[i] = #{sigma in S_n : min_transpositions(sigma) = i}."""
    hist = [0] * n
    for images in iter_tuples(n):
        hist[n - num_cycles(images)] += 1
    return tuple(hist)


def count_by_transpositions(n: int, i: int) -> int:
    """Exact |{sigma in S_n : T(sigma) = i}| by enumeration, n <= 9."""
    if n > MAX_ENUM_DEGREE:
        raise BudgetExceeded(f"S_{n} enumeration exceeds budget (n <= {MAX_ENUM_DEGREE})")
    if not 0 <= i <= n - 1:
        raise ValueError(f"transposition count {i} outside [0, {n - 1}]")
    count = _transposition_histogram(n)[i]
    assert count <= comb(n, 2) ** i
    return count


# ---------------------------------------------------------------------------
# parity swappers
# ---------------------------------------------------------------------------

def parity_swappers(t: int) -> list[Permutation]:
    """All beta in S_{2t} sending every odd 1-based label to an even one
    and vice versa; there are exactly (t!)^2 of them.

    Construction is direct: a bijection odd->even crossed with a
    bijection even->odd, enumerated in lexicographic order.
    """
    if 2 * t > MAX_SWAPPER_DEGREE:
        raise BudgetExceeded(f"parity swappers need 2t <= {MAX_SWAPPER_DEGREE}")
    if t < 1:
        raise ValueError("t must be >= 1")
    out = []
    for f in itertools.permutations(range(t)):
        for g in itertools.permutations(range(t)):
            images = [0] * (2 * t)
            for a in range(t):
                images[2 * a] = 2 * f[a] + 1      # odd label 2a+1 -> even label
                images[2 * a + 1] = 2 * g[a]      # even label 2a+2 -> odd label
            out.append(Permutation(images))
    assert len(out) == factorial(t) ** 2
    return out


def parity_swapper_tuples(t: int) -> list[tuple[int, ...]]:
    return [b.images for b in parity_swappers(t)]


# ---------------------------------------------------------------------------
# lemma verification
# ---------------------------------------------------------------------------

def verify_fixed_point_lemma(n: int) -> dict:
    """Exhaustively check |Fix(sigma)| >= 2|C(sigma)| - n over S_n."""
    if n > MAX_LEMMA_DEGREE:
        raise BudgetExceeded(f"fixed-point lemma check capped at n <= {MAX_LEMMA_DEGREE}")
    counterexamples = []
    checked = 0
    for images in iter_tuples(n):
        checked += 1
        fixed = sum(1 for i in range(n) if images[i] == i)
        if fixed < 2 * num_cycles(images) - n:
            counterexamples.append([p + 1 for p in images])
    return {
        "lemma_name": "fixed_points_lower_bound",
        "n_or_t": n,
        "checked_count": checked,
        "counterexamples": counterexamples,
    }


def verify_cycle_bound_corollary(t: int) -> dict:
    """Exhaustively check |C(alpha)| + |C(beta alpha^-1)| <= 3t over
    S_{2t} x B_{2t}."""
    if 2 * t > MAX_COROLLARY_2T:
        raise BudgetExceeded(f"cycle-bound corollary check capped at 2t <= {MAX_COROLLARY_2T}")
    swappers = parity_swapper_tuples(t)
    counterexamples = []
    checked = 0
    for alpha in iter_tuples(2 * t):
        alpha_inv = invert(alpha)
        c_alpha = num_cycles(alpha)
        for beta in swappers:
            checked += 1
            if c_alpha + num_cycles(compose(beta, alpha_inv)) > 3 * t:
                counterexamples.append(
                    {"alpha": [p + 1 for p in alpha], "beta": [p + 1 for p in beta]}
                )
    return {
        "lemma_name": "cycle_count_corollary",
        "n_or_t": t,
        "checked_count": checked,
        "counterexamples": counterexamples,
    }


def verify_lemmas(n_max: int, t_max: int = MAX_COROLLARY_2T // 2) -> list[dict]:
    """Run both exhaustive checks for all n <= n_max and t <= t_max.

    Returns one report record per (lemma, size); expected zero
    counterexamples everywhere.
    """
    reports = []
    for n in range(1, n_max + 1):
        reports.append(verify_fixed_point_lemma(n))
    for t in range(1, t_max + 1):
        reports.append(verify_cycle_bound_corollary(t))
    return reports
