"""Exact unitary Weingarten function over the rationals, plus the general
Haar moment formula for products of matrix entries.

The defining linear system is Gram-type: with G[sigma, tau] = N^{|C(sigma
tau^-1)|} over S_p, the Weingarten function is the identity row of G^-1.
Because G commutes with conjugation, its inverse row is a class function;
we therefore solve the class-collapsed system exactly (fraction Gaussian
elimination on an (#cycle types)^2 matrix) and then verify the candidate
against *every one of the p! permutation-level equations* exactly.  That
verification both certifies the solution and doubles as the
class-function check: a full p! x p! rational inversion in pure Python
would blow the runtime budget without adding information.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import OutOfRange, SingularGram
from .perm import compose, cycle_type_of, invert, iter_tuples, num_cycles

CycleType = tuple[int, ...]

TABLE_ORDER_CAP = 6        # 720 x 720 permutation-level system at most
HAAR_MOMENT_CAP = 5


@lru_cache(maxsize=None)
def _group_data(p: int):
    """Permutations of S_p with type bookkeeping.

    Returns (perms, type_index_per_perm, types, class_sizes) where types
    are sorted-descending cycle partitions in first-seen order.
    """
    perms = tuple(iter_tuples(p))
    types: list[CycleType] = []
    type_lookup: dict[CycleType, int] = {}
    type_index = []
    class_sizes: list[int] = []
    for images in perms:
        ct = cycle_type_of(images)
        if ct not in type_lookup:
            type_lookup[ct] = len(types)
            types.append(ct)
            class_sizes.append(0)
        ti = type_lookup[ct]
        type_index.append(ti)
        class_sizes[ti] += 1
    return perms, tuple(type_index), tuple(types), tuple(class_sizes)


def _solve_fraction_system(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with partial (first-nonzero) pivoting."""
    n = len(m)
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularGram("collapsed Gram system is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * p for v, p in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


class WeingartenTable:
    """Exact Weingarten values for all cycle types of S_p at dimension N."""

    __slots__ = ("p", "N", "values", "class_sizes")

    def __init__(self, p: int, N: int, values: dict[CycleType, Fraction],
                 class_sizes: dict[CycleType, int]):
        self.p = p
        self.N = N
        self.values = values
        self.class_sizes = class_sizes

    def __getitem__(self, cycle_type: CycleType) -> Fraction:
        return self.values[tuple(sorted(cycle_type, reverse=True))]

    def of_permutation(self, images: Sequence[int]) -> Fraction:
        return self.values[cycle_type_of(images)]

    def items(self):
        return self.values.items()


@lru_cache(maxsize=None)
def wg_table(p: int, N: int) -> WeingartenTable:
    """Build the exact table for S_p at dimension N (1 <= p <= 6, N >= p).

    The candidate from the collapsed solve is verified against the full
    permutation-level system: for every sigma in S_p,
        sum_tau N^{|C(sigma tau^-1)|} Wg(tau) = [sigma == e],
    exactly over the rationals.
    """
    if not 1 <= p <= TABLE_ORDER_CAP:
        raise OutOfRange(f"moment order p={p} outside [1, {TABLE_ORDER_CAP}]")
    if N < p:
        raise SingularGram(f"need N >= p for an invertible Gram system (N={N}, p={p})")

    perms, type_index, types, class_sizes = _group_data(p)
    n_perms = len(perms)
    n_types = len(types)
    n_pow = [N ** c for c in range(p + 1)]

    # One pass over S_p x S_p: counts[s][j][c] = #{tau in class j with
    # |C(sigma_s tau^-1)| = c}.  Class-representative rows feed the solve,
    # all rows feed the verification.
    counts = [[[0] * (p + 1) for _ in range(n_types)] for _ in range(n_perms)]
    for t_i, tau in enumerate(perms):
        tau_inv = invert(tau)
        j = type_index[t_i]
        for s_i, sigma in enumerate(perms):
            counts[s_i][j][num_cycles(compose(sigma, tau_inv))] += 1

    rep_of_type = [None] * n_types
    for s_i in range(n_perms):
        if rep_of_type[type_index[s_i]] is None:
            rep_of_type[type_index[s_i]] = s_i

    identity_type = type_index[0]  # perms[0] is the identity
    matrix = []
    rhs = []
    for ti in range(n_types):
        s_i = rep_of_type[ti]
        matrix.append([
            Fraction(sum(counts[s_i][j][c] * n_pow[c] for c in range(p + 1)))
            for j in range(n_types)
        ])
        rhs.append(Fraction(1 if ti == identity_type else 0))
    solution = _solve_fraction_system(matrix, rhs)

    for s_i in range(n_perms):
        total = Fraction(0)
        for j in range(n_types):
            row = counts[s_i][j]
            total += solution[j] * sum(row[c] * n_pow[c] for c in range(p + 1))
        expected = 1 if type_index[s_i] == identity_type else 0
        if total != expected:
            raise SingularGram(
                f"class-function candidate fails permutation-level equation {s_i}"
            )

    values = {types[j]: solution[j] for j in range(n_types)}
    sizes = {types[j]: class_sizes[j] for j in range(n_types)}
    return WeingartenTable(p, N, values, sizes)


def wg_value(cycle_type: CycleType, N: int) -> Fraction:
    p = sum(cycle_type)
    return wg_table(p, N)[cycle_type]


def wg_sum(t: int, N: int) -> Fraction:
    """Sum of Wg over all of S_t (counted with class sizes)."""
    table = wg_table(t, N)
    return sum(
        (table.class_sizes[ct] * v for ct, v in table.items()), Fraction(0)
    )


def wg_abs_sum(t: int, N: int) -> Fraction:
    """Sum of |Wg| over all of S_t."""
    table = wg_table(t, N)
    return sum(
        (table.class_sizes[ct] * abs(v) for ct, v in table.items()), Fraction(0)
    )


def haar_moment(i: Sequence[int], i2: Sequence[int], j: Sequence[int],
                j2: Sequence[int], N: int) -> Fraction:
    """Exact Haar average of U_{i1 j1} ... U_{ip jp} conj(U_{i2_1 j2_1}) ...

    Indices are 0-based rows/columns in [0, N).  Evaluates the delta-sum
    over S_p x S_p directly; returns 0 when no permutation pair matches
    the index pattern.
    """
    p = len(i)
    if not (len(i2) == len(j) == len(j2) == p):
        raise ValueError("index tuples must share one length p")
    if p == 0:
        return Fraction(1)
    if p > HAAR_MOMENT_CAP:
        raise OutOfRange(f"haar_moment capped at p <= {HAAR_MOMENT_CAP}")
    for idx in (*i, *i2, *j, *j2):
        if not 0 <= idx < N:
            raise OutOfRange(f"index {idx} outside [0, {N})")

    table = wg_table(p, N)
    perms = list(iter_tuples(p))
    row_sigmas = [s for s in perms if all(i[a] == i2[s[a]] for a in range(p))]
    col_taus = [t for t in perms if all(j[a] == j2[t[a]] for a in range(p))]
    total = Fraction(0)
    for sigma in row_sigmas:
        sigma_inv = invert(sigma)
        for tau in col_taus:
            total += table.of_permutation(compose(tau, sigma_inv))
    return total
