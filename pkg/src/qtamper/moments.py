"""Moments of the decoder random variables over Haar-random encodings.

Three patterns are supported, all of the form E[X^t] with t <= 3:

  * "js"  -- X = |<psi_j| U |psi_s>|^2 for two distinct codewords (the
    off-diagonal, wrong-decode variable);
  * "ss"  -- X = |<psi_s| U |psi_s>|^2 (the diagonal, same-decode
    variable);
  * "m"   -- X = <psi_m| U Enc(|psi><psi|) U^dag |psi_m> for a quantum
    message |psi> = sum_i a_i |i> and POVM row m (the subspace-decoder
    variable).

The exact evaluator enumerates pairs (alpha, beta) in S_{2t}^2: alpha
contributes a product over its cycles of Tr(U^{odd(c)-even(c)}) (the
alternating U / U^dag factors along a cycle are powers of one unitary,
so only the signed position count matters, making the in-cycle ordering
immaterial); beta contributes a delta weight -- the parity-swapper
indicator for "js", the constant 1 for "ss", and |a_m|^{2 l(beta)} for
"m", where l(beta) counts odd positions mapped to odd positions (the
weight obtained by executing the delta constraints over the amplitude
indices).  Each pair is weighted by the exact Weingarten value of
beta alpha^-1.

The Monte Carlo estimator is the independent route: sample encoding
isometries, evaluate the realized X^t, and average.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import sqrt
from typing import Optional

import numpy as np

from .errors import ConsistencyError, NotNormalized, OutOfRange
from .haar import child_generator, sample_isometry_stack
from .linalg import require_unitary
from .perm import cycle_type_of, cycles_of, invert, iter_tuples, parity_swapper_tuples
from .weingarten import wg_table

PATTERN_OFF_DIAGONAL = "js"
PATTERN_DIAGONAL = "ss"
PATTERN_QUANTUM_MESSAGE = "m"
PATTERNS = (PATTERN_OFF_DIAGONAL, PATTERN_DIAGONAL, PATTERN_QUANTUM_MESSAGE)

MOMENT_ORDER_CAP = 3
MIN_TRIALS = 1000
MC_CHUNK = 4096
IMAG_RESIDUE_TOL = 1e-9


@dataclass
class MomentSpec:
    """What to average: pattern, order t, tampering unitary, and (for the
    quantum-message pattern) the message amplitudes and POVM row."""

    pattern: str
    t: int
    U: np.ndarray
    K: int = 2
    message_amplitudes: Optional[np.ndarray] = None
    target_index: int = 0

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {self.pattern!r}")
        if not 1 <= self.t <= MOMENT_ORDER_CAP:
            raise OutOfRange(f"moment order t={self.t} outside [1, {MOMENT_ORDER_CAP}]")
        self.U = require_unitary(self.U)
        n = self.U.shape[0]
        if n < 2 * self.t:
            raise OutOfRange(f"need N >= 2t (N={n}, t={self.t})")
        if self.pattern == PATTERN_OFF_DIAGONAL and self.K < 2:
            raise OutOfRange("off-diagonal pattern needs K >= 2")
        if not 1 <= self.K < n:
            raise OutOfRange(f"need 1 <= K < N (K={self.K}, N={n})")
        if self.pattern == PATTERN_QUANTUM_MESSAGE:
            if self.message_amplitudes is None:
                raise ValueError("quantum-message pattern needs amplitudes")
            amps = np.asarray(self.message_amplitudes, dtype=np.complex128)
            if amps.shape != (self.K,):
                raise OutOfRange(f"amplitudes must have length K={self.K}")
            if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
                raise NotNormalized("message amplitudes must be normalized")
            if not 0 <= self.target_index < self.K:
                raise OutOfRange("target_index outside [0, K)")
            self.message_amplitudes = amps

    @property
    def N(self) -> int:
        return self.U.shape[0]


def first_moment_js(U: np.ndarray) -> float:
    """E[X_js] = (N^2 - |Tr U|^2) / (N (N^2 - 1)), closed form."""
    U = require_unitary(U)
    n = U.shape[0]
    if n < 2:
        raise OutOfRange("need N >= 2")
    return (n ** 2 - abs(np.trace(U)) ** 2) / (n * (n ** 2 - 1))


def first_moment_ss(U: np.ndarray) -> float:
    """E[X_ss] = (N + |Tr U|^2) / (N (N + 1)), closed form."""
    U = require_unitary(U)
    n = U.shape[0]
    if n < 2:
        raise OutOfRange("need N >= 2")
    return (n + abs(np.trace(U)) ** 2) / (n * (n + 1))


@lru_cache(maxsize=None)
def _pair_tables(p: int):
    """Per-pair cycle-type bookkeeping for S_p x S_p.

    Returns (perms, types, pair_type) with pair_type[a, b] = index of the
    cycle type of beta_b o alpha_a^-1.
    """
    perms = tuple(iter_tuples(p))
    type_lookup: dict[tuple[int, ...], int] = {}
    types: list[tuple[int, ...]] = []

    def type_id(ct):
        if ct not in type_lookup:
            type_lookup[ct] = len(types)
            types.append(ct)
        return type_lookup[ct]

    n = len(perms)
    pair_type = np.empty((n, n), dtype=np.uint8)
    for ai, alpha in enumerate(perms):
        alpha_inv = invert(alpha)
        for bi, beta in enumerate(perms):
            comp = tuple(beta[alpha_inv[i]] for i in range(p))
            pair_type[ai, bi] = type_id(cycle_type_of(comp))
    return perms, tuple(types), pair_type


def _cycle_trace_products(perms, U: np.ndarray, t: int) -> np.ndarray:
    """Tr-product vector over alpha: prod_c Tr(U^{odd(c)-even(c)}).

    Positions are 1-based in the parity convention, so 0-based even
    indices carry a U factor (+1) and odd indices a U^dag factor (-1).
    """
    n = U.shape[0]
    tr_pow = {0: complex(n)}
    power = np.eye(n, dtype=np.complex128)
    for j in range(1, t + 1):
        power = power @ U
        tr = complex(np.trace(power))
        tr_pow[j] = tr
        tr_pow[-j] = tr.conjugate()
    out = np.empty(len(perms), dtype=np.complex128)
    for ai, alpha in enumerate(perms):
        prod = 1.0 + 0j
        for cyc in cycles_of(alpha):
            exponent = sum(1 if i % 2 == 0 else -1 for i in cyc)
            prod *= tr_pow[exponent]
        out[ai] = prod
    return out


def _beta_weights(spec: MomentSpec, perms) -> np.ndarray:
    p = 2 * spec.t
    if spec.pattern == PATTERN_DIAGONAL:
        return np.ones(len(perms))
    if spec.pattern == PATTERN_OFF_DIAGONAL:
        swappers = set(parity_swapper_tuples(spec.t))
        return np.array([1.0 if b in swappers else 0.0 for b in perms])
    # quantum message: weight |a_m|^{2 l(beta)}, l = #(odd 1-based
    # positions fixed to odd ones), i.e. 0-based even -> even.
    a_m2 = abs(spec.message_amplitudes[spec.target_index]) ** 2
    weights = np.empty(len(perms))
    for bi, beta in enumerate(perms):
        ell = sum(1 for i in range(0, p, 2) if beta[i] % 2 == 0)
        weights[bi] = a_m2 ** ell
    return weights


def exact_moment(spec: MomentSpec) -> float:
    """Exact E[X^t] over the Haar measure for the spec's pattern."""
    p = 2 * spec.t
    perms, types, pair_type = _pair_tables(p)
    table = wg_table(p, spec.N)
    wg_float = np.array([float(table[ct]) for ct in types])
    tp = _cycle_trace_products(perms, spec.U, spec.t)
    weights = _beta_weights(spec, perms)
    total = complex(tp @ wg_float[pair_type] @ weights)
    if abs(total.imag) > IMAG_RESIDUE_TOL:
        raise ConsistencyError(f"imaginary residue {total.imag} in exact moment")
    return total.real


def _mc_chunk(spec: MomentSpec, seed: int, chunk_index: int, count: int):
    rng = child_generator(seed, chunk_index)
    stack = sample_isometry_stack(rng, count, spec.N, spec.K)
    if spec.pattern == PATTERN_OFF_DIAGONAL:
        moved = stack[:, :, 0] @ spec.U.T
        amps = np.einsum("tn,tn->t", stack[:, :, 1].conj(), moved)
    elif spec.pattern == PATTERN_DIAGONAL:
        moved = stack[:, :, 0] @ spec.U.T
        amps = np.einsum("tn,tn->t", stack[:, :, 0].conj(), moved)
    else:
        encoded = stack @ spec.message_amplitudes
        moved = encoded @ spec.U.T
        amps = np.einsum("tn,tn->t", stack[:, :, spec.target_index].conj(), moved)
    x = np.abs(amps) ** 2
    y = x ** spec.t
    return float(np.sum(y)), float(np.sum(y * y))


def mc_moment(spec: MomentSpec, trials: int, seed: int, jobs: int = 1):
    """Monte Carlo estimate of E[X^t] with its standard error.

    Trials are split into fixed-size chunks; chunk c draws from the
    child stream (seed, c), so the estimate is independent of the worker
    count and bit-stable for a fixed seed.
    """
    if trials < MIN_TRIALS:
        raise OutOfRange(f"need at least {MIN_TRIALS} trials")
    sizes = [MC_CHUNK] * (trials // MC_CHUNK)
    if trials % MC_CHUNK:
        sizes.append(trials % MC_CHUNK)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(lambda c: _mc_chunk(spec, seed, c, sizes[c]), range(len(sizes)))
            )
    else:
        results = [_mc_chunk(spec, seed, c, sizes[c]) for c in range(len(sizes))]

    total = 0.0
    total_sq = 0.0
    for s, s2 in results:  # fixed chunk order: deterministic float sums
        total += s
        total_sq += s2
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0) * trials / (trials - 1)
    return mean, sqrt(var / trials)
