import itertools

import numpy as np
import pytest

from qtamper.errors import NotNormalized, NotUnitary, OutOfRange
from qtamper.haar import child_generator, sample_haar_unitary
from qtamper.moments import (MomentSpec, exact_moment, first_moment_js,
                             first_moment_ss, mc_moment)
from qtamper.pauli import PauliLabel, pauli_matrix
from qtamper.perm import iter_tuples


def _pauli(n_qubits, x, z):
    return pauli_matrix(PauliLabel(q=2, x=x, z=z))


def test_first_moment_closed_forms_identity():
    eye = np.eye(8, dtype=complex)
    assert first_moment_js(eye) == 0.0
    assert first_moment_ss(eye) == 1.0


def test_first_moment_closed_forms_pauli():
    u = _pauli(2, (1, 0), (0, 1))
    assert abs(first_moment_js(u) - 4 / 15) < 1e-15
    assert abs(first_moment_ss(u) - 1 / 5) < 1e-15


def test_first_moment_js_upper_bound():
    for seed in range(6):
        u = sample_haar_unitary(8, seed)
        assert first_moment_js(u) <= 2 / 8


def test_first_moment_ss_trace_form():
    # |Tr U| = phi N gives phi^2 N/(N+1) + 1/(N+1) <= phi^2 + 1/N
    n = 16
    for phi in (0.0, 0.25, 0.5, 1.0):
        theta = np.arccos(phi)
        # conjugate phase pairs: Tr = N cos(theta) = phi N
        u = np.diag(np.exp(1j * theta * np.tile([1, -1], n // 2)))
        assert abs(abs(np.trace(u)) - phi * n) < 1e-12
        value = first_moment_ss(u)
        expected = phi ** 2 * n / (n + 1) + 1 / (n + 1)
        assert abs(value - expected) < 1e-12
        assert value <= phi ** 2 + 1 / n + 1e-12


def test_first_moment_ss_monotone_in_trace():
    n = 8
    rng = child_generator(23, 0)
    phases = rng.random(n) * 2 * np.pi
    values = []
    for scale in (1.0, 0.8, 0.5, 0.2, 0.0):
        u = np.diag(np.exp(1j * scale * phases))
        values.append((abs(np.trace(u)) ** 2, first_moment_ss(u)))
    values.sort()
    moments = [m for _, m in values]
    assert moments == sorted(moments)


def test_not_unitary_rejected():
    with pytest.raises(NotUnitary):
        first_moment_js(np.eye(4) * 1.01)
    with pytest.raises(NotUnitary):
        MomentSpec("js", 1, np.eye(4) * 1.01)


def test_spec_validation():
    eye = np.eye(8, dtype=complex)
    with pytest.raises(ValueError):
        MomentSpec("xx", 1, eye)
    with pytest.raises(OutOfRange):
        MomentSpec("js", 4, eye)
    with pytest.raises(OutOfRange):
        MomentSpec("js", 3, np.eye(4, dtype=complex))  # N < 2t
    with pytest.raises(ValueError):
        MomentSpec("m", 1, eye)  # amplitudes missing
    with pytest.raises(NotNormalized):
        MomentSpec("m", 1, eye, K=2, message_amplitudes=np.array([1.0, 1.0]))
    with pytest.raises(OutOfRange):
        MomentSpec("m", 1, eye, K=2, message_amplitudes=np.array([1.0, 0.0]),
                   target_index=5)
    with pytest.raises(OutOfRange):
        MomentSpec("js", 1, eye, K=1)


def test_exact_matches_closed_forms_battery():
    # 20-unitary battery: t = 1 specialization to 1e-12 relative
    count = 0
    for n in (4, 8, 16):
        for seed in range(7):
            u = sample_haar_unitary(n, 1000 + seed)
            js = exact_moment(MomentSpec("js", 1, u))
            ss = exact_moment(MomentSpec("ss", 1, u))
            assert abs(js - first_moment_js(u)) <= 1e-12 * max(abs(js), 1e-300)
            assert abs(ss - first_moment_ss(u)) <= 1e-12 * max(abs(ss), 1e-300)
            count += 1
    assert count >= 20


def test_quantum_message_weights_against_brute_force():
    """The per-beta amplitude weight must equal the brute-force execution
    of the delta constraints over the amplitude indices."""
    k = 3
    rng = child_generator(29, 0)
    amps = rng.normal(size=k) + 1j * rng.normal(size=k)
    amps /= np.linalg.norm(amps)
    m = 1
    for t in (1, 2):
        p = 2 * t
        for beta in iter_tuples(p):
            brute = 0j
            for i_vec in itertools.product(range(k), repeat=t):
                for j_vec in itertools.product(range(k), repeat=t):
                    cols = [0] * p       # unconjugated columns
                    cols2 = [0] * p      # conjugated columns
                    for a in range(t):
                        cols[2 * a] = i_vec[a]
                        cols[2 * a + 1] = m
                        cols2[2 * a] = m
                        cols2[2 * a + 1] = j_vec[a]
                    if all(cols[pos] == cols2[beta[pos]] for pos in range(p)):
                        term = np.prod([amps[i] for i in i_vec]) if t else 1
                        term = term * np.prod([np.conj(amps[j]) for j in j_vec])
                        brute += term
            ell = sum(1 for pos in range(0, p, 2) if beta[pos] % 2 == 0)
            expected = abs(amps[m]) ** (2 * ell)
            assert abs(brute - expected) < 1e-12, (t, beta)


def test_quantum_message_reduces_to_classical_patterns():
    u = sample_haar_unitary(8, 55)
    basis = np.array([1.0, 0.0], dtype=complex)
    for t in (1, 2):
        same = exact_moment(MomentSpec("m", t, u, K=2, message_amplitudes=basis,
                                       target_index=0))
        assert same == exact_moment(MomentSpec("ss", t, u))
        other = exact_moment(MomentSpec("m", t, u, K=2, message_amplitudes=basis,
                                        target_index=1))
        assert other == exact_moment(MomentSpec("js", t, u))


def test_quantum_message_first_moment_formula():
    u = sample_haar_unitary(8, 56)
    n = 8
    amps = np.array([0.6, 0.8j])
    tr2 = abs(np.trace(u)) ** 2
    for idx in (0, 1):
        got = exact_moment(MomentSpec("m", 1, u, K=2, message_amplitudes=amps,
                                      target_index=idx))
        am2 = abs(amps[idx]) ** 2
        want = (tr2 * (n * am2 - 1) + n * n - n * am2) / (n * (n * n - 1))
        assert abs(got - want) < 1e-13


def test_mc_identity_edge_cases():
    eye = np.eye(8, dtype=complex)
    est, se = mc_moment(MomentSpec("js", 1, eye), 2000, seed=1)
    assert est <= 1e-25 and se <= 1e-25
    est, se = mc_moment(MomentSpec("ss", 1, eye), 2000, seed=1)
    assert abs(est - 1.0) <= 1e-12 and se <= 1e-12


def test_mc_matches_exact_all_patterns():
    u = _pauli(3, (1, 0, 1), (0, 1, 0))
    amps = np.full(2, 1 / np.sqrt(2), dtype=complex)
    for t in (1, 2):
        for pattern in ("js", "ss", "m"):
            kwargs = {}
            if pattern == "m":
                kwargs = {"message_amplitudes": amps, "target_index": 0}
            spec = MomentSpec(pattern, t, u, K=2, **kwargs)
            exact = exact_moment(spec)
            est, se = mc_moment(spec, 100_000, seed=40 + t)
            assert abs(est - exact) <= 4 * se, (pattern, t, est, exact, se)


def test_mc_reproducible_and_jobs_independent():
    u = sample_haar_unitary(8, 77)
    spec = MomentSpec("ss", 2, u)
    a = mc_moment(spec, 5000, seed=3)
    b = mc_moment(spec, 5000, seed=3)
    c = mc_moment(spec, 5000, seed=3, jobs=4)
    assert a == b == c
    with pytest.raises(OutOfRange):
        mc_moment(spec, 999, seed=3)


def test_moment_growth_bound_zero_trace():
    # finite-sweep sanity of the O(t^4/N)^t scaling with constant 16
    n = 64
    rng = child_generator(31, 0)
    for _ in range(3):
        digits = rng.integers(0, 2, size=12)
        if not digits.any():
            continue
        u = _pauli(6, tuple(int(v) for v in digits[:6]), tuple(int(v) for v in digits[6:]))
        for t in (1, 2, 3):
            value = exact_moment(MomentSpec("js", t, u))
            assert value <= (16 * t ** 4 / n) ** t
