"""Generalized Pauli operators in prime dimension q and their tensor words.

Conventions (fixed once, used everywhere):
  * omega = exp(2*pi*i/q);
  * shift:  X^a = sum_v |v+a><v|;  clock:  Z^b = sum_v omega^{b v} |v><v|;
  * within one register the word is X^a Z^b, i.e. the clock acts first;
  * global phases are dropped from labels (every downstream quantity is a
    squared overlap, so they never matter);
  * in a tensor word the register-1 factor is the most significant
    kron digit.

With these choices X^a Z^b = omega^{-ab} Z^b X^a; the dense-matrix check
`twisted_commutator_check` measures the scalar rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from .errors import NonScalarMismatch, OutOfRange
from .field import is_prime
from .linalg import max_abs

MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class PauliLabel:
    """Tensor word prod_i X^{x_i} Z^{z_i} on m registers of dimension q."""

    q: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"register dimension {self.q} must be prime")
        if len(self.x) != len(self.z):
            raise ValueError("exponent vectors must have equal length")
        object.__setattr__(self, "x", tuple(v % self.q for v in self.x))
        object.__setattr__(self, "z", tuple(v % self.q for v in self.z))

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def to_json(self) -> dict:
        return {"q": self.q, "m": self.m, "x": list(self.x), "z": list(self.z)}

    @classmethod
    def from_json(cls, obj: dict) -> "PauliLabel":
        label = cls(q=int(obj["q"]), x=tuple(obj["x"]), z=tuple(obj["z"]))
        if "m" in obj and int(obj["m"]) != label.m:
            raise ValueError("label field m disagrees with exponent length")
        return label

    def compact(self) -> str:
        """Compact text form `pauli:q:x-digits:z-digits` (q <= 7 registers)."""
        xs = "".join(str(v) for v in self.x)
        zs = "".join(str(v) for v in self.z)
        return f"pauli:{self.q}:{xs}:{zs}"

    @classmethod
    def from_compact(cls, text: str) -> "PauliLabel":
        parts = text.split(":")
        if len(parts) != 4 or parts[0] != "pauli":
            raise ValueError(f"bad pauli label {text!r}")
        q = int(parts[1])
        return cls(q=q, x=tuple(int(c) for c in parts[2]),
                   z=tuple(int(c) for c in parts[3]))


def omega(q: int) -> complex:
    return np.exp(2j * np.pi / q)


def single_pauli(q: int, a: int, b: int) -> np.ndarray:
    """Dense q x q matrix of X^a Z^b."""
    a %= q
    b %= q
    w = omega(q)
    m = np.zeros((q, q), dtype=np.complex128)
    for v in range(q):
        m[(v + a) % q, v] = w ** (b * v)
    return m


def pauli_matrix(label: PauliLabel) -> np.ndarray:
    """Dense q^m x q^m unitary of the tensor word (register 1 leftmost)."""
    dim = label.q ** label.m
    if dim > MAX_DENSE_DIM:
        raise OutOfRange(f"dense dimension {dim} exceeds {MAX_DENSE_DIM}")
    out = np.array([[1.0 + 0j]])
    for a, b in zip(label.x, label.z):
        out = np.kron(out, single_pauli(label.q, a, b))
    return out


def pauli_trace(label: PauliLabel) -> complex:
    """q^m for the identity word, 0 otherwise.

    Per register: the trace of X^a Z^b vanishes unless a = 0 (no diagonal
    support) and then equals the geometric sum over omega^{b v}, which is
    0 unless b = 0 too.  Never touches the dense matrix.
    """
    return complex(label.q ** label.m) if label.is_identity else 0j


def twisted_commutator_check(a: int, b: int, q: int) -> complex:
    """Scalar lambda with X^a Z^b = lambda * Z^b X^a, measured from dense
    matrices.  Raises NonScalarMismatch if the two products are not
    proportional (which would signal an implementation bug); the expected
    value is omega^{-ab}.
    """
    if q > MAX_DENSE_DIM:
        raise OutOfRange(f"dimension {q} exceeds {MAX_DENSE_DIM}")
    xz = single_pauli(q, a, 0) @ single_pauli(q, 0, b)
    zx = single_pauli(q, 0, b) @ single_pauli(q, a, 0)
    flat = np.argmax(np.abs(zx))
    ref = zx.flat[flat]
    lam = complex(xz.flat[flat] / ref)
    if max_abs(xz - lam * zx) > 1e-10:
        raise NonScalarMismatch("X^a Z^b and Z^b X^a are not proportional")
    return lam


def random_nonidentity_labels(q: int, m: int, count: int, rng: Generator) -> list[PauliLabel]:
    """`count` distinct non-identity labels on m registers, drawn without
    replacement from the 2m-digit exponent space."""
    space = q ** (2 * m)
    if count > space - 1:
        raise OutOfRange(f"only {space - 1} non-identity words exist")
    chosen: list[PauliLabel] = []
    seen = set()
    while len(chosen) < count:
        digits = rng.integers(0, q, size=2 * m)
        key = tuple(int(d) for d in digits)
        if key in seen or not any(key):
            continue
        seen.add(key)
        chosen.append(PauliLabel(q=q, x=key[:m], z=key[m:]))
    return chosen
