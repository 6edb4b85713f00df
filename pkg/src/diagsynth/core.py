"""Shared value types, index/bit conventions and the U(N) -> U(2^n) padding.

Conventions used across the package:

* qubit 1 is the most significant tensor factor, so ``bit_of(x, 1, n)`` is the
  top bit of the basis index ``x``;
* a ``Circuit`` stores gates in application order (the first gate acts first),
  which is the reverse of reading a matrix product left to right;
* angles are unwrapped radians internally and only wrapped on output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np


class DiagSynthError(ValueError):
    """Base error for invalid inputs."""


class DegenerateSequenceError(DiagSynthError):
    """A control sequence whose sign matrix cannot be inverted by transposition."""


def wrap_angle(theta):
    """Map angles into (-pi, pi]. Works on scalars and arrays."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), 2 * np.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def angular_distance(a, b):
    """Distance between angles on the circle, in [0, pi]."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), 2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


@dataclass(frozen=True)
class PhaseVector:
    """Phases of diag(e^{i a_1}, ..., e^{i a_{2^n}})."""

    n: int
    phases: tuple[float, ...]

    def __post_init__(self):
        if self.n < 0:
            raise DiagSynthError(f"qubit count must be non-negative, got {self.n}")
        phases = tuple(float(p) for p in self.phases)
        if len(phases) != 2**self.n:
            raise DiagSynthError(
                f"expected {2**self.n} phases for n={self.n}, got {len(phases)}"
            )
        if not all(math.isfinite(p) for p in phases):
            raise DiagSynthError("phases must be finite")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_array(cls, phases) -> "PhaseVector":
        phases = [float(p) for p in phases]
        n = len(phases).bit_length() - 1
        if len(phases) == 0 or 2**n != len(phases):
            raise DiagSynthError(
                f"phase count {len(phases)} is not a power of two; use pad_phases"
            )
        return cls(n, tuple(phases))

    def as_array(self) -> np.ndarray:
        return np.array(self.phases, dtype=float)

    @property
    def odd(self) -> np.ndarray:
        """a_1, a_3, ... (basis states whose last qubit is 0)."""
        return self.as_array()[0::2]

    @property
    def even(self) -> np.ndarray:
        """a_2, a_4, ... (basis states whose last qubit is 1)."""
        return self.as_array()[1::2]


@dataclass(frozen=True)
class BitVector:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DiagSynthError(f"bits must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    @property
    def n_bits(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class Rotation:
    """diag(e^{i angle}, e^{-i angle}) on qubit ``target``."""

    target: int
    angle: float


@dataclass(frozen=True)
class ControlFlip:
    """Apply X = [[0, e^{i phi}], [e^{-i phi}, 0]] to ``target`` when ``control`` is 1.

    ``flip_phase=0`` is the ordinary CNOT.
    """

    control: int
    target: int
    flip_phase: float = 0.0


@dataclass(frozen=True)
class GlobalPhase:
    angle: float


Gate = Union[Rotation, ControlFlip, GlobalPhase]


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 0:
            raise DiagSynthError(f"qubit count must be non-negative, got {self.n}")
        gates = tuple(self.gates)
        for g in gates:
            check_gate(g, self.n)
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def check_gate(g: Gate, n: int) -> None:
    if isinstance(g, Rotation):
        if not 1 <= g.target <= n:
            raise DiagSynthError(f"rotation target {g.target} outside 1..{n}")
    elif isinstance(g, ControlFlip):
        if not 1 <= g.control < g.target <= n:
            raise DiagSynthError(
                f"control flip needs 1 <= control < target <= {n}, "
                f"got control={g.control} target={g.target}"
            )
    elif not isinstance(g, GlobalPhase):
        raise DiagSynthError(f"unknown gate {g!r}")


def pad_phases(raw: Sequence[float]) -> PhaseVector:
    """Embed N phases into the smallest 2^n >= N (n >= 1) with an identity block."""
    raw = [float(p) for p in raw]
    if not raw:
        raise DiagSynthError("empty phase list")
    n = max(1, (len(raw) - 1).bit_length())
    return PhaseVector(n, tuple(raw) + (0.0,) * (2**n - len(raw)))


def index_to_rho(j: int, n: int) -> BitVector:
    """Bits of a block index, most significant first (length n - 1)."""
    if n < 1:
        raise DiagSynthError(f"n must be >= 1, got {n}")
    if not 0 <= j < 2 ** (n - 1):
        raise DiagSynthError(f"block index {j} outside [0, {2 ** (n - 1)})")
    return BitVector(tuple((j >> (n - 1 - i)) & 1 for i in range(1, n)))


def rho_to_index(rho) -> int:
    bits = rho.bits if isinstance(rho, BitVector) else tuple(rho)
    j = 0
    for b in bits:
        j = (j << 1) | int(b)
    return j


def bit_of(x: int, m: int, n: int) -> int:
    if not 1 <= m <= n:
        raise DiagSynthError(f"qubit index {m} outside 1..{n}")
    if not 0 <= x < 2**n:
        raise DiagSynthError(f"basis index {x} outside [0, {2**n})")
    return (x >> (n - m)) & 1
