"""Exact evaluation of circuits built from rotations, controlled flips and global phases.

Every such gate is a monomial matrix (one unit-modulus entry per row), so a
product is tracked as an integer permutation plus one phase per row. Row
``x`` of the operator has its entry in column ``perm[x]`` with value
``exp(1j * (phase[x] + global_phase))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Circuit,
    ControlFlip,
    DiagSynthError,
    GlobalPhase,
    PhaseVector,
    Rotation,
    angular_distance,
    check_gate,
)

DENSE_MAX_QUBITS = 8
ORACLE_TOL = 1e-12
BLOCK_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MonomialOperator:
    n: int
    perm: np.ndarray
    phase: np.ndarray
    global_phase: float = 0.0

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.int64)
        phase = np.asarray(self.phase, dtype=float)
        size = 2**self.n
        if perm.shape != (size,) or phase.shape != (size,):
            raise DiagSynthError(f"monomial operator on {self.n} qubits needs {size} rows")
        if not np.array_equal(np.sort(perm), np.arange(size)):
            raise DiagSynthError("perm is not a bijection")
        object.__setattr__(self, "perm", _frozen(perm.copy()))
        object.__setattr__(self, "phase", _frozen(phase.copy()))
        object.__setattr__(self, "global_phase", float(self.global_phase))

    @classmethod
    def identity(cls, n: int) -> "MonomialOperator":
        return cls(n, np.arange(2**n), np.zeros(2**n))

    @property
    def is_diagonal(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(2**self.n)))

    def total_phase(self) -> np.ndarray:
        return self.phase + self.global_phase

    def inverse(self) -> "MonomialOperator":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return MonomialOperator(self.n, inv, -self.phase[inv], -self.global_phase)

    def to_matrix(self) -> np.ndarray:
        size = 2**self.n
        m = np.zeros((size, size), dtype=complex)
        m[np.arange(size), self.perm] = np.exp(1j * self.total_phase())
        return m


def compose(a: MonomialOperator, b: MonomialOperator) -> MonomialOperator:
    """Matrix product a @ b, i.e. b acts first."""
    if a.n != b.n:
        raise DiagSynthError(f"qubit count mismatch: {a.n} vs {b.n}")
    return MonomialOperator(
        a.n, b.perm[a.perm], a.phase + b.phase[a.perm], a.global_phase + b.global_phase
    )


def _qubit_bits(n: int, m: int) -> np.ndarray:
    return (np.arange(2**n) >> (n - m)) & 1


def gate_to_monomial(g, n: int) -> MonomialOperator:
    check_gate(g, n)
    size = 2**n
    if isinstance(g, GlobalPhase):
        return MonomialOperator(n, np.arange(size), np.zeros(size), g.angle)
    if isinstance(g, Rotation):
        return MonomialOperator(n, np.arange(size), g.angle * (1 - 2 * _qubit_bits(n, g.target)))
    ctrl = _qubit_bits(n, g.control)
    tgt = _qubit_bits(n, g.target)
    perm = np.arange(size) ^ (ctrl << (n - g.target))
    phase = ctrl * g.flip_phase * (1 - 2 * tgt)
    return MonomialOperator(n, perm, phase)


class _Accumulator:
    """Mutable scratch state for folding many gates without re-validating each step."""

    def __init__(self, n: int):
        self.n = n
        self.perm = np.arange(2**n)
        self.phase = np.zeros(2**n)
        self.global_phase = 0.0
        self._bits = {}

    def bits(self, m):
        if m not in self._bits:
            self._bits[m] = _qubit_bits(self.n, m)
        return self._bits[m]

    def apply(self, g) -> None:
        # left-multiply the running product by g
        if isinstance(g, GlobalPhase):
            self.global_phase += g.angle
        elif isinstance(g, Rotation):
            self.phase += g.angle * (1 - 2 * self.bits(g.target))
        else:
            ctrl = self.bits(g.control)
            src = np.arange(2**self.n) ^ (ctrl << (self.n - g.target))
            self.perm = self.perm[src]
            self.phase = self.phase[src]
            if g.flip_phase:
                self.phase += ctrl * g.flip_phase * (1 - 2 * self.bits(g.target))


def evaluate(c: Circuit) -> MonomialOperator:
    """Product of all gates, first gate acting first."""
    acc = _Accumulator(c.n)
    for g in c.gates:
        acc.apply(g)
    return MonomialOperator(c.n, acc.perm, acc.phase, acc.global_phase)


def evaluate_by_compose(c: Circuit) -> MonomialOperator:
    """Reference fold through ``compose``; slower than ``evaluate``."""
    out = MonomialOperator.identity(c.n)
    for g in c.gates:
        out = compose(gate_to_monomial(g, c.n), out)
    return out


def tail_block_angles(m: MonomialOperator, tol: float = BLOCK_TOL) -> np.ndarray:
    """Read gamma_j off a block-diagonal tail made of D_1(gamma_j) blocks."""
    if not m.is_diagonal:
        raise DiagSynthError("operator is not diagonal")
    total = m.total_phase()
    upper, lower = total[0::2], total[1::2]
    if np.any(angular_distance(upper, -lower) > tol):
        raise DiagSynthError("not special-unitary blocks")
    return upper.copy()


def max_phase_error(m: MonomialOperator, target: PhaseVector) -> float:
    if m.n != target.n:
        raise DiagSynthError(f"qubit count mismatch: {m.n} vs {target.n}")
    if not m.is_diagonal:
        raise DiagSynthError("operator is not diagonal")
    return float(np.max(angular_distance(m.total_phase(), target.as_array())))


def gate_matrix(g, n: int) -> np.ndarray:
    """Dense matrix of one gate, assembled from Kronecker products."""
    check_gate(g, n)
    eye = np.eye(2, dtype=complex)

    def kron_all(factors):
        out = np.ones((1, 1), dtype=complex)
        for f in factors:
            out = np.kron(out, f)
        return out

    if isinstance(g, GlobalPhase):
        return np.exp(1j * g.angle) * np.eye(2**n, dtype=complex)
    if isinstance(g, Rotation):
        d1 = np.diag([np.exp(1j * g.angle), np.exp(-1j * g.angle)])
        return kron_all([d1 if q == g.target else eye for q in range(1, n + 1)])
    pi0 = np.array([[1, 0], [0, 0]], dtype=complex)
    pi1 = np.array([[0, 0], [0, 1]], dtype=complex)
    x = np.array([[0, np.exp(1j * g.flip_phase)], [np.exp(-1j * g.flip_phase), 0]])
    off = kron_all([pi0 if q == g.control else eye for q in range(1, n + 1)])
    on = kron_all(
        [pi1 if q == g.control else x if q == g.target else eye for q in range(1, n + 1)]
    )
    return off + on


def dense_matrix(c: Circuit) -> np.ndarray:
    if c.n > DENSE_MAX_QUBITS:
        raise DiagSynthError(f"dense oracle capped at {DENSE_MAX_QUBITS} qubits")
    out = np.eye(2**c.n, dtype=complex)
    for g in c.gates:
        out = gate_matrix(g, c.n) @ out
    return out
