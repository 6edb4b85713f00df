"""Recursive synthesis of diagonal unitaries.

At level ``k`` the diagonal on qubits ``1..k`` factors as the level ``k-1``
diagonal (qubit ``k`` idle) times a tail: rotations on qubit ``k``
interleaved with flips controlled by lower qubits. The tail is block
diagonal with ``D_1(gamma_j)`` blocks where ``gamma = r @ beta``, so each
level needs one pairwise split of the phases and one inverse sign-matrix
solve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import (
    Circuit,
    ControlFlip,
    DiagSynthError,
    GlobalPhase,
    PhaseVector,
    Rotation,
    wrap_angle,
)
from .rmatrix import apply_r, invert_r
from .sequences import (
    FAMILIES,
    GeneralControlSequence,
    as_general,
    constant_gap_sequence,
    nested_copy_sequence,
    pbt_sequence,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class LevelSplit:
    alpha_bar: np.ndarray
    gamma: np.ndarray

    def recombine(self) -> np.ndarray:
        out = np.empty(2 * len(self.alpha_bar))
        out[0::2] = self.alpha_bar + self.gamma
        out[1::2] = self.alpha_bar - self.gamma
        return out


@dataclass(frozen=True)
class SequencePlan:
    """One control sequence per recursion level k = 2..n."""

    n: int
    levels: Mapping[int, GeneralControlSequence] = field(default_factory=dict)
    family: str = "custom"

    def __post_init__(self):
        levels = {int(k): as_general(s) for k, s in dict(self.levels).items()}
        for k in range(2, self.n + 1):
            if k not in levels:
                raise DiagSynthError(f"plan has no sequence for level {k}")
            if levels[k].n != k:
                raise DiagSynthError(f"level {k} sequence is built for level {levels[k].n}")
        object.__setattr__(self, "levels", levels)

    def __getitem__(self, k: int) -> GeneralControlSequence:
        return self.levels[k]


def family_plan(family: str, n: int) -> SequencePlan:
    """Plan using one family at every level.

    The constant-gap family only exists at odd levels; even levels (and level 2)
    fall back to the binary tree, which has the same gap count.
    """
    if family not in FAMILIES:
        raise DiagSynthError(f"unknown family {family!r}; expected one of {FAMILIES}")
    levels = {}
    for k in range(2, n + 1):
        if family == "nested":
            levels[k] = nested_copy_sequence(k)
        elif family == "constgap" and k % 2 == 1:
            levels[k] = constant_gap_sequence((k - 1) // 2)
        else:
            levels[k] = pbt_sequence(k)
    return SequencePlan(n, levels, family)


def plan_with(n: int, custom: Mapping[int, object], fallback: str = "pbt") -> SequencePlan:
    """Per-level override on top of a family plan."""
    base = dict(family_plan(fallback, n).levels)
    base.update(custom)
    return SequencePlan(n, base, "custom")


def split_level(alpha) -> LevelSplit:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or len(alpha) % 2:
        raise DiagSynthError(f"need an even number of phases, got {len(alpha)}")
    odd, even = alpha[0::2], alpha[1::2]
    return LevelSplit((odd + even) / 2, (odd - even) / 2)


def build_tail(beta, seq, target: int, flip_phase: float = 0.0) -> list:
    """Tail gates in application order: rightmost matrix factor first."""
    seq = as_general(seq)
    beta = np.asarray(beta, dtype=float)
    if len(beta) != len(seq):
        raise DiagSynthError(f"{len(beta)} angles for a sequence of length {len(seq)}")
    if seq.n != target:
        raise DiagSynthError(f"level-{seq.n} sequence cannot drive target qubit {target}")
    gates = []
    for i in range(len(seq) - 1, -1, -1):
        for m in sorted(seq.entries[i]):
            gates.append(ControlFlip(m, target, flip_phase))
        gates.append(Rotation(target, float(beta[i])))
    return gates


def level_parameters(target: PhaseVector, plan: SequencePlan):
    """(k, beta_k) for k = n..2 plus the final (global, rotation) pair."""
    if plan.n != target.n:
        raise DiagSynthError(f"plan is for {plan.n} qubits, target has {target.n}")
    alpha = target.as_array()
    betas = []
    for k in range(target.n, 1, -1):
        split = split_level(alpha)
        betas.append((k, invert_r(plan[k], split.gamma)))
        alpha = split.alpha_bar
    if target.n == 0:
        return betas, float(alpha[0]), None
    base = split_level(alpha)
    return betas, float(base.alpha_bar[0]), float(base.gamma[0])


def decompose(target: PhaseVector, plan: SequencePlan | None = None, flip_phase: float = 0.0) -> Circuit:
    """Circuit whose product is diag(exp(1j * target.phases)).

    Emission order per level is the coarser diagonal first, then the tail.
    """
    plan = plan if plan is not None else family_plan("pbt", target.n)
    betas, global_angle, base_angle = level_parameters(target, plan)
    gates = [GlobalPhase(global_angle)]
    if base_angle is not None:
        gates.append(Rotation(1, base_angle))
    for k, beta in reversed(betas):
        gates += build_tail(beta, plan[k], k, flip_phase)
    return Circuit(target.n, tuple(gates))


def forward_level(alpha_bar, beta, seq) -> np.ndarray:
    """Phases of one level from its coarser phases and tail angles."""
    return LevelSplit(np.asarray(alpha_bar, dtype=float), apply_r(seq, beta)).recombine()


def gate_counts(c: Circuit) -> dict:
    counts = {"controls": 0, "rotations": 0, "global_phases": 0}
    for g in c.gates:
        if isinstance(g, ControlFlip):
            counts["controls"] += 1
        elif isinstance(g, Rotation):
            counts["rotations"] += 1
        else:
            counts["global_phases"] += 1
    return counts


def wrap_circuit(c: Circuit) -> Circuit:
    """Same circuit with every angle shifted by a multiple of 2*pi into (-pi, pi]."""
    gates = []
    for g in c.gates:
        if isinstance(g, Rotation):
            g = Rotation(g.target, wrap_angle(g.angle))
        elif isinstance(g, GlobalPhase):
            g = GlobalPhase(wrap_angle(g.angle))
        else:
            g = ControlFlip(g.control, g.target, wrap_angle(g.flip_phase))
        gates.append(g)
    return Circuit(c.n, tuple(gates))


def export_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";']
    if c.n:
        lines.append(f"qubit[{c.n}] q;")
    for g in c.gates:
        if isinstance(g, Rotation):
            lines.append(f"rz({_fmt(-2 * g.angle)}) q[{g.target - 1}];")
        elif isinstance(g, ControlFlip):
            if g.flip_phase != 0:
                raise DiagSynthError("no standard gate; export unsupported")
            lines.append(f"cx q[{g.control - 1}], q[{g.target - 1}];")
        else:
            lines.append(f"gphase({_fmt(g.angle)});")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")
