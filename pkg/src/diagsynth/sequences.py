"""Control sequences that schedule the controlled flips inside each tail layer.

A level-``n`` sequence has ``2**(n-1)`` positions. Position ``i`` names the
control lines (subset of ``1..n-1``) whose flips sit next to rotation ``i``.
Prefix parities are kept as integers with line ``m`` at bit weight
``2**(n-1-m)``, the same order as block indices, so a parity column can be
used directly as a column index of the Walsh-Hadamard matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import DiagSynthError


@dataclass(frozen=True)
class ControlSequence:
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        _check_shape(self.n, len(entries))
        for a in entries:
            if not 1 <= a <= self.n - 1:
                raise DiagSynthError(f"entry {a} outside 1..{self.n - 1}")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class GeneralControlSequence:
    n: int
    entries: tuple[frozenset, ...]

    def __post_init__(self):
        entries = tuple(frozenset(int(m) for m in e) for e in self.entries)
        _check_shape(self.n, len(entries))
        for e in entries:
            for m in e:
                if not 1 <= m <= self.n - 1:
                    raise DiagSynthError(f"entry {sorted(e)} has line outside 1..{self.n - 1}")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def as_lists(self) -> list[list[int]]:
        return [sorted(e) for e in self.entries]


@dataclass(frozen=True)
class ValidityReport:
    parity_ok: bool
    coverage_ok: bool
    gap_count: int

    @property
    def ok(self) -> bool:
        return self.parity_ok and self.coverage_ok


def _check_shape(n: int, length: int) -> None:
    if n < 1:
        raise DiagSynthError(f"sequence level must be >= 1, got {n}")
    if length != 2 ** (n - 1) and not (n == 1 and length == 0):
        raise DiagSynthError(f"level-{n} sequence needs {2 ** (n - 1)} positions, got {length}")


def as_general(seq) -> GeneralControlSequence:
    if isinstance(seq, GeneralControlSequence):
        return seq
    if isinstance(seq, ControlSequence):
        return lift(seq)
    raise DiagSynthError(f"not a control sequence: {seq!r}")


def lift(seq: ControlSequence) -> GeneralControlSequence:
    return GeneralControlSequence(seq.n, tuple(frozenset((a,)) for a in seq.entries))


def line_mask(m: int, n: int) -> int:
    return 1 << (n - 1 - m)


def _cached(seq, key, build):
    # sequences are frozen, so derived arrays can live on the instance
    value = seq.__dict__.get(key)
    if value is None:
        value = build()
        object.__setattr__(seq, key, value)
    return value


def entry_masks(seq) -> np.ndarray:
    """Per-position XOR masks of the flipped lines."""
    if isinstance(seq, ControlSequence):
        lines = np.array(seq.entries, dtype=np.int64)
        return np.left_shift(1, seq.n - 1 - lines)
    seq = as_general(seq)
    masks = np.zeros(len(seq), dtype=np.int64)
    for i, e in enumerate(seq.entries):
        for m in e:
            masks[i] |= line_mask(m, seq.n)
    return masks


def _prefix_parities(seq) -> np.ndarray:
    masks = entry_masks(seq)
    out = np.zeros(len(masks) + 1, dtype=np.int64)
    if len(masks):
        np.bitwise_xor.accumulate(masks, out=out[1:])
    out.flags.writeable = False
    return out


def prefix_parities(seq) -> np.ndarray:
    """Packed parity columns p_0 .. p_N; p_0 = 0 and p_i covers positions 1..i."""
    if not isinstance(seq, (ControlSequence, GeneralControlSequence)):
        seq = as_general(seq)
    return _cached(seq, "_parities", lambda: _prefix_parities(seq))


def pbt_sequence(n: int) -> ControlSequence:
    """Perfect-binary-tree sequence (in-order walk, levels shifted by one) plus a trailing 1."""
    if n < 2:
        raise DiagSynthError(f"binary tree sequence needs n >= 2, got {n}")
    a = [1]
    for _ in range(3, n + 1):
        shifted = [x + 1 for x in a]
        a = shifted + [1] + shifted
    return ControlSequence(n, tuple(a + [1]))


def constant_gap_sequence(depth: int) -> ControlSequence:
    """Column-permuted tree diagram with the same gap count, for n = 2*depth + 1.

    Each step maps a body ``a`` over lines 1..L to
    ``(a+2) {2} (L+3-a) {1} (L+3-a) {2} (a+2)`` over lines 1..L+2.
    """
    if depth < 1:
        raise DiagSynthError(f"depth must be >= 1, got {depth}")
    a = [2, 1, 2]
    top = 2
    for _ in range(depth - 1):
        outer = [x + 2 for x in a]
        inner = [top + 3 - x for x in a]
        a = outer + [2] + inner + [1] + inner + [2] + outer
        top += 2
    return ControlSequence(2 * depth + 1, tuple(a + [1]))


def nested_copy_sequence(n: int) -> GeneralControlSequence:
    """Multi-control family where each diagram row is a compressed copy of the row above."""
    if n < 2:
        raise DiagSynthError(f"nested-copy sequence needs n >= 2, got {n}")
    cur = [frozenset({1}), frozenset({1})]
    for level in range(3, n + 1):
        spread = []
        for e in cur:
            spread += [frozenset(), e]
        cur = [e | {level - 1} for e in spread]
    return GeneralControlSequence(n, tuple(cur))


FAMILIES = ("pbt", "constgap", "nested")


def family_sequence(family: str, n: int):
    if family == "pbt":
        return pbt_sequence(n)
    if family == "nested":
        return nested_copy_sequence(n)
    if family == "constgap":
        if n % 2 == 0 or n < 3:
            raise DiagSynthError(f"constant-gap family exists only for odd n >= 3, got {n}")
        return constant_gap_sequence((n - 1) // 2)
    raise DiagSynthError(f"unknown family {family!r}; expected one of {FAMILIES}")


def parity_trace(seq) -> np.ndarray:
    """s[m-1, i] = parity of line m's flips among positions 1..i, for i = 0..N."""
    seq = as_general(seq)
    p = prefix_parities(seq)
    rows = [(p >> (seq.n - 1 - m)) & 1 for m in range(1, seq.n)]
    if not rows:
        return np.zeros((0, len(p)), dtype=np.int8)
    return np.array(rows, dtype=np.int8)


def validate(seq) -> ValidityReport:
    if not isinstance(seq, (ControlSequence, GeneralControlSequence)):
        seq = as_general(seq)
    return _cached(seq, "_validity", lambda: _validate(seq))


def _validate(seq) -> ValidityReport:
    p = prefix_parities(seq)
    n_pos = len(seq)
    parity_ok = bool(p[-1] == 0)
    seen = np.zeros(max(n_pos, 1), dtype=bool)
    heads = p[:n_pos]
    seen[heads] = True
    coverage_ok = bool(seen.sum() == n_pos)
    if isinstance(seq, ControlSequence):
        gaps = n_pos
    else:
        gaps = sum(len(e) for e in seq.entries)
    return ValidityReport(parity_ok, coverage_ok, gaps)


def permute_rows(seq, sigma: Mapping[int, int] | Sequence[int]):
    """Relabel control lines. ``sigma`` maps line m to sigma[m] (dict) or sigma[m-1] (list)."""
    general = as_general(seq)
    lines = range(1, general.n)
    if isinstance(sigma, Mapping):
        table = {m: int(sigma[m]) for m in lines if m in sigma}
    else:
        if len(sigma) != general.n - 1:
            raise DiagSynthError(f"permutation needs {general.n - 1} images, got {len(sigma)}")
        table = {m: int(sigma[m - 1]) for m in lines}
    if sorted(table) != list(lines) or sorted(table.values()) != list(lines):
        raise DiagSynthError(f"not a permutation of 1..{general.n - 1}: {sigma}")
    if isinstance(seq, ControlSequence):
        return ControlSequence(seq.n, tuple(table[a] for a in seq.entries))
    return GeneralControlSequence(
        general.n, tuple(frozenset(table[m] for m in e) for e in general.entries)
    )


def from_entries(n: int, entries: Iterable) -> GeneralControlSequence:
    """Build a general sequence from ints or iterables of ints."""
    out = []
    for e in entries:
        if isinstance(e, (int, np.integer)):
            out.append(frozenset((int(e),)))
        else:
            out.append(frozenset(int(m) for m in e))
    return GeneralControlSequence(n, tuple(out))
