"""The +-1 sign matrix linking tail rotation angles to block angles.

For a level-``n`` sequence with prefix parity columns ``p_0 .. p_{N-1}``
(``N = 2**(n-1)``), entry ``[j, i]`` is ``(-1)**popcount(j & p_i)``: row ``j``
is the block whose control lines read the binary digits of ``j``, column ``i``
is the rotation at position ``i + 1``. Block angles are ``gamma = r @ beta``.

When the parity columns are pairwise distinct, ``r`` is a column permutation
of the Sylvester-Hadamard matrix ``H = [[1, 1], [1, -1]]^{(x) n-1}``, so
``r @ r.T == N * I`` and transposed products reduce to one fast
Walsh-Hadamard transform plus a gather.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DegenerateSequenceError, DiagSynthError
from .sequences import prefix_parities, validate

_ROW_CHUNK = 1 << 10


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """Sign matrix stored as packed bit rows; bit 1 means -1."""

    dim: int
    packed: np.ndarray

    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, axis=1, count=self.dim)

    def signs(self) -> np.ndarray:
        return (1 - 2 * self.bits().astype(np.int8)).astype(np.int8)

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.packed, other.packed)

    def __hash__(self):
        return hash((self.dim, self.packed.tobytes()))


def _heads(seq) -> tuple[int, np.ndarray]:
    return 2 ** (seq.n - 1), prefix_parities(seq)[:-1]


def build_r(seq) -> SignMatrix:
    dim, heads = _heads(seq)
    chunks = []
    for start in range(0, dim, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, dim), dtype=np.int64)
        bits = (np.bitwise_count(rows[:, None] & heads[None, :]) & 1).astype(np.uint8)
        chunks.append(np.packbits(bits, axis=1))
    return SignMatrix(dim, np.concatenate(chunks, axis=0))


def fwht(x) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform in natural (Sylvester) order."""
    y = np.array(x, dtype=float)
    size = y.shape[0]
    if size & (size - 1):
        raise DiagSynthError(f"transform length must be a power of two, got {size}")
    h = 1
    while h < size:
        y = y.reshape(-1, 2, h, *y.shape[1:])
        a = y[:, 0] + y[:, 1]
        b = y[:, 0] - y[:, 1]
        y = np.stack((a, b), axis=1).reshape(size, *a.shape[2:])
        h *= 2
    return y


def _check_length(dim: int, vec, name: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=float)
    if vec.shape[0] != dim:
        raise DiagSynthError(f"{name} has length {vec.shape[0]}, expected {dim}")
    return vec


def apply_r(seq, beta) -> np.ndarray:
    """gamma = r @ beta without forming r.

    Rotations sharing a parity column always enter each block with the same
    sign, so they are summed first and one Walsh-Hadamard transform finishes
    the job. This holds for any sequence, degenerate or not.
    """
    dim, heads = _heads(seq)
    beta = _check_length(dim, beta, "beta")
    buckets = np.zeros((dim, *beta.shape[1:]))
    np.add.at(buckets, heads, beta)
    return fwht(buckets)


def _require_coverage(seq) -> None:
    if not validate(seq).coverage_ok:
        raise DegenerateSequenceError("degenerate sequence: r not invertible by transpose")


def kron_column_permutation(seq) -> np.ndarray:
    """sigma[i] = column of the Hadamard power equal to column i of r (0-based)."""
    _require_coverage(seq)
    _, heads = _heads(seq)
    return heads.copy()


def fast_apply_transpose(seq, gamma) -> np.ndarray:
    """r.T @ gamma in O(n 2^n): transform, then pick columns by sigma."""
    _require_coverage(seq)
    dim, heads = _heads(seq)
    gamma = _check_length(dim, gamma, "gamma")
    return fwht(gamma)[heads]


def invert_r(seq, gamma) -> np.ndarray:
    dim, _ = _heads(seq)
    return fast_apply_transpose(seq, gamma) / dim


def hadamard_power(k: int) -> np.ndarray:
    """[[1, 1], [1, -1]] to the k-th Kronecker power, as int8."""
    r2 = np.array([[1, 1], [1, -1]], dtype=np.int8)
    out = np.ones((1, 1), dtype=np.int8)
    for _ in range(k):
        out = np.kron(out, r2)
    return out


def to_csv(r: SignMatrix) -> str:
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in r.signs())
