import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diagsynth.core import (
    BitVector,
    Circuit,
    ControlFlip,
    DiagSynthError,
    PhaseVector,
    Rotation,
    angular_distance,
    bit_of,
    index_to_rho,
    pad_phases,
    rho_to_index,
    wrap_angle,
)


def test_pad_three_phases():
    pv = pad_phases([0.3, -0.7, 1.1])
    assert pv.n == 2
    assert pv.phases == (0.3, -0.7, 1.1, 0.0)


def test_pad_single_phase():
    pv = pad_phases([0.5])
    assert pv.n == 1
    assert pv.phases == (0.5, 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_pad_power_of_two_unchanged(n):
    raw = list(np.linspace(-1, 1, 2**n))
    pv = pad_phases(raw)
    assert pv.n == n
    assert list(pv.phases) == raw


def test_pad_empty():
    with pytest.raises(DiagSynthError, match="empty phase list"):
        pad_phases([])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=70))
def test_pad_keeps_prefix_and_appends_zeros(raw):
    pv = pad_phases(raw)
    assert 2 ** (pv.n - 1) < max(len(raw), 2) <= 2**pv.n
    assert list(pv.phases[: len(raw)]) == raw
    assert all(p == 0.0 for p in pv.phases[len(raw):])


def test_phase_vector_rejects_bad_length_and_nan():
    with pytest.raises(DiagSynthError):
        PhaseVector(2, (0.0, 0.0, 0.0))
    with pytest.raises(DiagSynthError):
        PhaseVector(1, (0.0, math.nan))


def test_odd_even_subvectors():
    pv = PhaseVector(2, (1.0, 2.0, 3.0, 4.0))
    assert list(pv.odd) == [1.0, 3.0]
    assert list(pv.even) == [2.0, 4.0]


def test_index_to_rho_examples():
    assert index_to_rho(0, 4).bits == (0, 0, 0)
    rho = index_to_rho(5, 4)
    assert rho.bits == (1, 0, 1)
    # weighted sum sum_i 2^{n-1-i} rho_i evaluated directly
    assert sum(2 ** (3 - i) * b for i, b in enumerate(rho.bits, start=1)) == 5


def test_rho_to_index_examples():
    assert rho_to_index(BitVector((0, 0, 0))) == 0
    assert rho_to_index(BitVector((1, 0, 1))) == 5
    assert rho_to_index(BitVector((1, 1, 1))) == 7


def test_index_to_rho_range():
    with pytest.raises(DiagSynthError):
        index_to_rho(8, 4)
    with pytest.raises(DiagSynthError):
        index_to_rho(-1, 4)


@pytest.mark.parametrize("n", range(1, 11))
def test_rho_round_trip(n):
    for j in range(2 ** (n - 1)):
        assert rho_to_index(index_to_rho(j, n)) == j


def test_bit_of():
    assert bit_of(4, 1, 3) == 1
    assert bit_of(4, 3, 3) == 0
    assert bit_of(5, 3, 3) == 1
    with pytest.raises(DiagSynthError):
        bit_of(8, 1, 3)
    with pytest.raises(DiagSynthError):
        bit_of(0, 4, 3)


def test_circuit_checks_indices():
    Circuit(2, (ControlFlip(1, 2), Rotation(2, 0.1)))
    with pytest.raises(DiagSynthError):
        Circuit(2, (ControlFlip(2, 1),))
    with pytest.raises(DiagSynthError):
        Circuit(2, (Rotation(3, 0.1),))


@given(st.floats(-1e3, 1e3))
def test_wrap_angle_range_and_equivalence(theta):
    w = wrap_angle(theta)
    assert -math.pi < w <= math.pi
    assert angular_distance(w, theta) < 1e-9


def test_angular_distance_mod_two_pi():
    assert angular_distance(0.3, 0.3 + 2 * math.pi) < 1e-15
    assert angular_distance(math.pi - 0.1, -math.pi + 0.1) == pytest.approx(0.2)
