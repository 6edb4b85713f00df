import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diagsynth.core import DiagSynthError
from diagsynth.sequences import (
    ControlSequence,
    GeneralControlSequence,
    constant_gap_sequence,
    family_sequence,
    from_entries,
    lift,
    nested_copy_sequence,
    parity_trace,
    pbt_sequence,
    permute_rows,
    validate,
)

from oracles import parity_columns


def sets(*entries):
    return tuple(frozenset(e) for e in entries)


@pytest.mark.parametrize(
    "n, expected",
    [
        (2, (1, 1)),
        (3, (2, 1, 2, 1)),
        (4, (3, 2, 3, 1, 3, 2, 3, 1)),
    ],
)
def test_pbt_listing(n, expected):
    assert pbt_sequence(n).entries == expected


def test_pbt_needs_two_qubits():
    with pytest.raises(DiagSynthError):
        pbt_sequence(1)


def test_constant_gap_listing():
    assert constant_gap_sequence(1).entries == (2, 1, 2, 1)
    assert constant_gap_sequence(2).entries == (4, 3, 4, 2, 3, 4, 3, 1, 3, 4, 3, 2, 4, 3, 4, 1)
    assert constant_gap_sequence(2).n == 5


def test_constant_gap_matches_tree_gap_count():
    assert validate(constant_gap_sequence(2)).gap_count == 16
    assert validate(pbt_sequence(5)).gap_count == 16


def test_nested_listing():
    assert nested_copy_sequence(2).entries == sets({1}, {1})
    assert nested_copy_sequence(3).entries == sets({2}, {1, 2}, {2}, {1, 2})
    assert nested_copy_sequence(4).entries == sets(
        {3}, {2, 3}, {3}, {1, 2, 3}, {3}, {2, 3}, {3}, {1, 2, 3}
    )


def test_lift():
    assert lift(pbt_sequence(2)).entries == sets({1}, {1})
    assert lift(pbt_sequence(3)).entries == sets({2}, {1}, {2}, {1})
    assert all(len(e) == 1 for e in lift(pbt_sequence(6)).entries)


def test_structural_checks():
    with pytest.raises(DiagSynthError):
        ControlSequence(3, (1, 2, 1))
    with pytest.raises(DiagSynthError):
        ControlSequence(3, (1, 3, 1, 3))
    with pytest.raises(DiagSynthError):
        GeneralControlSequence(3, sets({0}, {1}, {1}, {2}))
    # degenerate level 1: no tail at all
    assert validate(ControlSequence(1, ())).ok


def test_parity_trace_small():
    assert parity_trace(lift(pbt_sequence(2))).tolist() == [[0, 1, 0]]


def test_parity_trace_matches_counting_oracle():
    for seq in (pbt_sequence(5), constant_gap_sequence(2), nested_copy_sequence(5)):
        g = seq if isinstance(seq, GeneralControlSequence) else lift(seq)
        cols, final = parity_columns(g.n, g.entries)
        trace = parity_trace(g)
        assert [tuple(trace[:, i]) for i in range(len(g))] == cols
        assert list(trace[:, -1]) == final


def test_pbt4_columns_enumerate_cube():
    trace = parity_trace(pbt_sequence(4))
    cols = {tuple(trace[:, i]) for i in range(8)}
    assert cols == set(itertools.product((0, 1), repeat=3))


@pytest.mark.parametrize("n", range(2, 17))
def test_pbt_valid(n):
    report = validate(pbt_sequence(n))
    assert report.parity_ok and report.coverage_ok
    assert report.gap_count == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(2, 15))
def test_nested_valid_and_heavier(n):
    report = validate(nested_copy_sequence(n))
    assert report.ok
    if n >= 3:
        assert report.gap_count > 2 ** (n - 1)


@pytest.mark.parametrize("depth", range(1, 8))
def test_constant_gap_valid(depth):
    report = validate(constant_gap_sequence(depth))
    assert report.ok
    assert report.gap_count == validate(pbt_sequence(2 * depth + 1)).gap_count


def test_validate_hand_examples():
    # {1,2,1,2}: columns (0,0),(1,0),(1,1),(0,1) -- all distinct
    r = validate(ControlSequence(3, (1, 2, 1, 2)))
    assert r.parity_ok and r.coverage_ok
    # {1,1,2,2}: columns (0,0),(1,0),(0,0),(0,1) -- (0,0) repeats
    r = validate(ControlSequence(3, (1, 1, 2, 2)))
    assert r.parity_ok and not r.coverage_ok
    r = validate(ControlSequence(3, (1, 2, 2, 2)))
    assert not r.parity_ok


def test_permute_rows_examples():
    swapped = permute_rows(pbt_sequence(3), {1: 2, 2: 1})
    assert swapped.entries == (1, 2, 1, 2)
    assert permute_rows(pbt_sequence(4), [1, 2, 3]) == pbt_sequence(4)
    with pytest.raises(DiagSynthError):
        permute_rows(pbt_sequence(4), [1, 1, 3])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.randoms(use_true_random=False), st.sampled_from(["pbt", "nested", "constgap"]))
def test_permute_rows_preserves_validity(n, rnd, family):
    if family == "constgap" and n % 2 == 0:
        n += 1 if n < 8 else -1
    seq = family_sequence(family, n)
    sigma = list(range(1, n))
    rnd.shuffle(sigma)
    assert validate(permute_rows(seq, sigma)) == validate(seq)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.frozensets(st.integers(1, n - 1)), min_size=2 ** (n - 1), max_size=2 ** (n - 1)),
)))
def test_validate_agrees_with_oracle(case):
    n, entries = case
    seq = GeneralControlSequence(n, tuple(entries))
    cols, final = parity_columns(n, entries)
    report = validate(seq)
    assert report.parity_ok == (not any(final))
    assert report.coverage_ok == (len(set(cols)) == len(cols))
    assert report.gap_count == sum(len(e) for e in entries)
    assert (not any(parity_trace(seq)[:, -1])) == report.parity_ok


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.randoms(use_true_random=False))
def test_coverage_invariant_under_column_permutation(n, rnd):
    # shuffle the parity columns of a tree diagram, then read the sequence back off the new diagram
    trace = parity_trace(pbt_sequence(n))
    cols = [tuple(trace[:, i]) for i in range(2 ** (n - 1))]
    rest = cols[1:]
    rnd.shuffle(rest)
    walk = [cols[0]] + rest + [cols[0]]
    entries = [
        [m + 1 for m in range(n - 1) if a[m] != b[m]] for a, b in zip(walk, walk[1:])
    ]
    seq = from_entries(n, entries)
    report = validate(seq)
    assert report.ok
    assert report.gap_count >= 2 ** (n - 1)
