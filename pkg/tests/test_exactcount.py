import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqpart import exactcount as ec
from sqpart.errors import ResourceCapError
from sqpart.twosquares import sieve_membership

S50 = sieve_membership(50)
ALL = range(1, 41)
ODD = range(1, 41, 2)


def test_small_table():
    assert list(ec.partition_counts(4, S50).counts) == [1, 1, 2, 2, 4]


def test_empty_partition():
    assert list(ec.partition_counts(0, S50).counts) == [1]
    assert list(ec.partition_counts(0, [3, 5]).counts) == [1]


def test_unrestricted_100():
    assert ec.partition_count(100, range(1, 101)) == 190569292


@pytest.mark.parametrize("n, expected", [(3, 2), (1, 1), (7, 8)])
def test_partition_count_points(n, expected):
    assert ec.partition_count(n, S50) == expected


def test_difference_exact():
    table = ec.partition_counts(4, S50)
    assert ec.difference_exact(3, table) == 2
    assert ec.difference_exact(0, table) == 0
    with pytest.raises(IndexError):
        ec.difference_exact(4, table)


def test_difference_exact_large():
    table = ec.partition_counts(10_000, sieve_membership(10_000))
    assert ec.difference_exact(9999, table) == table[10_000] - table[9999]
    assert table.counts == tuple(sorted(table.counts))


def test_rejects_zero_part_and_cap():
    with pytest.raises(ValueError):
        ec.partition_counts(5, [0, 1])
    with pytest.raises(ResourceCapError):
        ec.partition_counts(101, S50, cap=100)
    with pytest.raises(ValueError):
        ec.partition_counts(60, S50)  # table too small


def test_oracle_basics():
    assert ec.enumeration_oracle(4, S50) == 4
    assert ec.enumeration_oracle(0, S50) == 1
    assert ec.enumeration_oracle(10, range(2, 11, 2)) == ec.enumeration_oracle(5, range(1, 6))
    with pytest.raises(ValueError):
        ec.enumeration_oracle(41, S50)


@pytest.mark.parametrize("parts", [S50, ALL, ODD], ids=["S", "all", "odd"])
def test_dp_matches_oracle(parts):
    table = ec.partition_counts(40, parts)
    assert list(table.counts) == [ec.enumeration_oracle(n, parts) for n in range(41)]


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(1, 25), min_size=1, max_size=8), st.integers(0, 30))
def test_dp_matches_oracle_random_sets(parts, n):
    assert ec.partition_count(n, parts) == ec.enumeration_oracle(n, parts)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(1, 60), min_size=1, max_size=15), st.randoms())
def test_dp_order_independent(parts, rnd):
    # the DP sorts its input, so permute by running the scalar recurrence directly
    n_max = 120
    order = sorted(parts)
    rnd.shuffle(order)
    counts = [1] + [0] * n_max
    for ell in order:
        for m in range(ell, n_max + 1):
            counts[m] += counts[m - ell]
    assert list(ec.partition_counts(n_max, parts).counts) == counts


def test_pentagonal_agreement_2000():
    table = ec.partition_counts(2000, range(1, 2001))
    assert list(table.counts) == ec.pentagonal_partition_counts(2000)


def test_monotone_for_S():
    counts = ec.partition_counts(3000, sieve_membership(3000)).counts
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert all(c > 0 for c in counts)


def test_read_part_file(tmp_path):
    path = tmp_path / "parts.txt"
    path.write_text("2\n3\n5\n7\n")
    assert ec.read_part_file(path) == [2, 3, 5, 7]
    path.write_text("2\n2\n")
    with pytest.raises(ValueError):
        ec.read_part_file(path)
    path.write_text("3\n1\n")
    with pytest.raises(ValueError):
        ec.read_part_file(path)


def test_csv_round_trip(tmp_path):
    table = ec.partition_counts(300, sieve_membership(300))
    path = tmp_path / "t.csv"
    ec.write_csv(table, path)
    assert path.read_text().splitlines()[:3] == ["n,count", "0,1", "1,1"]
    assert ec.read_csv(path).counts == table.counts


def test_binary_round_trip(tmp_path):
    table = ec.partition_counts(3000, sieve_membership(3000))
    path = tmp_path / "t.bin"
    ec.write_binary(table, path)
    back = ec.read_binary(path)
    assert back.counts == table.counts
    assert back.set_id == "twosquares"
    assert back.n_max == 3000


def test_binary_rejects_garbage(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"nope")
    with pytest.raises(ValueError):
        ec.read_binary(path)


def test_random_big_values_round_trip(tmp_path):
    rnd = random.Random(0)
    counts = (0, 1, 2**64 - 1, 2**64, rnd.getrandbits(900))
    table = ec.PartitionTable(len(counts) - 1, "x", counts)
    path = tmp_path / "r.bin"
    ec.write_binary(table, path)
    assert ec.read_binary(path).counts == counts
