"""Exact restricted partition counts with Python integers.

A part-set is either a :class:`~sqpart.twosquares.MembershipTable` or any
iterable of positive integers.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ResourceCapError
from .twosquares import MembershipTable

#: Default ceiling on n_max for the DP (memory grows like n_max * digits).
DEFAULT_DP_CAP = 50_000

ENUMERATION_MAX = 40


@dataclass(frozen=True)
class PartitionTable:
    n_max: int
    set_id: str
    counts: tuple

    def __getitem__(self, n):
        return self.counts[n]

    def __len__(self):
        return len(self.counts)


def resolve_parts(parts, n_max):
    """Sorted list of the distinct parts <= n_max; returns (parts, set_id)."""
    if isinstance(parts, MembershipTable):
        if parts.limit < n_max:
            raise ValueError(
                f"membership table covers 1..{parts.limit}, need 1..{n_max}"
            )
        return parts.members()[parts.members() <= n_max].tolist(), "twosquares"
    values = sorted({int(p) for p in parts})
    if values and values[0] <= 0:
        raise ValueError("part-set may only contain positive integers")
    return [p for p in values if p <= n_max], "explicit"


def partition_counts(n_max: int, parts, cap: int = DEFAULT_DP_CAP, set_id=None) -> PartitionTable:
    """Coin-change DP: for each part l, counts[m] += counts[m - l] for m >= l.

    The inner update runs over object arrays in chunks of length l, so each
    chunk reads values already updated by the previous chunk, exactly as the
    scalar loop would.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if n_max > cap:
        raise ResourceCapError(f"n_max {n_max} exceeds DP cap {cap}")
    part_list, default_id = resolve_parts(parts, n_max)

    counts = np.zeros(n_max + 1, dtype=object)
    counts[:] = 0
    counts[0] = 1
    stop = n_max + 1
    for ell in part_list:
        for start in range(ell, stop, ell):
            end = min(start + ell, stop)
            counts[start:end] += counts[start - ell : end - ell]
    return PartitionTable(n_max, set_id or default_id, tuple(int(c) for c in counts))


def partition_count(n: int, parts, cap: int = DEFAULT_DP_CAP) -> int:
    return partition_counts(n, parts, cap=cap)[n]


def difference_exact(n: int, table: PartitionTable) -> int:
    """p(n+1) - p(n) read off a table."""
    if n < 0 or n + 1 > table.n_max:
        raise IndexError(f"need 0 <= n and n+1 <= {table.n_max}, got n={n}")
    return table.counts[n + 1] - table.counts[n]


def enumeration_oracle(n: int, parts) -> int:
    """Count partitions by explicit backtracking over non-increasing sequences.

    Exponential time; only meant for tests, hence the hard limit n <= 40.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > ENUMERATION_MAX:
        raise ValueError(f"enumeration oracle limited to n <= {ENUMERATION_MAX}")
    if isinstance(parts, MembershipTable):
        allowed = [int(p) for p in parts.members() if p <= n]
    else:
        allowed = sorted({int(p) for p in parts if p <= n})
        if allowed and allowed[0] <= 0:
            raise ValueError("part-set may only contain positive integers")
    allowed.reverse()

    def walk(remaining, first):
        if remaining == 0:
            return 1
        total = 0
        for i in range(first, len(allowed)):
            if allowed[i] <= remaining:
                total += walk(remaining - allowed[i], i)
        return total

    return walk(n, 0)


def pentagonal_partition_counts(n_max: int) -> list:
    """Unrestricted p(0..n_max) from Euler's pentagonal-number recurrence."""
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = g1 + k
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------

def read_part_file(path) -> list:
    """Newline-delimited decimal integers, strictly increasing."""
    values = []
    for lineno, line in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        v = int(line)
        if v <= 0:
            raise ValueError(f"{path}:{lineno}: parts must be positive")
        if values and v <= values[-1]:
            raise ValueError(f"{path}:{lineno}: parts must be strictly increasing")
        values.append(v)
    return values


def write_csv(table: PartitionTable, path):
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "count"])
        for n, c in enumerate(table.counts):
            w.writerow([n, c])


def read_csv(path, set_id="csv") -> PartitionTable:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["n", "count"]:
        raise ValueError(f"{path}: expected header 'n,count'")
    counts = []
    for i, (n, c) in enumerate(rows[1:]):
        if int(n) != i:
            raise ValueError(f"{path}: row {i + 1} has n={n}")
        counts.append(int(c))
    return PartitionTable(len(counts) - 1, set_id, tuple(counts))


# Binary layout (all little-endian):
#   magic b"SQPT", u32 version, u32 len(set_id), set_id utf-8, u64 entry count
#   per entry: u32 limb count k, then k u64 limbs of the magnitude
_MAGIC = b"SQPT"
_VERSION = 1


def write_binary(table: PartitionTable, path):
    sid = table.set_id.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(sid)))
        fh.write(sid)
        fh.write(struct.pack("<Q", len(table.counts)))
        for c in table.counts:
            nlimbs = (c.bit_length() + 63) // 64
            fh.write(struct.pack("<I", nlimbs))
            fh.write(c.to_bytes(8 * nlimbs, "little"))


def read_binary(path) -> PartitionTable:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise ValueError(f"{path}: not a partition table file")
    version, sid_len = struct.unpack_from("<II", data, 4)
    if version != _VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    pos = 12
    set_id = data[pos : pos + sid_len].decode("utf-8")
    pos += sid_len
    (count,) = struct.unpack_from("<Q", data, pos)
    pos += 8
    counts = []
    for _ in range(count):
        (nlimbs,) = struct.unpack_from("<I", data, pos)
        pos += 4
        counts.append(int.from_bytes(data[pos : pos + 8 * nlimbs], "little"))
        pos += 8 * nlimbs
    if pos != len(data):
        raise ValueError(f"{path}: trailing bytes after {count} entries")
    return PartitionTable(count - 1, set_id, tuple(counts))
