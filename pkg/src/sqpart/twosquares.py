"""The set S of sums of two squares and the Landau-Ramanujan constant.

Zero counts as a square, so perfect squares (1, 4, 9, ...) are members.
Zero itself is never a member.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.special import zeta

from . import _kernels
from .errors import ResourceCapError

#: Largest sieve limit accepted unless the caller passes an explicit cap.
DEFAULT_SIEVE_CAP = 200_000_000


@dataclass(frozen=True, eq=False)
class MembershipTable:
    """Membership flags for 1..limit; ``bits[0]`` is always False.

    Compared and hashed by identity so derived arrays can be cached per table.
    """

    limit: int
    bits: np.ndarray

    def __contains__(self, n):
        return 1 <= n <= self.limit and bool(self.bits[n])

    def members(self):
        return np.flatnonzero(self.bits)

    def prefix_counts(self):
        return np.cumsum(self.bits, dtype=np.int64)


def sieve_membership(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> MembershipTable:
    """Flag every a^2 + b^2 <= limit with 0 <= a <= b."""
    limit = int(limit)
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit > cap:
        raise ResourceCapError(f"sieve limit {limit} exceeds cap {cap}")
    bits = _kernels.sieve_two_squares(limit)
    bits.flags.writeable = False
    return MembershipTable(limit, bits)


def is_member_by_factorization(n: int) -> bool:
    """Two-square test by trial division: primes 3 mod 4 must occur evenly."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    while n % 2 == 0:
        n //= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if p % 4 == 3 and e % 2:
                return False
        p += 2
    return n % 4 != 3


def factorization_flags(limit: int) -> np.ndarray:
    """Vectorised :func:`is_member_by_factorization` over 0..limit."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    return _kernels.factor_flags(int(limit))


def count_members_up_to(table: MembershipTable, x: int) -> int:
    """S(x), the number of members not exceeding x."""
    x = int(x)
    if x > table.limit:
        raise ValueError(f"x={x} exceeds table limit {table.limit}")
    if x < 1:
        return 0
    return int(np.count_nonzero(table.bits[: x + 1]))


def landau_reference(x: float, K: float) -> float:
    """Leading-order prediction K x / sqrt(log x) for S(x)."""
    if not x > math.e:
        raise ValueError(f"x must exceed e, got {x}")
    return K * x / math.sqrt(math.log(x))


# ---------------------------------------------------------------------------
# Landau-Ramanujan constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantApproximation:
    value: float
    abs_error_bound: float
    terms_used: int


# Floor from evaluating zeta and the Dirichlet beta in double precision and
# taking ~10 square roots/products.
_ROUNDING_FLOOR = 2e-15


def _dirichlet_beta(s):
    return (zeta(s, 0.25) - zeta(s, 0.75)) / 4.0**s


def _depth_error(depth):
    # log Q(2^D) <= 2 * 3^(-2^(D+1)); the unrolled recursion divides that
    # by 2^D and K takes a further square root.
    exponent = 2.0 ** (depth + 1)
    return 0.8 * 3.0 ** (-exponent) / 2.0**depth


def landau_ramanujan_constant(target_abs_error: float = 1e-12) -> ConstantApproximation:
    """K = 2^{-1/2} prod_{p = 3 mod 4} (1 - p^-2)^{-1/2} to ``target_abs_error``.

    Let Q(s) = prod_{p = 3 mod 4} (1 - p^{-2s})^{-1}. Then

        Q(s)^2 = Q(2s) * zeta(2s) (1 - 2^{-2s}) / beta(2s)

    with beta the Dirichlet L-function of the character mod 4.  Starting
    from Q(2^D) ~ 1 and unrolling down to Q(1) gives K = sqrt(Q(1) / 2);
    each extra level squares the accuracy.
    """
    if not 0 < target_abs_error <= 0.1:
        raise ValueError("target_abs_error must lie in (0, 0.1]")
    if target_abs_error < _ROUNDING_FLOOR:
        raise ValueError(
            f"target_abs_error below double-precision floor {_ROUNDING_FLOOR:g}"
        )
    depth = 0
    while _depth_error(depth) + _ROUNDING_FLOOR > target_abs_error:
        depth += 1
    return _constant_at_depth(depth)


def _constant_at_depth(depth):
    log_q = 0.0  # log Q(2^depth) taken as 0
    for k in range(depth, 0, -1):
        s = 2.0**k
        ratio = zeta(s) * (1.0 - 2.0**-s) / _dirichlet_beta(s)
        log_q = 0.5 * (log_q + math.log(ratio))
    value = math.sqrt(math.exp(log_q) / 2.0)
    return ConstantApproximation(value, _depth_error(depth) + _ROUNDING_FLOOR, depth)


@lru_cache(maxsize=None)
def landau_ramanujan_value() -> float:
    """K at full double precision, computed once."""
    return landau_ramanujan_constant(_ROUNDING_FLOOR * 2).value


def primes_up_to(limit):
    sieve = np.ones(limit + 1, dtype=np.bool_)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def euler_product_constant(prime_limit: int) -> float:
    """Raw truncated Euler product for K over primes 3 mod 4 up to ``prime_limit``.

    Converges like 1/(p log p); kept as an independent check on
    :func:`landau_ramanujan_constant`.
    """
    p = primes_up_to(prime_limit).astype(np.float64)
    p = p[p % 4 == 3]
    log_prod = -0.5 * math.fsum(np.log1p(-(p**-2.0)))
    return math.exp(log_prod) / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# table I/O
# ---------------------------------------------------------------------------

_BITSET_HEADER = struct.Struct("<Q")


def write_member_list(table: MembershipTable, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for ell in table.members():
            fh.write(f"{ell}\n")


def write_bitset(table: MembershipTable, path):
    """Raw bitset: 8-byte little-endian limit, then bits for 1..limit (LSB first)."""
    packed = np.packbits(table.bits[1:], bitorder="little")
    with open(path, "wb") as fh:
        fh.write(_BITSET_HEADER.pack(table.limit))
        fh.write(packed.tobytes())


def read_bitset(path) -> MembershipTable:
    data = Path(path).read_bytes()
    if len(data) < _BITSET_HEADER.size:
        raise ValueError(f"{path}: truncated bitset header")
    (limit,) = _BITSET_HEADER.unpack_from(data)
    body = np.frombuffer(data, dtype=np.uint8, offset=_BITSET_HEADER.size)
    if limit < 1 or body.size != (limit + 7) // 8:
        raise ValueError(f"{path}: bitset length does not match limit {limit}")
    bits = np.zeros(limit + 1, dtype=np.bool_)
    bits[1:] = np.unpackbits(body, bitorder="little", count=limit).astype(np.bool_)
    bits.flags.writeable = False
    return MembershipTable(int(limit), bits)
