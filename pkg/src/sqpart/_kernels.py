"""Hot loops, each in a numba and a pure-numpy flavour.

The public names at the bottom of this module point at the numba versions
unless numba is missing or ``SQPART_NO_NUMBA`` is set to a non-empty value
other than ``0``.  Both flavours are always importable as
``NUMBA_KERNELS`` / ``NUMPY_KERNELS`` so tests and benchmarks can compare them.
"""
import math
import os
from math import isqrt
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


# ---------------------------------------------------------------------------
# pure numpy
# ---------------------------------------------------------------------------

def _sieve_numpy(limit):
    flags = np.zeros(limit + 1, dtype=np.bool_)
    for a in range(isqrt(limit) + 1):
        b = np.arange(a, isqrt(limit - a * a) + 1, dtype=np.int64)
        flags[a * a + b * b] = True
    flags[0] = False
    return flags


def _smallest_prime_factor(limit):
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            np.minimum(block, p, out=block)
    return spf


def _factor_flags_numpy(limit):
    # Peel smallest prime factors off every n at once, tracking the parity
    # of the exponent of the prime currently being removed.
    spf = _smallest_prime_factor(limit)
    rem = np.arange(limit + 1, dtype=np.int64)
    ok = np.ones(limit + 1, dtype=np.bool_)
    cur = np.zeros(limit + 1, dtype=np.int64)
    odd = np.zeros(limit + 1, dtype=np.bool_)
    idx = np.arange(2, limit + 1, dtype=np.int64)
    while idx.size:
        p = spf[rem[idx]]
        switched = p != cur[idx]
        bad = switched & odd[idx] & (cur[idx] % 4 == 3)
        ok[idx[bad]] = False
        odd[idx[switched]] = False
        cur[idx] = p
        odd[idx] ^= True
        rem[idx] //= p
        done = rem[idx] == 1
        fin = idx[done]
        ok[fin] &= ~(odd[fin] & (cur[fin] % 4 == 3))
        idx = idx[~done]
    ok[0] = False
    return ok


def _restricted_divisor_sums_numpy(flags, top):
    sig = np.zeros(top + 1, dtype=np.int64)
    for ell in np.flatnonzero(flags[: top + 1]):
        sig[ell::ell] += ell
    return sig


def _phi_sum_numpy(sig, m, u, top):
    t = np.arange(1, top + 1, dtype=np.float64)
    terms = t ** (m - 1) * sig[1 : top + 1] * np.exp(-u * t)
    return math.fsum(terms)


NUMPY_KERNELS = SimpleNamespace(
    name="numpy",
    sieve_two_squares=_sieve_numpy,
    factor_flags=_factor_flags_numpy,
    restricted_divisor_sums=_restricted_divisor_sums_numpy,
    phi_sum=_phi_sum_numpy,
)


# ---------------------------------------------------------------------------
# numba
# ---------------------------------------------------------------------------

if numba is not None:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _sieve_numba(limit):
        flags = np.zeros(limit + 1, dtype=np.bool_)
        a = 0
        while 2 * a * a <= limit:
            b = a
            while a * a + b * b <= limit:
                flags[a * a + b * b] = True
                b += 1
            a += 1
        flags[0] = False
        return flags

    @njit
    def _factor_flags_numba(limit):
        ok = np.zeros(limit + 1, dtype=np.bool_)
        for n in range(1, limit + 1):
            r = n
            while r % 2 == 0:
                r //= 2
            good = True
            p = 3
            while p * p <= r:
                if r % p == 0:
                    e = 0
                    while r % p == 0:
                        r //= p
                        e += 1
                    if p % 4 == 3 and e % 2 == 1:
                        good = False
                        break
                p += 2
            if good and r > 1 and r % 4 == 3:
                good = False
            ok[n] = good
        return ok

    @njit
    def _restricted_divisor_sums_numba(flags, top):
        sig = np.zeros(top + 1, dtype=np.int64)
        for ell in range(1, top + 1):
            if flags[ell]:
                for t in range(ell, top + 1, ell):
                    sig[t] += ell
        return sig

    @njit
    def _phi_sum_numba(sig, m, u, top):
        # Neumaier summation; terms are positive so this is cheap insurance
        # against ~1e-10 drift over 1e6 terms.
        s = 0.0
        c = 0.0
        for t in range(1, top + 1):
            if sig[t] == 0:
                continue
            x = float(t) ** (m - 1) * sig[t] * math.exp(-u * t)
            y = s + x
            if abs(s) >= abs(x):
                c += (s - y) + x
            else:
                c += (x - y) + s
            s = y
        return s + c

    NUMBA_KERNELS = SimpleNamespace(
        name="numba",
        sieve_two_squares=_sieve_numba,
        factor_flags=_factor_flags_numba,
        restricted_divisor_sums=_restricted_divisor_sums_numba,
        phi_sum=_phi_sum_numba,
    )
else:  # pragma: no cover
    NUMBA_KERNELS = None


def _numba_disabled():
    flag = os.environ.get("SQPART_NO_NUMBA", "")
    return flag not in ("", "0")


ACTIVE = NUMPY_KERNELS if (NUMBA_KERNELS is None or _numba_disabled()) else NUMBA_KERNELS
BACKEND = ACTIVE.name

sieve_two_squares = ACTIVE.sieve_two_squares
factor_flags = ACTIVE.factor_flags
restricted_divisor_sums = ACTIVE.restricted_divisor_sums
phi_sum = ACTIVE.phi_sum
