"""Saddle-point evaluation of the generating function of p_S(n).

Everything is parametrised by u = log(1/rho) = 1/X rather than rho itself,
since rho sits within ~1e-3 of 1 in the interesting range and 1 - rho would
lose digits.  Writing sigma_S(t) for the sum of the divisors of t lying in S,

    (rho d/drho)^m Phi(rho) = sum_{t >= 1} t^(m-1) sigma_S(t) exp(-u t),

which is the double sum over j and l in S regrouped by t = j l.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import NumericalError, ResourceCapError
from .twosquares import MembershipTable, landau_ramanujan_value, sieve_membership

MAX_ORDER = 4
TAIL_RTOL = 1e-12
RESIDUAL_RTOL = 1e-12
ASYMPTOTIC_MIN_N = 100

#: Ceiling on the automatically grown coefficient table (int64 per entry).
SHARED_TABLE_CAP = 1 << 25

_BISECT_RTOL = 1e-3
_MAX_DOUBLINGS = 60
_MAX_NEWTON = 50


@dataclass(frozen=True)
class PhiValue:
    m: int
    rho: float
    value: float
    tail_bound: float
    terms: int


@dataclass(frozen=True)
class SaddlePoint:
    x: float
    rho: float
    X: float
    residual: float

    @property
    def u(self):
        return 1.0 / self.X


@dataclass(frozen=True)
class LogEstimate:
    n: int
    log_value: float
    method: str
    saddle: Optional[SaddlePoint] = None


# ---------------------------------------------------------------------------
# coefficients sigma_S(t)
# ---------------------------------------------------------------------------

_sigma_cache = weakref.WeakKeyDictionary()
_shared = {"table": None}


def _shared_table(top):
    table = _shared["table"]
    if table is None or table.limit < top:
        limit = 1 << max(16, (int(top) - 1).bit_length())
        if limit > SHARED_TABLE_CAP and top <= SHARED_TABLE_CAP:
            limit = SHARED_TABLE_CAP
        table = sieve_membership(limit, cap=SHARED_TABLE_CAP)
        _shared["table"] = table
    return table


def restricted_divisor_sums(table: MembershipTable) -> np.ndarray:
    """sigma_S(t) for 0 <= t <= table.limit, cached per table."""
    sig = _sigma_cache.get(table)
    if sig is None:
        sig = _kernels.restricted_divisor_sums(table.bits, table.limit)
        sig.flags.writeable = False
        _sigma_cache[table] = sig
    return sig


def _coefficients(top, table):
    if table is None:
        table = _shared_table(top)
    elif table.limit < top:
        raise ValueError(
            f"membership table covers 1..{table.limit}, truncation needs 1..{top}"
        )
    return restricted_divisor_sums(table)


# ---------------------------------------------------------------------------
# Phi and its log-derivatives
# ---------------------------------------------------------------------------

def truncation_length(X, m, l_extra=0.0):
    return 60.0 + (m + 2) * math.log(X + math.e) + l_extra


def _log_tail_bound(X, m, top):
    # Each coefficient t^(m-1) sigma_S(t) is at most t^(m+1), so with k = m+1
    # and L = top/X >= 2k the tail is at most f(top) + int_top^inf f, i.e.
    # (2X + 1) X^k L^k e^(-L) for f(t) = t^k e^(-t/X).
    k = m + 1
    L = top / X
    return math.log(2 * X + 1) + k * math.log(X * L) - L


def phi_log_derivative_u(u: float, m: int, table: MembershipTable = None,
                         l_extra: float = 0.0) -> PhiValue:
    """(rho d/drho)^m Phi at rho = exp(-u)."""
    if not (u > 0 and math.isfinite(u)):
        raise ValueError(f"u must be positive and finite, got {u}")
    if not 0 <= m <= MAX_ORDER:
        raise ValueError(f"m must lie in 0..{MAX_ORDER}, got {m}")
    X = 1.0 / u
    L = truncation_length(X, m, l_extra)
    for _ in range(20):
        top = max(1, math.ceil(X * L))
        sig = _coefficients(top, table)
        value = _kernels.phi_sum(sig, m, u, top)
        tail = math.exp(_log_tail_bound(X, m, top))
        if value > 0 and tail <= TAIL_RTOL * value:
            return PhiValue(m, math.exp(-u), value, tail, top)
        L += 10.0
    raise NumericalError(f"could not meet tail contract at u={u}, m={m}")


def phi_log_derivative(rho: float, m: int, table: MembershipTable = None,
                       l_extra: float = 0.0) -> PhiValue:
    """(rho d/drho)^m Phi(rho), truncated with a rigorous tail bound.

    Accuracy near rho = 1 is limited by forming log(1/rho); callers with
    the scale variable at hand should use :func:`phi_log_derivative_u`.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return phi_log_derivative_u(-math.log(rho), m, table, l_extra)


# ---------------------------------------------------------------------------
# saddle point
# ---------------------------------------------------------------------------

def saddle_scale_guess(x: float, K: float = None) -> float:
    """Leading-order X(x) = pi^-1 sqrt(3/K) x^(1/2) (2 log x)^(1/4)."""
    K = landau_ramanujan_value() if K is None else K
    return math.sqrt(3.0 / K) / math.pi * math.sqrt(x) * (2.0 * math.log(x)) ** 0.25


def solve_saddle(x: float, table: MembershipTable = None, l_extra: float = 0.0) -> SaddlePoint:
    """Solve rho Phi'(rho) = x for rho = exp(-u).

    rho Phi'(rho) is strictly decreasing in u.  Bracket around the
    leading-order guess by doubling, bisect to 1e-3 relative width, then
    polish with Newton steps (d/du of rho Phi' is -(rho d/drho)^2 Phi).
    """
    x = float(x)
    if not x >= 10:
        raise ValueError(f"x must be >= 10, got {x}")

    def excess(u):
        return phi_log_derivative_u(u, 1, table, l_extra).value - x

    u0 = 1.0 / saddle_scale_guess(x)
    lo = hi = u0
    f_lo = f_hi = excess(u0)
    try:
        for _ in range(_MAX_DOUBLINGS):
            if f_lo > 0:
                break
            lo /= 2.0
            f_lo = excess(lo)
        else:
            raise NumericalError(f"saddle bracket did not close below u={u0} for x={x}")
    except ResourceCapError as exc:
        if lo < u0 / 64:
            raise NumericalError(
                f"saddle bracket for x={x} ran from u={u0} down to u={lo} without closing"
            ) from exc
        raise
    for _ in range(_MAX_DOUBLINGS):
        if f_hi < 0:
            break
        hi *= 2.0
        f_hi = excess(hi)
    else:
        raise NumericalError(f"saddle bracket did not close above u={u0} for x={x}")

    while (hi - lo) > _BISECT_RTOL * lo:
        mid = 0.5 * (lo + hi)
        f_mid = excess(mid)
        if f_mid > 0:
            lo = mid
        elif f_mid < 0:
            hi = mid
        else:
            lo = hi = mid
    u = 0.5 * (lo + hi)

    residual = excess(u)
    for _ in range(_MAX_NEWTON):
        if abs(residual) <= RESIDUAL_RTOL * x:
            break
        slope = phi_log_derivative_u(u, 2, table, l_extra).value
        u_new = u + residual / slope
        if not lo <= u_new <= hi:
            raise NumericalError(f"Newton step left the bracket at x={x}")
        u = u_new
        residual = excess(u)
    else:
        raise NumericalError(f"Newton did not reach residual {RESIDUAL_RTOL} at x={x}")
    return SaddlePoint(x, math.exp(-u), 1.0 / u, residual)


# ---------------------------------------------------------------------------
# estimates (natural logs)
# ---------------------------------------------------------------------------

def _check_regime(n):
    if n < ASYMPTOTIC_MIN_N:
        raise ValueError(f"n below asymptotic regime (n={n} < {ASYMPTOTIC_MIN_N})")


def main_estimate_log(n: int, table: MembershipTable = None, l_extra: float = 0.0) -> LogEstimate:
    """log of rho^-n Psi(rho) / sqrt(2 pi (rho d/drho)^2 Phi(rho)) at the saddle."""
    _check_regime(n)
    sp = solve_saddle(n, table, l_extra)
    u = sp.u
    phi0 = phi_log_derivative_u(u, 0, table, l_extra).value
    phi2 = phi_log_derivative_u(u, 2, table, l_extra).value
    if not phi2 > 0:
        raise NumericalError(f"non-positive second log-derivative at n={n}")
    log_value = n * u + phi0 - 0.5 * math.log(2.0 * math.pi * phi2)
    return LogEstimate(int(n), log_value, "main", sp)


def difference_estimate_log(n: int, table: MembershipTable = None, l_extra: float = 0.0) -> LogEstimate:
    """Main estimate times log(1/rho), i.e. the predicted p(n+1) - p(n)."""
    main = main_estimate_log(n, table, l_extra)
    return LogEstimate(main.n, main.log_value + math.log(main.saddle.u), "difference", main.saddle)


def simple_estimate_log(n: int, K: float = None) -> LogEstimate:
    """Closed form with the bare leading exponent; no saddle solve.

    Only log(estimate) / log(p(n)) tends to 1: the o(1) inside the
    exponential is dropped, so the ratio of the counts themselves does not
    converge.
    """
    _check_regime(n)
    K = landau_ramanujan_value() if K is None else K
    ln = math.log(n)
    exponent = 2.0**0.75 * math.pi * math.sqrt(K / 3.0) * math.sqrt(n) * ln**-0.25
    prefactor = math.log(2.0**-1.125 * (K / 3.0) ** 0.25) - 0.75 * ln - 0.125 * math.log(ln)
    return LogEstimate(int(n), exponent + prefactor, "simple", None)


def growth_rate_reference(n: float, K: float = None) -> float:
    """pi sqrt(K/3) n^(-1/2) (2 log n)^(-1/4), the leading (p(n+1)-p(n))/p(n)."""
    K = landau_ramanujan_value() if K is None else K
    return math.pi * math.sqrt(K / 3.0) / math.sqrt(n) * (2.0 * math.log(n)) ** -0.25


def prop_p_reference(x: float, which: str, m: int = None, K: float = None) -> float:
    """Closed-form large-x behaviour of the saddle quantities.

    ``p1``: x log(1/rho(x)); ``p2``: Phi(rho(x)), both with the
    -(1/8) log log x / log x correction; ``p3``: leading term of
    (rho d/drho)^m Phi(rho(x)) for m >= 1.
    """
    if not x >= math.exp(math.e):
        raise ValueError(f"x must be >= e^e, got {x}")
    K = landau_ramanujan_value() if K is None else K
    lx = math.log(x)
    if which in ("p1", "p2"):
        lead = math.pi * math.sqrt(K / 3.0) * math.sqrt(x) * (2.0 * lx) ** -0.25
        return lead * (1.0 - 0.125 * math.log(lx) / lx)
    if which == "p3":
        if m is None or m < 1:
            raise ValueError("p3 needs m >= 1")
        base = 3.0 * math.sqrt(2.0 * lx) / (K * math.pi**2)
        return x ** ((m + 1) / 2.0) * base ** ((m - 1) / 2.0) * math.gamma(m + 1)
    raise ValueError(f"which must be p1, p2 or p3, got {which!r}")


def lemma_deriv_reference(X: float, m: int, K: float = None) -> float:
    """K zeta(2) Gamma(m+1) X^(m+1) / sqrt(log X)."""
    if not X >= 10:
        raise ValueError(f"X must be >= 10, got {X}")
    if not 0 <= m <= MAX_ORDER:
        raise ValueError(f"m must lie in 0..{MAX_ORDER}, got {m}")
    K = landau_ramanujan_value() if K is None else K
    return K * (math.pi**2 / 6.0) * math.gamma(m + 1) * X ** (m + 1) / math.sqrt(math.log(X))
