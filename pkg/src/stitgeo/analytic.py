"""Closed-form and quadrature evaluation of the distributional formulas.

Conventions: ``d`` is the space dimension, ``k`` the dimension of the
maximal polytope, ``j`` the weighting index (j = 0 typical, j = k volume
weighted).  For maximal segments (k = 1) the two weighting modes are named
``typical`` and ``lengthweighted``.

The joint birth-time density of the V_j-weighted typical maximal k-polytope
is ``(d-j) (d-k-1)! s_{d-k}^{k-j} / t^{d-j}`` on the ordered simplex
``0 < s_1 < ... < s_{d-k} < t``.  The internal-vertex probabilities of the
typical / length-weighted typical maximal segment are (d-1)-fold integrals
over that simplex; with ``sigma`` the last birth time, ``x`` the sum of the
earlier ones and ``A = d t - 2 sigma - x``:

    p_typ(n) = d (d-2)!  * I[ sigma^2 / t^d     * A^n / (sigma + A)^(n+1) ]
    p_lw(n)  = (n+1)(d-1)! * I[ sigma^2 / t^(d-1) * A^n / (sigma + A)^(n+2) ]

Both are independent of the time horizon and of the hyperplane measure; no
function in this module takes a directional distribution.

The inner (d-2)-fold integral depends on the inner variables only through
their sum, so it collapses to a 1-d integral against the Irwin-Hall density
(sum of d-2 iid uniforms); a direct nested Gauss-Legendre route is kept for
d <= 4 as an independent cross-check.  For large ``n`` the integrand
concentrates in a boundary layer ``sigma = O(t/n)``, which is resolved by a
substitution onto an exponential scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TYPICAL = "typical"
LENGTH_WEIGHTED = "lengthweighted"
MODES = (TYPICAL, LENGTH_WEIGHTED)

# exact d = 3 length-weighted constants (natural-log closed forms)
P11_0_EXACT = "5 + 18*log(2) - (63/4)*log(3)"
P11_1_EXACT = "28 + 90*log(2) - (657/8)*log(3)"
P10_0_D2_EXACT = "8*log(2) - 5"


def p11_0_closed_form() -> float:
    return 5.0 + 18.0 * math.log(2.0) - 63.0 / 4.0 * math.log(3.0)


def p11_1_closed_form() -> float:
    return 28.0 + 90.0 * math.log(2.0) - 657.0 / 8.0 * math.log(3.0)


def p10_0_d2_closed_form() -> float:
    return 8.0 * math.log(2.0) - 5.0


class AnalyticError(ValueError):
    pass


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise AnalyticError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class BirthTimeLaw:
    """Index set (d, k, j, t) of a weighted typical maximal polytope."""

    d: int
    k: int
    j: int
    t: float

    def __post_init__(self):
        if self.d < 1:
            raise AnalyticError("d must be >= 1")
        if not 0 <= self.k <= self.d - 1:
            raise AnalyticError("k must lie in {0, ..., d-1}")
        if not 0 <= self.j <= self.k:
            raise AnalyticError("j must lie in {0, ..., k}")
        if self.t <= 0:
            raise AnalyticError("t must be positive")


def birth_time_density(law: BirthTimeLaw, s) -> float:
    """Joint density of the ordered birth times at ``s = (s_1, ..., s_{d-k})``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if len(s) != law.d - law.k:
        raise AnalyticError(
            f"expected {law.d - law.k} birth times, got {len(s)}"
        )
    if not (np.all(np.diff(s) > 0.0) if len(s) > 1 else True):
        return 0.0
    if not (0.0 < s[0] and s[-1] < law.t):
        return 0.0
    c = (law.d - law.j) * math.factorial(law.d - law.k - 1)
    return c * s[-1] ** (law.k - law.j) / law.t ** (law.d - law.j)


def last_birth_time_density(d: int, j: int, t: float, s) -> float:
    """Marginal density of the last birth time: (d-j) s^(d-j-1) / t^(d-j)."""
    if not 0 <= j <= d - 1:
        raise AnalyticError("j must lie in {0, ..., d-1}")
    s = float(s)
    if s <= 0.0 or s >= t:
        return 0.0
    return (d - j) * s ** (d - j - 1) / t ** (d - j)


def last_birth_time_cdf(d: int, j: int, t: float, s) -> float:
    s = np.asarray(s, dtype=float)
    return np.clip(s / t, 0.0, 1.0) ** (d - j)


# ---------------------------------------------------------------------------
# conditional internal-vertex law


def _mode_j(mode: str) -> int:
    return 0 if _check_mode(mode) == TYPICAL else 1


def p_n_given_birth_times(d: int, mode: str, n: int, s, t: float) -> float:
    """P(N = n) for a maximal segment given its d-1 ordered birth times.

    With ``sigma`` the last birth time and ``A = d t - 2 sigma - sum of the
    others``, the law is ``sigma A^n / (sigma+A)^(n+1)`` for the typical mode
    and ``(n+1) sigma^2 A^n / (sigma+A)^(n+2)`` for the length-weighted one.
    """
    _check_mode(mode)
    if n < 0:
        raise AnalyticError("n must be nonnegative")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if len(s) != d - 1:
        raise AnalyticError(f"expected {d - 1} birth times, got {len(s)}")
    if len(s) > 1 and not np.all(np.diff(s) > 0.0):
        raise AnalyticError("birth times must be strictly increasing")
    if not (0.0 < s[0] and s[-1] <= t):
        raise AnalyticError("birth times must lie in (0, t]")
    sigma = float(s[-1])
    a = d * t - 2.0 * sigma - float(np.sum(s[:-1]))
    tot = sigma + a
    if a <= 0.0:
        return 1.0 if n == 0 else 0.0
    if mode == TYPICAL:
        return sigma * a**n / tot ** (n + 1)
    return (n + 1) * sigma**2 * a**n / tot ** (n + 2)


# ---------------------------------------------------------------------------
# quadrature machinery


@lru_cache(maxsize=None)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gl(order: int, a: float, b: float):
    x, w = _leggauss(order)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


@lru_cache(maxsize=None)
def _irwin_hall_nodes(k: int, order: int):
    """Nodes/weights for integrating against the Irwin-Hall(k) density.

    Piecewise per unit interval so that the piecewise-polynomial density is
    integrated exactly by the Gauss rule.
    """
    if k == 0:
        return np.array([0.0]), np.array([1.0])
    xs, ws = [], []
    for piece in range(k):
        x, w = _gl(order, float(piece), float(piece + 1))
        xs.append(x)
        ws.append(w * _irwin_hall_pdf(k, x))
    return np.concatenate(xs), np.concatenate(ws)


def _irwin_hall_pdf(k: int, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j in range(k + 1):
        out += (-1.0) ** j * math.comb(k, j) * np.where(x > j, (x - j) ** (k - 1), 0.0)
    return out / math.factorial(k - 1)


def _integrand_factors(d: int, mode: str, sigma, w, t: float):
    """(A, sigma + A) for last birth time sigma and inner sum x = sigma * w."""
    x = sigma * w
    a = d * t - 2.0 * sigma - x
    return a, a + sigma


def _p_internal_irwin_hall(d, mode, ns, t, order):
    """Vectorized p(n) for all n in ns via the Irwin-Hall collapse."""
    k = d - 2
    sig, wsig = _gl(order, 0.0, t)
    wih, wwih = _irwin_hall_nodes(k, order)
    S = sig[:, None]
    W = wih[None, :]
    a, tot = _integrand_factors(d, mode, S, W, t)
    r = a / tot
    if mode == TYPICAL:
        base = d * (S**d / t**d) / tot
    else:
        base = (d - 1) * (S**d / t ** (d - 1)) / tot**2
    weights = wsig[:, None] * wwih[None, :]
    out = np.empty(len(ns))
    rn = np.ones_like(r)
    want = {n: i for i, n in enumerate(ns)}
    nmax = max(ns)
    for n in range(nmax + 1):
        if n > 0:
            rn = rn * r
        if n in want:
            val = base * rn
            if mode == LENGTH_WEIGHTED:
                val = val * (n + 1)
            out[want[n]] = float(np.sum(weights * val))
    return out


def _p_internal_layer(d, mode, n, t, order):
    """Large-n evaluation: substitute sigma = t*v/n to resolve the layer."""
    k = d - 2
    cut = min(1.0, 40.0 / max(n, 1))
    # inner region (boundary layer) plus the remaining smooth region
    total = 0.0
    for lo, hi, orr in ((0.0, cut * t, 2 * order), (cut * t, t, order)):
        if hi <= lo:
            continue
        sig, wsig = _gl(orr, lo, hi)
        wih, wwih = _irwin_hall_nodes(k, order)
        S = sig[:, None]
        W = wih[None, :]
        a, tot = _integrand_factors(d, mode, S, W, t)
        r = a / tot
        if mode == TYPICAL:
            base = d * (S**d / t**d) / tot
        else:
            base = (n + 1) * (d - 1) * (S**d / t ** (d - 1)) / tot**2
        with np.errstate(divide="ignore"):
            val = base * np.exp(n * np.log(r))
        total += float(np.sum(wsig[:, None] * wwih[None, :] * val))
    return total


def p_internal(
    d: int, mode: str, n: int, t: float = 1.0, *, order: int = 64, method: str = "auto"
) -> float:
    """P(typical / length-weighted typical maximal segment has n internal
    vertices), independent of t and of the hyperplane measure."""
    _check_mode(mode)
    if d < 2:
        raise AnalyticError("d must be >= 2")
    if n < 0:
        raise AnalyticError("n must be nonnegative")
    if method == "auto":
        method = "nested" if (d <= 4 and n <= 64) else "irwin-hall"
    if method == "nested":
        if d > 4:
            raise AnalyticError("nested quadrature supported for d <= 4")
        return _p_internal_nested(d, mode, n, t, order)
    if method != "irwin-hall":
        raise AnalyticError(f"unknown method {method!r}")
    if n > 64:
        return _p_internal_layer(d, mode, n, t, order)
    return float(_p_internal_irwin_hall(d, mode, [n], t, order)[0])


def _p_internal_nested(d, mode, n, t, order):
    """Direct nested Gauss-Legendre over the ordered simplex (d <= 4)."""
    sig, wsig = _gl(order, 0.0, t)
    if d == 2:
        x = np.zeros_like(sig)
        w_inner = np.ones_like(sig)
        a = d * t - 2.0 * sig - x
        tot = a + sig
        core = (a / tot) ** n
        if mode == TYPICAL:
            vals = d * sig**2 / t**d * core / tot * w_inner
        else:
            vals = (n + 1) * (d - 1) * sig**2 / t ** (d - 1) * core / tot**2 * w_inner
        return float(np.sum(wsig * vals))
    total = 0.0
    for s_last, w_last in zip(sig, wsig):
        if d == 3:
            s1, w1 = _gl(order, 0.0, s_last)
            x = s1
            wts = w1
        else:  # d == 4: inner ordered pair 0 < s1 < s2 < s_last
            s2, w2 = _gl(order, 0.0, s_last)
            xs, wts_l = [], []
            for v2, b2 in zip(s2, w2):
                s1, w1 = _gl(order, 0.0, v2)
                xs.append(s1 + v2)
                wts_l.append(w1 * b2)
            x = np.concatenate(xs)
            wts = np.concatenate(wts_l)
        a = d * t - 2.0 * s_last - x
        tot = a + s_last
        core = (a / tot) ** n
        if mode == TYPICAL:
            vals = d * math.factorial(d - 2) * s_last**2 / t**d * core / tot
        else:
            vals = (
                (n + 1)
                * math.factorial(d - 1)
                * s_last**2
                / t ** (d - 1)
                * core
                / tot**2
            )
        total += w_last * float(np.sum(wts * vals))
    return total


def p_internal_sum(
    d: int, mode: str, n_max: int, t: float = 1.0, *, order: int = 64
):
    """(sum of p(n), sum of n p(n)) for n <= n_max, plus the exact tails.

    The geometric series is summed in closed form inside the quadrature, so
    the tails carry no truncation error beyond the quadrature itself.
    """
    _check_mode(mode)
    k = d - 2
    sig, wsig = _gl(order, 0.0, t)
    wih, wwih = _irwin_hall_nodes(k, order)
    S = sig[:, None]
    W = wih[None, :]
    a, tot = _integrand_factors(d, mode, S, W, t)
    r = a / tot
    q = S / tot  # 1 - r
    weights = wsig[:, None] * wwih[None, :]
    N = n_max
    rn1 = r ** (N + 1)
    if mode == TYPICAL:
        base = d * (S**d / t**d) / tot
        sum_p = base * (1.0 - rn1) / q
        tail_p = base * rn1 / q
        # sum_{n<=N} n r^n = (r - (N+1) r^(N+1) + N r^(N+2)) / (1-r)^2
        sum_np = base * (r - (N + 1) * rn1 + N * rn1 * r) / q**2
        tail_np = base * (rn1 * ((N + 1) - N * r)) / q**2
    else:
        base = (d - 1) * (S**d / t ** (d - 1)) / tot**2
        # sum_{n<=N} (n+1) r^n and its tail
        sum_p = base * (1.0 - (N + 2) * rn1 + (N + 1) * rn1 * r) / q**2
        tail_p = base * rn1 * ((N + 2) - (N + 1) * r) / q**2
        # sum over n of n (n+1) r^n: closed forms via derivatives
        sum_all_np = base * 2.0 * r / q**3
        # tail: sum_{n>N} n(n+1) r^n
        tail_np = base * _tail_nn1(r, N)
        sum_np = sum_all_np - tail_np
    return (
        float(np.sum(weights * sum_p)),
        float(np.sum(weights * sum_np)),
        float(np.sum(weights * tail_p)),
        float(np.sum(weights * tail_np)),
    )


def _tail_nn1(r, N):
    """sum_{n>N} n (n+1) r^n.

    With a = N+1 and k = n - a this is r^a * sum_k (a+k)(a+k+1) r^k, and the
    inner sum splits into geometric moments:
    (a^2+a)/(1-r) + (2a+1) r/(1-r)^2 + r(1+r)/(1-r)^3.
    """
    q = 1.0 - r
    a = N + 1.0
    return r**a * ((a * a + a) / q + (2.0 * a + 1.0) * r / q**2 + r * (1.0 + r) / q**3)


def mean_internal(d: int, mode: str) -> float:
    """Mean internal-vertex count of the (length-weighted) typical maximal
    segment; infinite for the length-weighted segment in the plane."""
    _check_mode(mode)
    if d < 2:
        raise AnalyticError("d must be >= 2")
    if mode == TYPICAL:
        return 0.5 * (d * d - d + 2) / (d - 1)
    if d == 2:
        return math.inf
    return (d * d - 2 * d + 4) / (d - 2)


# ---------------------------------------------------------------------------
# segment length laws and the mixture identity


def segment_length_density(lambda_u: float, s: float, mode: str, x) -> float:
    """Length density of the (length-weighted) typical PHT(s) edge in
    direction u: exponential(lambda_u s), or Erlang(2, lambda_u s) when
    length weighted."""
    _check_mode(mode)
    if lambda_u <= 0.0 or s <= 0.0:
        raise AnalyticError("lambda_u and s must be positive")
    x = np.asarray(x, dtype=float)
    rate = lambda_u * s
    out = np.where(
        x < 0.0,
        0.0,
        rate * np.exp(-rate * x)
        if mode == TYPICAL
        else rate**2 * x * np.exp(-rate * x),
    )
    return out if out.ndim else float(out)


def segment_length_cdf(lambda_u: float, s: float, mode: str, x) -> float:
    _check_mode(mode)
    x = np.asarray(x, dtype=float)
    rate = lambda_u * s
    z = np.clip(rate * x, 0.0, None)
    if mode == TYPICAL:
        out = 1.0 - np.exp(-z)
    else:
        out = 1.0 - (1.0 + z) * np.exp(-z)
    return out if out.ndim else float(out)


def mixture_length_cdf(
    d: int, j: int, t: float, lambda_u: float, x, *, order: int = 96
):
    """Length CDF of the weighted typical maximal segment via the mixture
    over the last birth time: integral of the PHT(s) edge CDF against
    (d-j) s^(d-j-1) / t^(d-j)."""
    mode = TYPICAL if j == 0 else LENGTH_WEIGHTED
    s, w = _gl(order, 0.0, t)
    dens = (d - j) * s ** (d - j - 1) / t ** (d - j)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    for sv, wv, dv in zip(s, w, dens):
        out += wv * dv * segment_length_cdf(lambda_u, sv, mode, x)
    return out


def mixture_length_mean(d: int, j: int, t: float, lambda_u: float) -> float:
    """Mean length under the mixture; diverges (returns inf) when the mixing
    density cannot pay for the 1/s pole of the PHT edge mean, i.e. j = d-1."""
    mode_mean = 1.0 if j == 0 else 2.0  # exponential vs Erlang-2 mean factor
    if d - j - 2 < 0:
        return math.inf
    # integral of (d-j) s^(d-j-1)/t^(d-j) * mode_mean/(lambda_u s) ds
    return mode_mean * (d - j) / (lambda_u * (d - j - 1) * t)


def mixture_check(d: int, j: int, t: float, lambda_u: float, f):
    """Evaluate E f for the weighted typical maximal segment through the
    PHT mixture identity.  ``f`` is ``"mean"`` or ``("cdf", grid)``."""
    if f == "mean":
        return mixture_length_mean(d, j, t, lambda_u)
    if isinstance(f, tuple) and len(f) == 2 and f[0] == "cdf":
        return mixture_length_cdf(d, j, t, lambda_u, f[1])
    raise AnalyticError("supported statistics: 'mean' or ('cdf', grid)")
