"""Achievable per-user GDOF of the symmetric MIMO interference channel.

Four schemes are covered: treating interference as noise, zero-forcing at
the receivers, interference alignment, and a Han-Kobayashi style rate split.
All values are exact rationals in ``alpha = log INR / log SNR``.

Each scheme is available two ways: a pointwise closed form and an exact
piecewise-linear curve over ``alpha`` used to locate regime boundaries. The
test suite checks the two against each other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .channel import AlphaLike, SymmetricConfig, as_alpha
from .errors import GdofDomainError
from .piecewise import PiecewiseLinear, argmax_segments, pl_max, pl_min

HALF = Fraction(1, 2)
ONE = Fraction(1)


class Scheme(str, enum.Enum):
    NOISE = "NOISE"
    ZF = "ZF"
    IA = "IA"
    HK = "HK"

    def __str__(self) -> str:
        return self.value


def _require_inner_domain(config: SymmetricConfig) -> None:
    if config.M > config.N:
        raise GdofDomainError("M <= N", str(config))
    if config.K * config.M <= config.N:
        raise GdofDomainError("K*M > N", str(config))


def near_saturated(config: SymmetricConfig) -> bool:
    """``N/M < K <= N/M + 1``, checked by integer cross-multiplication."""
    K, M, N = config.K, config.M, config.N
    return N < K * M <= N + M


def ia_applicable(config: SymmetricConfig) -> bool:
    return config.K > config.R


# --------------------------------------------------------------------------
# pointwise closed forms


def gdof_noise(config: SymmetricConfig, alpha: AlphaLike) -> Fraction:
    """Per-user GDOF when every receiver treats interference as noise."""
    _require_inner_domain(config)
    a = as_alpha(alpha)
    K, M, N = config.K, config.M, config.N
    if near_saturated(config):
        d = M + (N - K * M) * a
    else:
        d = M * (1 - a)
    return max(Fraction(0), Fraction(d))


def gdof_zf(config: SymmetricConfig, alpha: AlphaLike = 0) -> Fraction:
    """Zero-forcing receivers; independent of ``alpha``."""
    as_alpha(alpha)
    return min(Fraction(config.M), Fraction(config.N, config.K))


def gdof_ia(config: SymmetricConfig, alpha: AlphaLike = 0) -> Fraction:
    """Interference alignment over time-varying channels; independent of ``alpha``."""
    as_alpha(alpha)
    if not ia_applicable(config):
        raise GdofDomainError("K > R", f"K={config.K}, R={config.R}")
    R = config.R
    return Fraction(R * min(config.M, config.N), R + 1)


def gdof_hk(config: SymmetricConfig, alpha: AlphaLike) -> Fraction:
    """Rate-split scheme with private power set so private INR is at noise level."""
    _require_inner_domain(config)
    a = as_alpha(alpha)
    K, M, N = config.K, config.M, config.N
    case_a = near_saturated(config)
    if a <= HALF:
        return M * (1 - a) + Fraction((N - M) * a, K - 1)
    if a <= ONE:
        common_cap = N * a / K
        if case_a:
            other = (M * ((2 * K - 1) * a - K) + N * (1 - a)) / (K - 1)
        else:
            other = (N * a - M * (1 - a)) / (K - 1)
        return M * (1 - a) + min(common_cap, other)
    if case_a:
        return min(Fraction(M), ((K - 1) * M * a + N - (K - 1) * M) / K)
    return min(Fraction(M), N * a / K)


_POINTWISE = {
    Scheme.NOISE: gdof_noise,
    Scheme.ZF: gdof_zf,
    Scheme.IA: gdof_ia,
    Scheme.HK: gdof_hk,
}


def available_schemes(config: SymmetricConfig, constant_channel: bool = False) -> tuple:
    schemes = [Scheme.NOISE, Scheme.ZF, Scheme.HK]
    if ia_applicable(config) and not constant_channel:
        schemes.append(Scheme.IA)
    return tuple(schemes)


def scheme_value(scheme: Scheme, config: SymmetricConfig, alpha: AlphaLike) -> Fraction:
    return _POINTWISE[Scheme(scheme)](config, alpha)


@dataclass(frozen=True)
class InnerResult:
    value: Fraction
    active: frozenset


def gdof_inner_combined(
    config: SymmetricConfig, alpha: AlphaLike, constant_channel: bool = False
) -> InnerResult:
    """Best achievable GDOF over all applicable schemes, with every maximizer.

    IA is dropped for constant channels and when ``K <= R``. If ``K*M <= N``
    each receiver can zero-force all interference, so ``M`` is achieved by ZF.
    """
    a = as_alpha(alpha)
    if config.M > config.N:
        raise GdofDomainError("M <= N", str(config))
    if config.K * config.M <= config.N:
        return InnerResult(Fraction(config.M), frozenset({Scheme.ZF}))
    vals = {s: scheme_value(s, config, a) for s in available_schemes(config, constant_channel)}
    best = max(vals.values())
    return InnerResult(best, frozenset(s for s, v in vals.items() if v == best))


# --------------------------------------------------------------------------
# exact curves over alpha


def _lin(slope, intercept) -> PiecewiseLinear:
    return PiecewiseLinear.linear(slope, intercept)


def _const(c) -> PiecewiseLinear:
    return PiecewiseLinear.constant(c)


def noise_curve(config: SymmetricConfig) -> PiecewiseLinear:
    _require_inner_domain(config)
    K, M, N = config.K, config.M, config.N
    line = _lin(N - K * M, M) if near_saturated(config) else _lin(-M, M)
    return line.maximum(_const(0))


def hk_curve(config: SymmetricConfig) -> PiecewiseLinear:
    _require_inner_domain(config)
    K, M, N = config.K, config.M, config.N
    weak = _lin(Fraction(N - M, K - 1) - M, M)
    private = _lin(-M, M)
    common_cap = _lin(Fraction(N, K), 0)
    if near_saturated(config):
        # (M((2K-1)a - K) + N(1-a)) / (K-1)
        other = _lin(Fraction(M * (2 * K - 1) - N, K - 1), Fraction(N - M * K, K - 1))
        strong = _lin(Fraction((K - 1) * M, K), Fraction(N - (K - 1) * M, K))
    else:
        other = _lin(Fraction(N + M, K - 1), Fraction(-M, K - 1))
        strong = common_cap
    moderate = private.add(pl_min([common_cap, other]))
    strong = pl_min([_const(M), strong])
    return PiecewiseLinear.splice([(0, weak), (HALF, moderate), (ONE, strong)])


def scheme_curve(scheme: Scheme, config: SymmetricConfig) -> PiecewiseLinear:
    scheme = Scheme(scheme)
    if scheme is Scheme.NOISE:
        return noise_curve(config)
    if scheme is Scheme.HK:
        return hk_curve(config)
    return _const(scheme_value(scheme, config, 0))


def inner_curve(config: SymmetricConfig, constant_channel: bool = False) -> PiecewiseLinear:
    return pl_max(scheme_curve(s, config) for s in available_schemes(config, constant_channel))


@dataclass(frozen=True)
class Regime:
    """Interval ``[lo, hi]`` of ``alpha`` (``hi=None`` means unbounded) and its best schemes."""

    lo: Fraction
    hi: Fraction | None
    active: frozenset
    slope: Fraction
    intercept: Fraction

    def value(self, alpha) -> Fraction:
        return self.slope * Fraction(alpha) + self.intercept


def active_scheme_regimes(config: SymmetricConfig, constant_channel: bool = False) -> list:
    """Split ``[0, inf)`` into intervals on which the best scheme set and curve are fixed.

    A new interval starts wherever the maximizing set changes or the combined
    curve has a kink. All endpoints are exact rationals.
    """
    named = {s: scheme_curve(s, config) for s in available_schemes(config, constant_channel)}
    return [
        Regime(seg.lo, seg.hi, seg.active, seg.value[0], seg.value[1])
        for seg in argmax_segments(named)
    ]


# --------------------------------------------------------------------------
# consolidated closed forms used as cross-checks


def combined_integer_ratio(config: SymmetricConfig, alpha: AlphaLike) -> Fraction | None:
    """Best of HK and IA when ``N/M`` is an integer, written regime by regime.

    Returns ``None`` when ``N/M`` is not an integer.
    """
    _require_inner_domain(config)
    if config.N % config.M:
        return None
    a = as_alpha(alpha)
    K, M, N = config.K, config.M, config.N
    q = N // M
    ia = Fraction(M * N, M + N)
    if a > ONE:
        if K == q + 1:
            knee = Fraction(M * (2 * K - 1) - N, M * (K - 1))
            if a < knee:
                return ((K - 1) * M * a + N - (K - 1) * M) / K
            return Fraction(M)
        if a <= Fraction(K * M, M + N):
            return ia
        if a < Fraction(K * M, N):
            return N * a / K
        return Fraction(M)
    if a >= HALF:
        if K == q + 1:
            if a <= Fraction(K, 2 * K - 1):
                return M * (1 - a) + (M * ((2 * K - 1) * a - K) + N * (1 - a)) / (K - 1)
            return M * (1 - a) + N * a / K
        if K == q + 2:
            if a <= Fraction(K * M, N + K * M):
                return M * (1 - a) + (N * a - M * (1 - a)) / (K - 1)
            if a <= Fraction(K * M * M, (M + N) * (K * M - N)):
                return M * (1 - a) + N * a / K
            return ia
        return ia
    weak = M * (1 - a) + Fraction((N - M) * a, K - 1)
    if K > q + 2:
        knee = Fraction(M * M) / (M * (N + M) - Fraction(N * N - M * M, K - 1))
        return weak if a <= knee else ia
    return weak


def large_k_regimes(config: SymmetricConfig) -> list:
    """Scheme intervals for ``K >= N/M + 4`` as ``(lo, hi, scheme, curve)`` tuples.

    ``curve`` maps ``alpha`` to the GDOF on that interval and ``hi=None``
    marks the unbounded tail.
    """
    _require_inner_domain(config)
    K, M, N = config.K, config.M, config.N
    if K * M < N + 4 * M:
        raise GdofDomainError("K >= N/M + 4", str(config))
    R = config.R
    ratio = Fraction(N, M)
    ia = Fraction(M * R, R + 1)
    ia_end = Fraction(M * K * R, N * (R + 1))
    hk_end = Fraction(M * K, N)

    def weak(a):
        return M * (1 - a) + (N - M) * a / (K - 1)

    def strong(a):
        return N * a / K

    def cap(a):
        return Fraction(M)

    def flat(a):
        return ia

    if R == 1:
        knee = Fraction((K - 1) - (R + 1)) / ((R + 1) * ((K - 1) - (ratio + 1)))

        def moderate(a):
            return M * (1 - a) + (N * a - M * (1 - a)) / (K - 1)

        head = [(Fraction(0), HALF, Scheme.HK, weak), (HALF, knee, Scheme.HK, moderate)]
    else:
        knee = Fraction(K - 1) / ((R + 1) * (K - ratio))
        head = [(Fraction(0), knee, Scheme.HK, weak)]
    return head + [
        (knee, ia_end, Scheme.IA, flat),
        (ia_end, hk_end, Scheme.HK, strong),
        (hk_end, None, Scheme.HK, cap),
    ]
