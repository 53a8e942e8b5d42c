"""Outer bounds on the per-user GDOF of the symmetric MIMO interference channel.

Three families are combined:

* ``lemma1``: let ``L1`` receivers cooperate and give a second group of
  ``L2`` receivers the first group's messages, then minimize over group
  sizes;
* ``lemma2``: give each receiver a noisy copy of one neighbour's received
  signal;
* ``lemma3``: chain side information across all users, valid only when
  ``N/M < K <= N/M + 1``.

Every value is an exact rational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .channel import AlphaLike, SymmetricConfig, as_alpha
from .errors import GdofDomainError
from .inner import Regime, near_saturated
from .piecewise import PiecewiseLinear, argmax_segments, pl_min

HALF = Fraction(1, 2)
ONE = Fraction(1)


class Bound(str, enum.Enum):
    LEMMA1 = "LEMMA1"
    LEMMA2 = "LEMMA2"
    LEMMA3 = "LEMMA3"
    INTERFERENCE_FREE = "INTERFERENCE_FREE"

    def __str__(self) -> str:
        return self.value


def _pos(x: int) -> int:
    return x if x > 0 else 0


def partitions(K: int) -> list:
    """All ``(L1, L2)`` with ``L1, L2 >= 0`` and ``1 <= L1 + L2 <= K``."""
    return [(l1, l2) for l1 in range(K + 1) for l2 in range(K + 1 - l1) if l1 + l2 >= 1]


def _check_partition(config: SymmetricConfig, part) -> tuple:
    l1, l2 = part
    if l1 < 0 or l2 < 0 or not 1 <= l1 + l2 <= config.K:
        raise GdofDomainError("L1, L2 >= 0 and 1 <= L1 + L2 <= K", f"got {part}")
    return int(l1), int(l2)


def lemma1_partition_sum(config: SymmetricConfig, alpha: AlphaLike, part) -> Fraction:
    """Sum GDOF bound for one cooperation partition (not yet divided by ``L1 + L2``)."""
    a = as_alpha(alpha)
    l1, l2 = _check_partition(config, part)
    M, N = config.M, config.N
    r = min(l2 * M, l1 * N)
    spill = _pos(l2 * M - r)
    if M <= N:
        if a <= ONE:
            return (
                l1 * M
                + min(r, l1 * (N - M)) * a
                + spill
                + min(r, l2 * N - spill) * (1 - a)
            )
        return r * a + min(l1 * M, l1 * N - r) + spill
    seen = min(l2 * N, spill)
    if a <= ONE:
        return l1 * N + seen + min(min(l2 * N, r), l2 * N - seen) * (1 - a)
    return l1 * N + r * (a - 1) + seen


def lemma1_partition_value(config: SymmetricConfig, alpha: AlphaLike, part) -> Fraction:
    """Per-user bound from one cooperation partition ``(L1, L2)``."""
    l1, l2 = _check_partition(config, part)
    return Fraction(lemma1_partition_sum(config, alpha, part)) / (l1 + l2)


@lru_cache(maxsize=4096)
def _lemma1_lines(config: SymmetricConfig) -> tuple:
    """Integer ``(c0, c1, L, part)`` with ``sum = c0 + c1 * alpha`` per region.

    The partition sum is affine in ``alpha`` on ``[0, 1]`` and on ``[1, inf)``,
    so two evaluations per region pin it down.
    """
    lo, hi = [], []
    for part in partitions(config.K):
        L = part[0] + part[1]
        s0 = lemma1_partition_sum(config, 0, part)
        s1 = lemma1_partition_sum(config, 1, part)
        s2 = lemma1_partition_sum(config, 2, part)
        lo.append((int(s0), int(s1 - s0), L, part))
        hi.append((int(2 * s1 - s2), int(s2 - s1), L, part))
    return tuple(lo), tuple(hi)


@dataclass(frozen=True)
class Lemma1Result:
    value: Fraction
    argmin: frozenset


def lemma1_bound(config: SymmetricConfig, alpha: AlphaLike) -> Lemma1Result:
    """Exhaustive minimum of the partition bound over every admissible ``(L1, L2)``."""
    a = as_alpha(alpha)
    lo, hi = _lemma1_lines(config)
    lines = lo if a <= ONE else hi
    p, q = a.numerator, a.denominator
    best_num, best_den, arg = None, None, []
    # compare (c0*q + c1*p) / (L*q) by cross-multiplication, q cancels
    for c0, c1, L, part in lines:
        num = c0 * q + c1 * p
        if best_num is None or num * best_den < best_num * L:
            best_num, best_den, arg = num, L, [part]
        elif num * best_den == best_num * L:
            arg.append(part)
    return Lemma1Result(Fraction(best_num, best_den * q), frozenset(arg))


def interference_free(config: SymmetricConfig) -> Fraction:
    return Fraction(min(config.M, config.N))


def lemma2_bound(config: SymmetricConfig, alpha: AlphaLike) -> Fraction:
    """Bound from giving each receiver a noisy view of a neighbour's signal."""
    a = as_alpha(alpha)
    K, M, N = config.K, config.M, config.N
    rmin, rmax = min(M, N), max(M, N)
    rp = min(N, (K - 1) * M)
    if a <= HALF:
        return rmin * (1 - a) + min(rp, rmax - rmin) * a
    if a <= ONE:
        return rp * a + min(rmin, rmax - rp) * (1 - a)
    return interference_free(config)


def lemma3_applicable(config: SymmetricConfig) -> bool:
    return near_saturated(config)


def lemma3_bound(config: SymmetricConfig, alpha: AlphaLike) -> Fraction:
    """Chained side-information bound; only defined for ``N/M < K <= N/M + 1``."""
    a = as_alpha(alpha)
    if not lemma3_applicable(config):
        raise GdofDomainError("N/M < K <= N/M + 1", str(config))
    K, M, N = config.K, config.M, config.N
    if a <= HALF:
        return M * (1 - a) + Fraction((N - M) * a, K - 1)
    if a <= ONE:
        return M * a + Fraction(N - M, K - 1) * (1 - a)
    return Fraction(M)


@dataclass(frozen=True)
class BoundReport:
    value: Fraction
    active: frozenset
    partitions: frozenset = field(default_factory=frozenset)


def outer_components(config: SymmetricConfig, alpha: AlphaLike) -> dict:
    """Each applicable outer bound at ``alpha`` keyed by :class:`Bound`."""
    a = as_alpha(alpha)
    vals = {
        Bound.LEMMA1: lemma1_bound(config, a).value,
        Bound.LEMMA2: lemma2_bound(config, a),
        Bound.INTERFERENCE_FREE: interference_free(config),
    }
    if lemma3_applicable(config):
        vals[Bound.LEMMA3] = lemma3_bound(config, a)
    return vals


def outer_combined(config: SymmetricConfig, alpha: AlphaLike) -> BoundReport:
    """Tightest outer bound at ``alpha`` and every bound attaining it.

    Above ``alpha = 1`` the side-information bounds are only the cap, so
    they are not reported as active there. A partition with an empty group
    is the interference-free bound itself, so the cooperation bound counts
    as active only when a two-group partition attains the minimum.
    """
    a = as_alpha(alpha)
    l1 = lemma1_bound(config, a)
    vals = outer_components(config, a)
    best = min(vals.values())
    active = {b for b, v in vals.items() if v == best}
    if a > ONE:
        active -= {Bound.LEMMA2, Bound.LEMMA3}
    if Bound.LEMMA1 in active and all(0 in part for part in l1.argmin):
        active.discard(Bound.LEMMA1)
        active.add(Bound.INTERFERENCE_FREE)
    return BoundReport(best, frozenset(active), l1.argmin)


def _affine_pieces(fn, starts) -> PiecewiseLinear:
    """Exact curve of ``fn``, assumed affine between consecutive ``starts``."""
    lines = []
    for k, lo in enumerate(starts):
        hi = starts[k + 1] if k + 1 < len(starts) else lo + 2
        x0, x1 = lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3
        y0, y1 = fn(x0), fn(x1)
        slope = (y1 - y0) / (x1 - x0)
        lines.append((slope, y0 - slope * x0))
    return PiecewiseLinear(tuple(Fraction(s) for s in starts), tuple(lines)).simplify()


def bound_curves(config: SymmetricConfig) -> dict:
    """Each outer bound as an exact piecewise-linear curve of ``alpha``."""
    curves = {
        Bound.LEMMA1: pl_min(
            _affine_pieces(lambda a, p=part: lemma1_partition_value(config, a, p), (0, ONE))
            for part in partitions(config.K)
        ),
        Bound.LEMMA2: _affine_pieces(lambda a: lemma2_bound(config, a), (0, HALF, ONE)),
        Bound.INTERFERENCE_FREE: PiecewiseLinear.constant(interference_free(config)),
    }
    if lemma3_applicable(config):
        curves[Bound.LEMMA3] = _affine_pieces(lambda a: lemma3_bound(config, a), (0, HALF, ONE))
    return curves


def active_bound_regimes(config: SymmetricConfig) -> list:
    """Split ``[0, inf)`` into intervals on which the active bound set and curve are fixed.

    Labels follow :func:`outer_combined` at each interval's midpoint.
    """
    negated = {
        b: PiecewiseLinear(f.starts, tuple((-s, -c) for s, c in f.lines))
        for b, f in bound_curves(config).items()
    }
    out: list = []
    for seg in argmax_segments(negated):
        slope, intercept = -seg.value[0], -seg.value[1]
        # labelling rules change at the region seams even where values do not
        inner_cuts = [x for x in (HALF, ONE) if seg.lo < x and (seg.hi is None or x < seg.hi)]
        edges = [seg.lo, *inner_cuts, seg.hi]
        for lo, hi in zip(edges, edges[1:]):
            mid = (lo + hi) / 2 if hi is not None else lo + 1
            active = outer_combined(config, mid).active
            if out and out[-1].active == active and (out[-1].slope, out[-1].intercept) == (slope, intercept):
                out[-1] = Regime(out[-1].lo, hi, active, slope, intercept)
            else:
                out.append(Regime(lo, hi, active, slope, intercept))
    return out


# --------------------------------------------------------------------------
# closed-form summary for M <= N


def closed_form_case(config: SymmetricConfig) -> int | None:
    """Which closed form covers ``config``: 2, 1 or ``None``.

    The near-saturated case takes precedence because the chained bound can
    be strictly tighter than the cooperation bound there.
    """
    K, M, N = config.K, config.M, config.N
    if M > N:
        return None
    if near_saturated(config):
        return 2
    if K >= M + N:
        return 1
    if N % M == 0 and N + M < K * M and K < M + N:
        return 1
    return None


def theorem4_closed_form(config: SymmetricConfig, alpha: AlphaLike) -> BoundReport | None:
    """Closed-form outer bound for the configurations it covers, else ``None``.

    ``active`` names the bound family that supplies the value on the
    interval containing ``alpha``.
    """
    a = as_alpha(alpha)
    case = closed_form_case(config)
    if case is None:
        return None
    K, M, N = config.K, config.M, config.N
    L1, L2, L3 = Bound.LEMMA1, Bound.LEMMA2, Bound.LEMMA3
    if case == 1:
        cooperative = M - Fraction(M * M, M + N) * a
        lemma2_wins = M * N >= N * N - M * M
        if a <= HALF:
            if not lemma2_wins:
                return BoundReport(cooperative, frozenset({L1}))
            return BoundReport(M * (1 - a) + (N - M) * a, frozenset({L2}))
        if a <= ONE:
            if not lemma2_wins:
                return BoundReport(cooperative, frozenset({L1}))
            if a <= Fraction(M * (M + N), N * (M + N) + M * M):
                return BoundReport(N * a, frozenset({L2}))
            return BoundReport(cooperative, frozenset({L1}))
        if a <= Fraction(M + N, N):
            return BoundReport(Fraction(M * N, M + N) * a, frozenset({L1}))
        return BoundReport(Fraction(M), frozenset({L1}))
    if a <= HALF:
        return BoundReport(lemma3_bound(config, a), frozenset({L3}))
    if a <= ONE:
        if a <= Fraction(K, 2 * K - 1):
            return BoundReport(lemma3_bound(config, a), frozenset({L3}))
        return BoundReport(M * (1 - a) + N * a / K, frozenset({L1}))
    knee = Fraction(2 * K * M - (M + N), (K - 1) * M)
    if a <= knee:
        return BoundReport((N + (K - 1) * M * (a - 1)) / K, frozenset({L1}))
    return BoundReport(Fraction(M), frozenset({L1}))


def is_tight(config: SymmetricConfig, alpha: AlphaLike) -> bool:
    """Whether the achievable GDOF is known to meet the outer bound at ``alpha``."""
    a = as_alpha(alpha)
    return (config.M == config.N and a <= HALF) or near_saturated(config)


# --------------------------------------------------------------------------
# two-group bound with arbitrary antenna counts


def two_group_sum_gdof(M1: int, M2: int, N1: int, N2: int, alpha: AlphaLike) -> Fraction:
    """Sum GDOF bound for two cooperating groups with arbitrary antenna counts.

    Group 1 (``M1`` transmit, ``N1`` receive antennas) is decoded with full
    cooperation and its messages are handed to group 2. Generic channels
    make every rank the smaller matrix dimension.
    """
    a = as_alpha(alpha)
    r = min(M2, N1)
    own = min(M1, N1)
    rb = min(N2, M2 - r)
    ra = min(N2, r)
    if a <= ONE:
        first = own + min(r, N1 - own) * a
        second = rb + min(ra, N2 - rb) * (1 - a)
    else:
        first = r * a + min(own, N1 - r)
        second = Fraction(rb)
    return Fraction(first) + second


@dataclass(frozen=True)
class ZChannelCheck:
    dims: tuple
    bound: Fraction
    reference: Fraction

    @property
    def equal(self) -> bool:
        return self.bound == self.reference


def z_channel_dof_check(M1: int, M2: int, N1: int, N2: int) -> ZChannelCheck:
    """Compare the two-group bound at ``alpha = 1`` with the known Z-channel sum DOF."""
    for v in (M1, M2, N1, N2):
        if v < 1:
            raise GdofDomainError("antenna counts >= 1", f"got {(M1, M2, N1, N2)}")
    bound = two_group_sum_gdof(M1, M2, N1, N2, 1)
    reference = Fraction(min(max(N1, M2), M1 + M2, N1 + N2))
    return ZChannelCheck((M1, M2, N1, N2), bound, reference)
