"""Finite-SNR sum-rate bounds for one channel realization, in bits.

Each bound is a sum of conditional entropy terms ``log2 det Cov(y | s)``
where ``y`` is what some receivers observe and ``s`` is genie-provided side
information. A term can be built two ways:

* ``"woodbury"``: the closed matrix expressions, in which conditioning on a
  noisy view ``G_s x + z`` of a user group turns that group's contribution
  into ``G_y P^{1/2} (I + P^{1/2} G_s^H G_s P^{1/2})^{-1} P^{1/2} G_y^H``;
* ``"schur"``: the Schur complement of the joint Gaussian covariance.

The two are algebraically equal, which the tests exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import AlphaLike, ChannelRealization, PowerProfile, as_alpha, power_block
from .errors import GdofDomainError, ValidationError
from .linalg import (
    conditional_covariance,
    hermitian_sqrt,
    logdet_identity_plus,
    logdet_identity_plus_gram,
)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class OperatingPoint:
    """SNR ``rho`` (linear) and INR exponent ``alpha``, so INR = ``rho**alpha``."""

    rho: float
    alpha: Fraction

    def __post_init__(self):
        if not self.rho > 0 or not math.isfinite(self.rho):
            raise ValidationError("rho must be positive and finite")
        object.__setattr__(self, "alpha", as_alpha(self.alpha))

    def link_gain(self, j: int, i: int) -> float:
        """Amplitude scaling of the link from transmitter ``i`` to receiver ``j``."""
        if j == i:
            return math.sqrt(self.rho)
        return math.sqrt(self.rho ** float(self.alpha))


def operating_point(rho: float, alpha: AlphaLike) -> OperatingPoint:
    return OperatingPoint(float(rho), as_alpha(alpha))


@dataclass(frozen=True)
class Observation:
    """Signals seen at ``receivers`` from ``users``, plus each receiver's own noise.

    Links listed in ``exclude`` as ``(receiver, user)`` pairs are removed,
    which models messages a genie has already handed to that receiver.
    """

    receivers: tuple
    users: tuple
    exclude: frozenset = frozenset()


@dataclass(frozen=True)
class EntropyTerm:
    """``h(y | s_1, ..., s_n)`` with ``y`` and every ``s_k`` an :class:`Observation`.

    The conditioning observations must sit at receivers other than those of
    ``y`` and cover disjoint user sets, as in every bound below.
    """

    target: Observation
    given: tuple = ()


class _Scaled:
    """Scaled channel blocks ``G_ji`` for one realization and operating point."""

    def __init__(self, real: ChannelRealization, pt: OperatingPoint, gains=None):
        self.real = real
        self.pt = pt
        self._gain = gains or pt.link_gain

    def stack(self, receivers, users, exclude=frozenset()) -> np.ndarray:
        c = self.real.config
        receivers, users = list(receivers), list(users)
        if not receivers or not users:
            return np.zeros((len(receivers) * c.N, len(users) * c.M), dtype=np.complex128)
        zero = np.zeros((c.N, c.M))
        return np.block(
            [
                [zero if (j, i) in exclude else self._gain(j, i) * self.real.H[j][i] for i in users]
                for j in receivers
            ]
        ).astype(np.complex128)

    def view(self, obs: "Observation", users) -> np.ndarray:
        return self.stack(obs.receivers, users, obs.exclude)


def _check_term(term: EntropyTerm) -> None:
    seen: set = set()
    for obs in term.given:
        if set(obs.receivers) & set(term.target.receivers):
            raise ValidationError("side information must come from other receivers")
        if seen & set(obs.users):
            raise ValidationError("side-information user sets must be disjoint")
        seen |= set(obs.users)


def _woodbury_factor(term: EntropyTerm, g: _Scaled, power: PowerProfile) -> np.ndarray:
    """Factor ``F`` with ``Cov(y | s) = I + F F^H`` from the closed matrix form.

    ``(I + G_s^H G_s)^{-1}`` is applied through the SVD of ``G_s`` so that
    null directions stay exact at very large SNR.
    """
    y = term.target
    if any(not set(obs.users) <= set(y.users) for obs in term.given):
        raise ValidationError("closed form needs side-information users visible in the target")
    parts = []
    conditioned = set()
    for obs in term.given:
        users = [u for u in y.users if u in obs.users]
        conditioned |= set(users)
        if not users:
            continue
        sq = hermitian_sqrt(power_block(power, users))
        gy = g.view(y, users) @ sq
        gs = g.view(obs, users) @ sq
        _, sv, vh = np.linalg.svd(gs, full_matrices=True)
        shrink = np.ones(vh.shape[0])
        shrink[: sv.size] = 1.0 / np.sqrt(1.0 + sv * sv)
        parts.append(gy @ vh.conj().T * shrink)
    free = [u for u in y.users if u not in conditioned]
    parts.append(g.view(y, free) @ hermitian_sqrt(power_block(power, free)))
    return np.hstack(parts)


def _cross_cov(a: Observation, b: Observation, g: _Scaled, power: PowerProfile) -> np.ndarray:
    N = g.real.config.N
    common = [u for u in a.users if u in b.users]
    ga = g.view(a, common)
    gb = g.view(b, common)
    out = ga @ power_block(power, common) @ gb.conj().T
    for ia, ra in enumerate(a.receivers):
        for ib, rb in enumerate(b.receivers):
            if ra == rb:
                out[ia * N : (ia + 1) * N, ib * N : (ib + 1) * N] += np.eye(N)
    return out


def _schur_cov(term: EntropyTerm, g: _Scaled, power: PowerProfile) -> np.ndarray:
    y = term.target
    s_yy = _cross_cov(y, y, g, power)
    if not term.given:
        return s_yy
    s_ys = np.hstack([_cross_cov(y, s, g, power) for s in term.given])
    s_ss = np.block([[_cross_cov(s, t, g, power) for t in term.given] for s in term.given])
    return conditional_covariance(s_yy, s_ys, s_ss)


def term_covariance(
    term: EntropyTerm,
    real: ChannelRealization,
    power: PowerProfile,
    pt: OperatingPoint,
    form: str = "woodbury",
    gains=None,
) -> np.ndarray:
    """Conditional covariance of ``term`` built in the requested algebraic form."""
    _check_term(term)
    g = _Scaled(real, pt, gains)
    if form == "woodbury":
        f = _woodbury_factor(term, g, power)
        cov = np.eye(f.shape[0]) + f @ f.conj().T
        return 0.5 * (cov + cov.conj().T)
    if form == "schur":
        return _schur_cov(term, g, power)
    raise ValueError(f"unknown form {form!r}")


def term_bits(term, real, power, pt, form="woodbury", gains=None) -> float:
    """``log2 det Cov(y | s)``.

    The default form is accurate across the whole SNR ladder. The Schur form
    subtracts large nearly equal matrices and is meant for cross-checks at
    moderate SNR.
    """
    if form == "woodbury":
        _check_term(term)
        f = _woodbury_factor(term, _Scaled(real, pt, gains), power)
        return logdet_identity_plus_gram(f) / LN2
    cov = term_covariance(term, real, power, pt, form, gains)
    return logdet_identity_plus(cov - np.eye(cov.shape[0])) / LN2


# --------------------------------------------------------------------------
# the three genie-aided bounds


def _in_group_links(group) -> frozenset:
    return frozenset((j, i) for j in group for i in group if j != i)


def coop_terms(K: int, part, users: Sequence[int] | None = None) -> list:
    """Entropy terms of the two-group cooperation bound for ``part = (L1, L2)``.

    Group 1 is the first ``L1`` entries of ``users`` (default ``0..K-1``),
    group 2 the next ``L2``. Receivers in a group know the other messages of
    their own group, so in-group cross links drop out; group 2 additionally
    knows group 1's messages and sees what group 1 receives from group 2.
    """
    l1, l2 = part
    if l1 == 0 and l2 == 0:
        raise ValidationError("at least one cooperation group must be non-empty")
    if l1 < 0 or l2 < 0 or l1 + l2 > K:
        raise GdofDomainError("L1, L2 >= 0 and L1 + L2 <= K", f"got {part}")
    order = list(range(K)) if users is None else list(users)
    g1, g2 = tuple(order[:l1]), tuple(order[l1 : l1 + l2])
    terms = []
    if g1:
        terms.append(EntropyTerm(Observation(g1, g1 + g2, _in_group_links(g1))))
    if g2:
        given = (Observation(g1, g2),) if g1 else ()
        terms.append(EntropyTerm(Observation(g2, g2, _in_group_links(g2)), given))
    return terms


def coop_bound_rhs(
    real: ChannelRealization, power: PowerProfile, part, pt: OperatingPoint, form="woodbury"
) -> float:
    """Bound in bits on the sum rate of the ``L1 + L2`` users in the partition."""
    return sum(term_bits(t, real, power, pt, form) for t in coop_terms(real.config.K, part))


def sideinfo_terms(K: int, order: Sequence[int] | None = None) -> list:
    """Terms of the neighbour side-information bound, ``2(K-1)`` in total.

    Along the chain ``order``, each user except the last is conditioned on
    its successor's noisy view of it, and each user except the first on its
    predecessor's. The resulting sum bounds ``R_1 + 2 R_2 + ... + 2 R_{K-1} + R_K``.
    """
    order = list(range(K)) if order is None else list(order)
    if sorted(order) != list(range(K)):
        raise ValidationError("order must be a permutation of the users")
    everyone = tuple(range(K))
    terms = []
    for pos in range(K - 1):
        i, n = order[pos], order[pos + 1]
        terms.append(EntropyTerm(Observation((i,), everyone), (Observation((n,), (i,)),)))
    for pos in range(1, K):
        i, n = order[pos], order[pos - 1]
        terms.append(EntropyTerm(Observation((i,), everyone), (Observation((n,), (i,)),)))
    return terms


def end_pair_orders(K: int) -> list:
    """One chain per unordered choice of end users, interior users ascending."""
    orders = []
    for a in range(K):
        for b in range(a + 1, K):
            orders.append([a] + [u for u in range(K) if u not in (a, b)] + [b])
    return orders


def sideinfo_bound_rhs(
    real: ChannelRealization,
    power: PowerProfile,
    pt: OperatingPoint,
    order: Sequence[int] | None = None,
    form="woodbury",
    average: bool = False,
) -> float:
    """Bound in bits on ``R_1 + 2 R_2 + ... + 2 R_{K-1} + R_K`` along ``order``.

    With ``average=True`` the bound is averaged over the ``K(K-1)/2`` chains
    of :func:`end_pair_orders`; every chain carries total weight ``2(K-1)``,
    so the per-user normalization is unchanged.
    """
    K = real.config.K
    if average:
        orders = end_pair_orders(K)
        return sum(sideinfo_bound_rhs(real, power, pt, o, form) for o in orders) / len(orders)
    return sum(term_bits(t, real, power, pt, form) for t in sideinfo_terms(K, order))


def noisy_side_terms(K: int, order: Sequence[int] | None = None) -> list:
    """Terms of the chained side-information bound (``K >= 3``), users in chain ``order``.

    Positions below refer to places in ``order``. The end users see one
    neighbour's noisy view of themselves. Each interior position ``i``
    appears twice: once given the last receiver's view of positions
    ``0..i`` and the first receiver's view of ``i+1..K-1``, and once given
    the first receiver's view of ``{K-1, 1..i}`` and the last receiver's
    view of the rest.
    """
    if K < 3:
        raise GdofDomainError("K >= 3", f"K={K}")
    order = list(range(K)) if order is None else list(order)
    if sorted(order) != list(range(K)):
        raise ValidationError("order must be a permutation of the users")
    first, last = 0, K - 1
    everyone = tuple(range(K))
    terms = [
        EntropyTerm(Observation((first,), everyone), (Observation((last,), (first,)),)),
        EntropyTerm(Observation((last,), everyone), (Observation((first,), (last,)),)),
    ]
    for i in range(1, K - 1):
        head = tuple(range(0, i + 1))
        tail = tuple(range(i + 1, K))
        terms.append(
            EntropyTerm(
                Observation((i,), everyone),
                (Observation((last,), head), Observation((first,), tail)),
            )
        )
    for i in range(1, K - 1):
        seen_first = (last,) + tuple(range(1, i + 1))
        rest = tuple(u for u in everyone if u not in seen_first)
        terms.append(
            EntropyTerm(
                Observation((i,), everyone),
                (Observation((first,), seen_first), Observation((last,), rest)),
            )
        )
    return [_relabel(t, order) for t in terms]


def _relabel(term: EntropyTerm, order: Sequence[int]) -> EntropyTerm:
    def obs(o: Observation) -> Observation:
        return Observation(
            tuple(order[r] for r in o.receivers),
            tuple(order[u] for u in o.users),
            frozenset((order[r], order[u]) for r, u in o.exclude),
        )

    return EntropyTerm(obs(term.target), tuple(obs(g) for g in term.given))


def noisy_side_bound_rhs(
    real: ChannelRealization,
    power: PowerProfile,
    pt: OperatingPoint,
    order: Sequence[int] | None = None,
    form="woodbury",
) -> float:
    """Bound in bits on the weighted sum with weights ``1, 2, ..., 2, 1`` along ``order`` (``K >= 3``)."""
    return sum(
        term_bits(t, real, power, pt, form) for t in noisy_side_terms(real.config.K, order)
    )


def noise_treating_rate(
    real: ChannelRealization, power: PowerProfile, pt: OperatingPoint, j: int, gains=None
) -> float:
    """Rate in bits of user ``j`` decoding its signal with all interference as noise."""
    K = real.config.K
    others = tuple(i for i in range(K) if i != j)
    total = term_bits(EntropyTerm(Observation((j,), tuple(range(K)))), real, power, pt, gains=gains)
    noise = term_bits(EntropyTerm(Observation((j,), others)), real, power, pt, gains=gains)
    return total - noise


def hk_private_rate(
    real: ChannelRealization, power: PowerProfile, pt: OperatingPoint, j: int
) -> float:
    """Private-message rate of user ``j`` when private power arrives at noise level elsewhere.

    The direct link carries SNR ``rho**(1 - alpha)``, cross links unit gain.
    Only meaningful for ``alpha <= 1``.
    """
    if pt.alpha > 1:
        raise GdofDomainError("alpha <= 1", f"alpha={pt.alpha}")
    direct = math.sqrt(pt.rho ** float(1 - pt.alpha))

    def gains(r, t):
        return direct if r == t else 1.0

    return noise_treating_rate(real, power, pt, j, gains=gains)

