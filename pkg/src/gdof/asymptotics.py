"""Numerical high-SNR slope estimates checked against the exact GDOF formulas."""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import inner, outer
from .channel import AlphaLike, SymmetricConfig, as_alpha, default_power, sample_realization
from .errors import GdofDomainError, SlopeEstimationError
from .sumrate import (
    coop_bound_rhs,
    hk_private_rate,
    noise_treating_rate,
    noisy_side_bound_rhs,
    operating_point,
    sideinfo_bound_rhs,
)

DEFAULT_LADDER = tuple(10.0**k for k in range(6, 13))
DEFAULT_TOL = 0.05
DEFAULT_REALIZATIONS = 10


@dataclass(frozen=True)
class SlopeEstimate:
    slope: float
    residual: float
    n_realizations: int


def check_ladder(ladder: Sequence[float]) -> None:
    """At least three points above 1, strictly increasing and geometrically spaced."""
    if len(ladder) < 3:
        raise ValueError("ladder needs at least three SNR points")
    if not all(r > 1 for r in ladder):
        raise ValueError("ladder points must exceed 1")
    logs = [math.log(r) for r in ladder]
    steps = [b - a for a, b in zip(logs, logs[1:])]
    if min(steps) <= 0:
        raise ValueError("ladder must be strictly increasing")
    if max(steps) - min(steps) > 1e-9 * max(steps):
        raise ValueError("ladder must be geometrically spaced")


def estimate_slope(
    evaluator: Callable[[float], float | Sequence[float]],
    ladder: Sequence[float] = DEFAULT_LADDER,
    normalizer: float = 1.0,
) -> SlopeEstimate:
    """Least-squares slope of ``evaluator(rho) / normalizer`` against ``log2 rho``.

    ``evaluator`` may return one value or one value per channel realization;
    in the latter case the mean is fitted. ``residual`` is the largest
    absolute deviation of the fitted points from the line.
    """
    if normalizer <= 0:
        raise ValueError("normalizer must be positive")
    check_ladder(ladder)
    xs, ys, count = [], [], None
    for rho in ladder:
        vals = np.atleast_1d(np.asarray(evaluator(rho), dtype=float))
        if not np.all(np.isfinite(vals)):
            raise SlopeEstimationError(f"non-finite evaluator output at rho={rho:g}")
        count = vals.size
        xs.append(math.log2(rho))
        ys.append(float(vals.mean()) / normalizer)
    slope, intercept = np.polyfit(xs, ys, 1)
    fit = slope * np.asarray(xs) + intercept
    residual = float(np.max(np.abs(np.asarray(ys) - fit)))
    return SlopeEstimate(float(slope), residual, int(count))


# --------------------------------------------------------------------------
# log-determinant asymptotics


@dataclass(frozen=True)
class LogdetCheck:
    """Outcome of a slope check; ``conclusive`` is False when a rank hypothesis fails."""

    expected: float
    estimated: float
    conclusive: bool
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def _range_factor(r: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """``F`` with ``F F^H = R`` and exactly ``rank(R)`` columns."""
    eigs, vecs = np.linalg.eigh(0.5 * (r + r.conj().T))
    keep = eigs > tol * max(1.0, abs(eigs).max(initial=0.0))
    return vecs[:, keep] * np.sqrt(eigs[keep])


def _spans_generic(factors: list, N: int) -> bool:
    for k in range(2, len(factors) + 1):
        stack = np.hstack(factors[:k])
        total = stack.shape[1]
        if total and np.linalg.matrix_rank(stack) != min(total, N):
            return False
    return True


def exponent_ladder(exps: Sequence[float], n: int = 1, tol: float = DEFAULT_TOL) -> tuple:
    """``log2 rho`` points where ``rho**d`` runs over 1e6..1e12 for the smallest relevant scale ``d``.

    ``d`` is the smallest positive exponent or gap between consecutive
    exponents. On a fixed ladder a term whose exponent is small, or close to
    a competing one, has not separated yet and biases the fitted slope.
    Gaps below ``tol / (2 n)`` are skipped since they shift the slope by at
    most ``n`` times the gap.
    """
    es = sorted((float(e) for e in exps), reverse=True)
    scales = [e for e in es if e > 0]
    scales += [d for d in (es[k] - es[k + 1] for k in range(len(es) - 1)) if d > tol / (2 * n)]
    scale = 1.0 / min(scales) if scales else 1.0
    return tuple(k * scale * math.log2(10.0) for k in range(6, 13))


def _graded_basis(factors: list, tol: float = 1e-9) -> tuple:
    """Orthonormal basis adding each factor's new directions in order, with each direction's block index.

    The coordinates ``C_k = Q^H F_k`` vanish on directions introduced after
    block ``k``; those entries are set to exactly zero.
    """
    N = factors[0].shape[0]
    basis = np.zeros((N, 0), dtype=np.complex128)
    owner: list = []
    for k, f in enumerate(factors):
        if f.shape[1] == 0:
            continue
        resid = f - basis @ (basis.conj().T @ f)
        u, sv, _ = np.linalg.svd(resid, full_matrices=False)
        keep = sv > tol * max(1.0, float(np.linalg.norm(f, 2)))
        basis = np.hstack([basis, u[:, keep]])
        owner += [k] * int(keep.sum())
    owner = np.asarray(owner, dtype=int)
    coords = []
    for k, f in enumerate(factors):
        c = basis.conj().T @ f
        c[owner > k, :] = 0.0
        coords.append(c)
    return owner, coords


def _logdet_bits_graded(owner, coords, exps: list, t: float) -> float:
    """``log2 det(I + sum_k rho^e_k F_k F_k^H)`` at ``log2 rho = t``.

    In the graded basis each direction ``i`` grows like ``rho^f_i``. Writing
    the matrix as ``D S D`` with ``D = diag(rho^(f/2))`` leaves ``S`` with
    entries bounded by one and a nonsingular limit, so double precision
    stays accurate even when ``rho`` itself would overflow.
    """
    if owner.size == 0:
        return 0.0
    f = np.asarray([exps[k] for k in owner])
    s = np.diag(np.exp2(-t * f)).astype(np.complex128)
    for c, e in zip(coords, exps):
        # rows with f < e belong to later blocks and are zero in c
        w = c * np.exp2(np.minimum(t * (e - f) / 2, 0.0))[:, None]
        s += w @ w.conj().T
    sign, logabs = np.linalg.slogdet(s)
    return t * float(f.sum()) + float(logabs) / math.log(2.0)


def _check(mats, exps, ladder, tol) -> LogdetCheck:
    exps = [float(e) for e in exps]
    if any(exps[k] < exps[k + 1] for k in range(len(exps) - 1)) or exps[-1] < 0:
        raise ValueError("exponents must be non-increasing and non-negative")
    N = mats[0].shape[0]
    factors = [_range_factor(np.asarray(m)) for m in mats]
    used, expected = 0, 0.0
    for f, e in zip(factors, exps):
        expected += min(f.shape[1], max(N - used, 0)) * e
        used += f.shape[1]
    if ladder is None:
        ts = exponent_ladder(exps, N, tol)
    else:
        check_ladder(ladder)
        ts = [math.log2(r) for r in ladder]
    owner, coords = _graded_basis(factors)
    ys = [_logdet_bits_graded(owner, coords, exps, t) for t in ts]
    estimated = float(np.polyfit(ts, ys, 1)[0])
    conclusive = _spans_generic(factors, N)
    passed = conclusive and abs(estimated - expected) <= tol
    return LogdetCheck(expected, estimated, conclusive, passed)


def validate_logdet_two(R1, R2, eta, beta, ladder=None, tol=DEFAULT_TOL) -> LogdetCheck:
    """Slope of ``log2 det(I + rho^eta R1 + rho^beta R2)`` versus ``r1 eta + min(r2, N - r1) beta``.

    ``ladder=None`` picks SNR points from :func:`exponent_ladder`.
    """
    return _check([np.asarray(R1), np.asarray(R2)], [eta, beta], ladder, tol)


def validate_logdet_three(
    R1, R2, R3, eta, beta, gamma, ladder=None, tol=DEFAULT_TOL
) -> LogdetCheck:
    """Three-term version; the last term adds ``min(r3, (N - r1 - r2)^+) gamma``."""
    return _check(
        [np.asarray(R1), np.asarray(R2), np.asarray(R3)], [eta, beta, gamma], ladder, tol
    )


@dataclass(frozen=True)
class MonotoneCheck:
    min_eigenvalue: float
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def _shrunk(G: np.ndarray, A: np.ndarray, pi: float) -> np.ndarray:
    n = G.shape[0]
    out = G @ np.linalg.solve(np.eye(n) + pi * G @ A @ G, G)
    return 0.5 * (out + out.conj().T)


def validate_monotone(G1, G2, A, pi: float, tol: float = 1e-9) -> MonotoneCheck:
    """Check ``G1 (I + pi G1 A G1)^{-1} G1 <= G2 (I + pi G2 A G2)^{-1} G2`` in Loewner order.

    Passes when every eigenvalue of the difference is at least ``-tol``
    (scaled by the size of the larger side). The inequality holds whenever
    ``G1^2 <= G2^2``; ``G1 <= G2`` alone is not enough.
    """
    G1, G2, A = (np.asarray(x, dtype=np.complex128) for x in (G1, G2, A))
    hi = _shrunk(G2, A, pi)
    diff = hi - _shrunk(G1, A, pi)
    lam = float(np.linalg.eigvalsh(diff).min())
    scale = max(1.0, float(np.abs(hi).max()))
    return MonotoneCheck(lam, lam >= -tol * scale)


# --------------------------------------------------------------------------
# finite-SNR bounds against the closed forms


class Suite(str, enum.Enum):
    LEMMA1 = "LEMMA1"
    LEMMA2 = "LEMMA2"
    LEMMA3 = "LEMMA3"
    NOISE = "NOISE"
    HK_PRIVATE = "HK_PRIVATE"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ValidationReport:
    suite: str
    config: tuple
    alpha: str
    expected: str
    estimated: float
    residual: float
    passed: bool
    partition: tuple | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if self.partition is None:
            d.pop("partition")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _require_alpha_le_one(a: Fraction, suite: Suite) -> None:
    if a > 1:
        raise GdofDomainError("alpha <= 1", f"{suite} slope check")


def _suite_plan(config: SymmetricConfig, a: Fraction, suite: Suite, partition):
    """Expected slope, normalizer and per-realization evaluator for a suite."""
    K = config.K
    if suite is Suite.LEMMA1:
        if partition is None:
            raise ValueError("LEMMA1 needs a partition")
        part = tuple(partition)
        expected = outer.lemma1_partition_value(config, a, part)
        return expected, part[0] + part[1], lambda r, p, pt: coop_bound_rhs(r, p, part, pt)
    _require_alpha_le_one(a, suite)
    if suite is Suite.LEMMA2:
        expected = outer.lemma2_bound(config, a)
        return expected, 2 * (K - 1), lambda r, p, pt: sideinfo_bound_rhs(r, p, pt)
    if suite is Suite.LEMMA3:
        expected = outer.lemma3_bound(config, a)
        return expected, 2 * (K - 1), lambda r, p, pt: noisy_side_bound_rhs(r, p, pt)
    if suite is Suite.NOISE:
        expected = inner.gdof_noise(config, a)
        return expected, 1, lambda r, p, pt: noise_treating_rate(r, p, pt, 0)
    if suite is Suite.HK_PRIVATE:
        expected = config.M * (1 - a)
        return expected, 1, lambda r, p, pt: hk_private_rate(r, p, pt, 0)
    raise ValueError(f"unknown suite {suite}")


def cross_validate(
    config: SymmetricConfig,
    alpha: AlphaLike,
    suite: Suite | str,
    partition=None,
    seed: int = 0,
    realizations: int = DEFAULT_REALIZATIONS,
    ladder: Sequence[float] = DEFAULT_LADDER,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
) -> ValidationReport:
    """Fit the finite-SNR bound's slope over random channels and compare with the closed form.

    Realizations are seeded from ``SeedSequence(seed)`` so reports are
    reproducible regardless of ``workers``.
    """
    if realizations < 3:
        raise ValueError("at least three realizations are required")
    suite = Suite(suite)
    a = as_alpha(alpha)
    expected, normalizer, evaluate = _suite_plan(config, a, suite, partition)
    children = np.random.SeedSequence(seed).spawn(realizations)
    reals = [sample_realization(config, child) for child in children]
    power = default_power(config)

    def at(rho):
        pt = operating_point(rho, a)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                return list(pool.map(lambda r: evaluate(r, power, pt), reals))
        return [evaluate(r, power, pt) for r in reals]

    est = estimate_slope(at, ladder, normalizer)
    return ValidationReport(
        suite=suite.value,
        config=(config.K, config.M, config.N),
        alpha=str(a),
        expected=str(Fraction(expected)),
        estimated=est.slope,
        residual=est.residual,
        passed=abs(est.slope - float(expected)) <= tol,
        partition=None if partition is None else tuple(partition),
    )
