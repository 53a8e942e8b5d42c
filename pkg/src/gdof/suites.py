"""Batch consistency checks run by ``gdof validate``.

Each suite yields JSON-ready dicts with at least ``suite`` and ``pass``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from . import asymptotics, inner, outer
from .channel import SymmetricConfig, default_power, sample_realization
from .linalg import hermitian_sqrt, sample_complex_gaussian
from .sumrate import coop_terms, noisy_side_terms, operating_point, sideinfo_terms, term_covariance

TIGHT_CONFIGS = ((3, 1, 3), (3, 2, 4), (4, 1, 4), (3, 2, 5))
SLOPE_CASES = (
    ((3, 2, 2), "3/4", "LEMMA1", (1, 1)),
    ((3, 2, 2), "3/10", "LEMMA2", None),
    ((3, 2, 4), "3/10", "LEMMA3", None),
    ((3, 2, 2), "3/10", "NOISE", None),
    ((3, 2, 4), "1/2", "HK_PRIVATE", None),
)


def grid(step: Fraction = Fraction(1, 100), top: Fraction = Fraction(4)) -> list:
    n = int(top / step)
    return [k * step for k in range(n + 1)]


def covered_configs(k_max: int = 8, n_max: int = 6) -> list:
    """Every ``(K, M, N)`` with ``M <= N <= n_max``, ``K <= k_max`` and ``K*M > N``."""
    out = []
    for K in range(2, k_max + 1):
        for N in range(1, n_max + 1):
            for M in range(1, N + 1):
                if K * M > N:
                    out.append(SymmetricConfig(K, M, N))
    return out


def tightness() -> Iterator[dict]:
    for dims in TIGHT_CONFIGS:
        c = SymmetricConfig(*dims)
        gaps = [
            str(a)
            for a in grid()
            if inner.gdof_inner_combined(c, a).value != outer.outer_combined(c, a).value
        ]
        yield {"suite": "tightness", "config": dims, "mismatches": gaps[:10], "pass": not gaps}


def _label_agrees(c: SymmetricConfig, closed, combined) -> bool:
    """The closed form's bound family is active, or it is the interference-free cap."""
    if closed.active <= combined.active:
        return True
    return closed.value == min(c.M, c.N) and outer.Bound.INTERFERENCE_FREE in combined.active


def theorem4() -> Iterator[dict]:
    """Values on the grid, active labels at interior points between grid points."""
    half_step = Fraction(1, 200)
    for c in covered_configs():
        if outer.closed_form_case(c) is None:
            continue
        bad, labels = [], []
        for a in grid():
            if outer.theorem4_closed_form(c, a).value != outer.outer_combined(c, a).value:
                bad.append(str(a))
            mid = a + half_step
            if not _label_agrees(c, outer.theorem4_closed_form(c, mid), outer.outer_combined(c, mid)):
                labels.append(str(mid))
        yield {
            "suite": "theorem4",
            "config": (c.K, c.M, c.N),
            "case": outer.closed_form_case(c),
            "mismatches": bad[:10],
            "label_mismatches": labels[:10],
            "pass": not bad and not labels,
        }


def zchannel(seed: int, count: int = 200, top: int = 6) -> Iterator[dict]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        dims = tuple(int(v) for v in rng.integers(1, top + 1, size=4))
        chk = outer.z_channel_dof_check(*dims)
        yield {
            "suite": "zchannel",
            "dims": dims,
            "bound": str(chk.bound),
            "reference": str(chk.reference),
            "pass": chk.equal,
        }


def _random_psd(n: int, rank: int, rng) -> np.ndarray:
    u = sample_complex_gaussian(n, rank, rng)
    return u @ u.conj().T


def lemmas(seed: int, count: int = 50) -> Iterator[dict]:
    """Log-det slope lemmas, Loewner monotonicity and Woodbury/Schur agreement."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 6))
        r1, r2 = (int(v) for v in rng.integers(1, n + 1, size=2))
        eta, beta = sorted((float(v) for v in rng.uniform(0, 1, 2)), reverse=True)
        chk = asymptotics.validate_logdet_two(
            _random_psd(n, r1, rng), _random_psd(n, r2, rng), eta, beta
        )
        yield {"suite": "logdet_two", "N": n, "ranks": (r1, r2), "expected": chk.expected,
               "estimated": chk.estimated, "pass": chk.passed}
    for _ in range(count):
        n = int(rng.integers(1, 6))
        ranks = tuple(int(v) for v in rng.integers(1, n + 1, size=3))
        exps = sorted((float(v) for v in rng.uniform(0, 1, 3)), reverse=True)
        mats = [_random_psd(n, r, rng) for r in ranks]
        chk = asymptotics.validate_logdet_three(*mats, *exps)
        yield {"suite": "logdet_three", "N": n, "ranks": ranks, "expected": chk.expected,
               "estimated": chk.estimated, "pass": chk.passed}
    for _ in range(count):
        n = int(rng.integers(1, 6))
        p1 = _random_psd(n, n, rng)
        p2 = p1 + _random_psd(n, int(rng.integers(1, n + 1)), rng)
        g1, g2 = (hermitian_sqrt(p) for p in (p1, p2))
        chk = asymptotics.validate_monotone(g1, g2, _random_psd(n, n, rng), float(rng.uniform(0.1, 10)))
        yield {"suite": "monotone", "N": n, "min_eigenvalue": chk.min_eigenvalue, "pass": chk.passed}
    yield from woodbury(seed)


def woodbury(seed: int, count: int = 100, rtol: float = 1e-9) -> Iterator[dict]:
    """Closed-form and Schur-complement conditional covariances on random instances."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        K = int(rng.integers(3, 6))
        M = int(rng.integers(1, 4))
        N = int(rng.integers(1, 4))
        c = SymmetricConfig(K, M, N)
        real = sample_realization(c, int(rng.integers(2**31)))
        power = default_power(c)
        pt = operating_point(float(10 ** rng.uniform(0, 2)), Fraction(int(rng.integers(0, 21)), 10))
        l1 = int(rng.integers(0, K + 1))
        l2 = int(rng.integers(1 if l1 == 0 else 0, K - l1 + 1))
        order = [int(u) for u in rng.permutation(K)]
        terms = coop_terms(K, (l1, l2)) + sideinfo_terms(K, order) + noisy_side_terms(K)
        worst = 0.0
        for t in terms:
            a = term_covariance(t, real, power, pt, "woodbury")
            b = term_covariance(t, real, power, pt, "schur")
            worst = max(worst, float(np.linalg.norm(a - b) / np.linalg.norm(a)))
        yield {"suite": "woodbury", "config": (K, M, N), "rho": pt.rho, "alpha": str(pt.alpha),
               "max_rel_diff": worst, "pass": worst <= rtol}


def slopes(seed: int) -> Iterator[dict]:
    for dims, alpha, suite, part in SLOPE_CASES:
        rep = asymptotics.cross_validate(SymmetricConfig(*dims), alpha, suite, part, seed=seed)
        yield rep.to_dict()


def run(name: str, seed: int) -> Iterator[dict]:
    if name == "all":
        for sub in ("lemmas", "slopes", "tightness", "theorem4", "zchannel"):
            yield from run(sub, seed)
        return
    if name == "lemmas":
        yield from lemmas(seed)
    elif name == "slopes":
        yield from slopes(seed)
    elif name == "tightness":
        yield from tightness()
    elif name == "theorem4":
        yield from theorem4()
    elif name == "zchannel":
        yield from zchannel(seed)
    else:
        raise ValueError(f"unknown suite {name!r}")
