"""Symmetric K-user MIMO interference channel: configuration and realizations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import GdofDomainError, ValidationError
from .linalg import block_diag, sample_complex_gaussian

AlphaLike = Union[Fraction, int, str]


def as_alpha(value: AlphaLike) -> Fraction:
    """Coerce to an exact non-negative interference exponent.

    Floats are rejected so that regime boundaries are never decided on a
    rounded value; pass ``Fraction("0.3")`` or ``"3/10"`` instead.
    """
    if isinstance(value, float):
        raise TypeError("alpha must be exact (Fraction, int or str), not float")
    a = Fraction(value)
    if a < 0:
        raise GdofDomainError("alpha >= 0", f"got {a}")
    return a


@dataclass(frozen=True, order=True)
class SymmetricConfig:
    """K users, M transmit and N receive antennas at every node."""

    K: int
    M: int
    N: int

    def __post_init__(self):
        for name in ("K", "M", "N"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise ValidationError(f"{name} must be an integer")
        if self.K < 2:
            raise ValidationError("K must be at least 2")
        if self.M < 1 or self.N < 1:
            raise ValidationError("M and N must be at least 1")

    @property
    def R(self) -> int:
        """``floor(max(M, N) / min(M, N))``."""
        return max(self.M, self.N) // min(self.M, self.N)

    @property
    def ratio(self) -> Fraction:
        """``N / M`` as an exact rational."""
        return Fraction(self.N, self.M)

    def __str__(self) -> str:
        return f"(K={self.K}, M={self.M}, N={self.N})"


@dataclass(frozen=True)
class ChannelRealization:
    """Unscaled channel blocks; ``H[j][i]`` maps transmitter ``i`` to receiver ``j``.

    Every block is ``N x M``. SNR and INR scaling is applied by the bound
    evaluators, not stored here.
    """

    config: SymmetricConfig
    H: tuple

    def __post_init__(self):
        K, M, N = self.config.K, self.config.M, self.config.N
        if len(self.H) != K or any(len(row) != K for row in self.H):
            raise ValidationError("H must be a K x K array of blocks")
        for row in self.H:
            for blk in row:
                if np.shape(blk) != (N, M):
                    raise ValidationError(f"every block must have shape ({N}, {M})")

    def block(self, j: int, i: int) -> np.ndarray:
        return self.H[j][i]

    def to_json(self) -> str:
        """``{"K", "M", "N", "blocks": [[[re, im], ...], ...]}`` with row-major entries."""
        c = self.config
        blocks = []
        for j in range(c.K):
            for i in range(c.K):
                blk = np.asarray(self.H[j][i])
                blocks.append([[float(z.real), float(z.imag)] for z in blk.ravel()])
        return json.dumps({"K": c.K, "M": c.M, "N": c.N, "blocks": blocks})

    @classmethod
    def from_json(cls, text: str) -> "ChannelRealization":
        d = json.loads(text)
        cfg = SymmetricConfig(int(d["K"]), int(d["M"]), int(d["N"]))
        flat = d["blocks"]
        if len(flat) != cfg.K * cfg.K:
            raise ValidationError("blocks must hold K*K entries")
        H = []
        for j in range(cfg.K):
            row = []
            for i in range(cfg.K):
                vals = np.array([complex(re, im) for re, im in flat[j * cfg.K + i]])
                if vals.size != cfg.N * cfg.M:
                    raise ValidationError("block has the wrong number of entries")
                row.append(vals.reshape(cfg.N, cfg.M))
            H.append(tuple(row))
        return cls(cfg, tuple(H))


@dataclass(frozen=True)
class PowerProfile:
    """Per-user input covariances, each ``M x M`` PSD with trace at most 1."""

    P: tuple

    def __post_init__(self):
        for p in self.P:
            p = np.asarray(p)
            if p.ndim != 2 or p.shape[0] != p.shape[1]:
                raise ValidationError("covariances must be square")
            if np.abs(p - p.conj().T).max(initial=0.0) > 1e-12:
                raise ValidationError("covariances must be Hermitian")
            if np.linalg.eigvalsh(p).min(initial=0.0) < -1e-12:
                raise ValidationError("covariances must be PSD")
            if np.real(np.trace(p)) > 1 + 1e-9:
                raise ValidationError("covariance trace exceeds the power budget")

    def __getitem__(self, i: int) -> np.ndarray:
        return self.P[i]

    def __len__(self) -> int:
        return len(self.P)


def default_power(config: SymmetricConfig) -> PowerProfile:
    """Isotropic inputs ``P_i = I_M / M``."""
    eye = np.eye(config.M, dtype=np.complex128) / config.M
    return PowerProfile(tuple(eye.copy() for _ in range(config.K)))


def sample_realization(config: SymmetricConfig, seed) -> ChannelRealization:
    """Draw i.i.d. CN(0, 1) blocks using a generator seeded by ``seed`` only.

    ``seed`` may be an int or a :class:`numpy.random.SeedSequence`.
    """
    rng = np.random.default_rng(seed)
    H = tuple(
        tuple(sample_complex_gaussian(config.N, config.M, rng) for _ in range(config.K))
        for _ in range(config.K)
    )
    return ChannelRealization(config, H)


def stacked_blocks(real: ChannelRealization, rows, cols) -> np.ndarray:
    """Horizontally and vertically tile ``H[j][i]`` for ``j in rows``, ``i in cols``.

    Empty ``rows`` or ``cols`` give a matrix with zero rows or columns.
    """
    c = real.config
    rows, cols = list(rows), list(cols)
    if not rows or not cols:
        return np.zeros((len(rows) * c.N, len(cols) * c.M), dtype=np.complex128)
    return np.block([[real.H[j][i] for i in cols] for j in rows]).astype(np.complex128)


def power_block(power: PowerProfile, users) -> np.ndarray:
    return block_diag([power[i] for i in users])
