"""Generalized degrees of freedom of the symmetric K-user MIMO interference channel.

Exact inner and outer bounds on the per-user GDOF as functions of the
interference exponent ``alpha``, finite-SNR versions of the outer bounds,
and numerical checks tying the two together.
"""

from .channel import (
    ChannelRealization,
    PowerProfile,
    SymmetricConfig,
    as_alpha,
    default_power,
    sample_realization,
)
from .errors import GdofDomainError, SlopeEstimationError, ValidationError
from .inner import (
    Scheme,
    active_scheme_regimes,
    gdof_hk,
    gdof_ia,
    gdof_inner_combined,
    gdof_noise,
    gdof_zf,
)
from .outer import (
    Bound,
    is_tight,
    lemma1_bound,
    lemma1_partition_value,
    lemma2_bound,
    lemma3_bound,
    outer_combined,
    theorem4_closed_form,
    z_channel_dof_check,
)

__version__ = "0.1.0"

__all__ = [
    "Bound",
    "ChannelRealization",
    "GdofDomainError",
    "PowerProfile",
    "Scheme",
    "SlopeEstimationError",
    "SymmetricConfig",
    "ValidationError",
    "active_scheme_regimes",
    "as_alpha",
    "default_power",
    "gdof_hk",
    "gdof_ia",
    "gdof_inner_combined",
    "gdof_noise",
    "gdof_zf",
    "is_tight",
    "lemma1_bound",
    "lemma1_partition_value",
    "lemma2_bound",
    "lemma3_bound",
    "outer_combined",
    "sample_realization",
    "theorem4_closed_form",
    "z_channel_dof_check",
]
