from fractions import Fraction

import numpy as np
import pytest

from gdof.channel import (
    ChannelRealization,
    PowerProfile,
    SymmetricConfig,
    as_alpha,
    default_power,
    sample_realization,
)
from gdof.errors import GdofDomainError, ValidationError


def test_as_alpha_accepts_exact_forms():
    assert as_alpha("3/4") == Fraction(3, 4)
    assert as_alpha(2) == 2
    assert as_alpha(Fraction(1, 3)) == Fraction(1, 3)


def test_as_alpha_rejects_floats_and_negatives():
    with pytest.raises(TypeError):
        as_alpha(0.5)
    with pytest.raises(GdofDomainError) as info:
        as_alpha("-1/2")
    assert info.value.assumption == "alpha >= 0"


@pytest.mark.parametrize("dims", [(1, 1, 1), (2, 0, 1), (2, 1, 0)])
def test_config_validation(dims):
    with pytest.raises(ValidationError):
        SymmetricConfig(*dims)


def test_config_ratio():
    c = SymmetricConfig(3, 2, 5)
    assert c.R == 2 and c.ratio == Fraction(5, 2)


def test_realization_is_seed_reproducible():
    c = SymmetricConfig(3, 2, 2)
    a, b = sample_realization(c, 4), sample_realization(c, 4)
    assert all(np.array_equal(a.H[j][i], b.H[j][i]) for j in range(3) for i in range(3))
    other = sample_realization(c, 5)
    assert not np.array_equal(a.H[0][0], other.H[0][0])


def test_realization_json_round_trip():
    real = sample_realization(SymmetricConfig(2, 1, 3), 9)
    back = ChannelRealization.from_json(real.to_json())
    assert back.config == real.config
    assert all(np.array_equal(back.H[j][i], real.H[j][i]) for j in range(2) for i in range(2))


def test_realization_rejects_bad_shapes():
    c = SymmetricConfig(2, 1, 1)
    with pytest.raises(ValidationError):
        ChannelRealization(c, ((np.zeros((1, 1)),), (np.zeros((1, 1)),)))
    with pytest.raises(ValidationError):
        ChannelRealization(c, ((np.zeros((2, 1)), np.zeros((1, 1))),) * 2)


def test_power_profile_checks():
    assert np.allclose(default_power(SymmetricConfig(2, 2, 2))[0], np.eye(2) / 2)
    with pytest.raises(ValidationError):
        PowerProfile((np.eye(2),))
    with pytest.raises(ValidationError):
        PowerProfile((np.diag([0.5, -0.1]),))


def test_default_power_is_uniform():
    assert np.allclose(default_power(SymmetricConfig(2, 1, 1))[0], [[1.0]])
    for M in (1, 2, 3, 5):
        assert np.trace(default_power(SymmetricConfig(2, M, M))[1]).real == pytest.approx(1.0)


def test_realization_shape_law():
    real = sample_realization(SymmetricConfig(3, 2, 2), 0)
    blocks = [real.H[j][i] for j in range(3) for i in range(3)]
    assert len(blocks) == 9 and all(b.shape == (2, 2) for b in blocks)
