import math
from fractions import Fraction as F

import numpy as np
import pytest

from gdof.channel import SymmetricConfig as C
from gdof.asymptotics import estimate_slope
from gdof.channel import ChannelRealization, PowerProfile, default_power, sample_realization, stacked_blocks
from gdof.errors import GdofDomainError, ValidationError
from gdof.outer import lemma1_partition_value
from gdof.sumrate import (
    EntropyTerm,
    Observation,
    coop_bound_rhs,
    coop_terms,
    end_pair_orders,
    hk_private_rate,
    noise_treating_rate,
    noisy_side_bound_rhs,
    noisy_side_terms,
    sideinfo_bound_rhs,
    operating_point,
    sideinfo_terms,
    term_bits,
    term_covariance,
)


def _received(real, power, pt, j, users):
    n = real.config.N
    s = np.zeros((n, n), dtype=complex)
    for i in users:
        g = pt.link_gain(j, i) * real.H[j][i]
        s += g @ power[i] @ g.conj().T
    return s


def test_noise_treating_rate_matches_direct_formula():
    c = C(3, 2, 2)
    real, power = sample_realization(c, 3), default_power(c)
    pt = operating_point(1e3, F(1, 2))
    everyone = _received(real, power, pt, 1, range(3))
    others = _received(real, power, pt, 1, (0, 2))
    ref = (np.linalg.slogdet(np.eye(2) + everyone)[1] - np.linalg.slogdet(np.eye(2) + others)[1]) / math.log(2)
    assert noise_treating_rate(real, power, pt, 1) == pytest.approx(ref, rel=1e-10)


def test_link_gains():
    pt = operating_point(100.0, F(1, 2))
    assert pt.link_gain(0, 0) == pytest.approx(10.0)
    assert pt.link_gain(0, 1) == pytest.approx(100.0**0.25)
    with pytest.raises(ValidationError):
        operating_point(0.0, 1)


@pytest.mark.parametrize("alpha", [F(0), F(3, 4), F(2)])
def test_woodbury_and_schur_agree(alpha):
    c = C(4, 2, 3)
    real, power = sample_realization(c, 8), default_power(c)
    pt = operating_point(50.0, alpha)
    for t in coop_terms(4, (2, 1)) + sideinfo_terms(4) + noisy_side_terms(4):
        a = term_covariance(t, real, power, pt, "woodbury")
        b = term_covariance(t, real, power, pt, "schur")
        assert np.allclose(a, b, rtol=1e-10, atol=1e-10)
        assert term_bits(t, real, power, pt) == pytest.approx(term_bits(t, real, power, pt, "schur"))


def test_woodbury_is_finite_at_high_snr():
    c = C(3, 2, 2)
    real, power = sample_realization(c, 0), default_power(c)
    pt = operating_point(1e12, 2)
    assert math.isfinite(coop_bound_rhs(real, power, (2, 1), pt))


def test_term_structure():
    terms = coop_terms(3, (1, 1))
    assert len(terms) == 2
    assert terms[0].target.users == (0, 1) and terms[1].given == (Observation((0,), (1,)),)
    assert len(sideinfo_terms(5)) == 8
    assert len(noisy_side_terms(5)) == 8
    with pytest.raises(GdofDomainError):
        noisy_side_terms(2)
    with pytest.raises(ValidationError):
        coop_terms(3, (0, 0))
    with pytest.raises(GdofDomainError):
        coop_terms(3, (2, 2))
    with pytest.raises(ValidationError):
        sideinfo_terms(3, [0, 0, 1])


def test_in_group_links_are_removed():
    t = coop_terms(3, (2, 0))[0]
    assert t.target.exclude == {(0, 1), (1, 0)}


def test_invalid_side_information_rejected():
    c = C(3, 1, 1)
    real, power, pt = sample_realization(c, 0), default_power(c), operating_point(10.0, 1)
    same_rx = EntropyTerm(Observation((0,), (0, 1)), (Observation((0,), (1,)),))
    overlap = EntropyTerm(
        Observation((0,), (0, 1, 2)), (Observation((1,), (1,)), Observation((2,), (1, 2)))
    )
    for t in (same_rx, overlap):
        with pytest.raises(ValidationError):
            term_bits(t, real, power, pt)


def test_hk_private_rate_domain():
    c = C(3, 2, 2)
    real, power = sample_realization(c, 0), default_power(c)
    assert hk_private_rate(real, power, operating_point(1e4, F(1, 2)), 0) > 0
    with pytest.raises(GdofDomainError):
        hk_private_rate(real, power, operating_point(1e4, 2), 0)


def _bits(a):
    return np.linalg.slogdet(np.eye(a.shape[0]) + a)[1] / math.log(2)


def _zero_cross(real):
    c = real.config
    H = tuple(
        tuple(real.H[j][i] if i == j else np.zeros((c.N, c.M)) for i in range(c.K))
        for j in range(c.K)
    )
    return ChannelRealization(c, H)


def test_zero_power_gives_zero():
    c = C(3, 2, 2)
    real = sample_realization(c, 1)
    zero = PowerProfile(tuple(np.zeros((2, 2)) for _ in range(3)))
    pt = operating_point(2.0, F(3, 4))
    assert coop_bound_rhs(real, zero, (1, 1), pt) == pytest.approx(0.0, abs=1e-12)
    assert sideinfo_bound_rhs(real, zero, pt) == pytest.approx(0.0, abs=1e-12)
    assert noisy_side_bound_rhs(real, zero, pt) == pytest.approx(0.0, abs=1e-12)
    assert noise_treating_rate(real, zero, operating_point(1.0, 2), 0) == pytest.approx(0.0, abs=1e-12)


def test_single_group_is_point_to_point():
    c = C(3, 2, 3)
    real, power = sample_realization(c, 2), default_power(c)
    pt = operating_point(1e3, F(1, 2))
    own = [real.H[i][i] @ power[i] @ real.H[i][i].conj().T for i in (0, 1)]
    ref = sum(_bits(1e3 * s) for s in own)
    assert coop_bound_rhs(real, power, (2, 0), pt) == pytest.approx(ref, rel=1e-10)


def test_sideinfo_without_interference_is_weighted_point_to_point():
    c = C(4, 1, 2)
    real, power = _zero_cross(sample_realization(c, 3)), default_power(c)
    pt = operating_point(1e3, F(1, 2))
    single = [_bits(1e3 * real.H[i][i] @ power[i] @ real.H[i][i].conj().T) for i in range(4)]
    weights = (1, 2, 2, 1)
    ref = sum(w * v for w, v in zip(weights, single))
    assert sideinfo_bound_rhs(real, power, pt) == pytest.approx(ref, rel=1e-10)


def test_noise_rate_without_interference():
    c = C(3, 2, 2)
    real, power = _zero_cross(sample_realization(c, 4)), default_power(c)
    pt = operating_point(1e4, F(1, 2))
    ref = _bits(1e4 * real.H[2][2] @ power[2] @ real.H[2][2].conj().T)
    assert noise_treating_rate(real, power, pt, 2) == pytest.approx(ref, rel=1e-10)


def test_stacked_cross_block_shape_and_rank():
    real = sample_realization(C(3, 2, 2), 5)
    h12 = stacked_blocks(real, (0,), (1, 2))
    assert h12.shape == (2, 4) and np.linalg.matrix_rank(h12) == 2


def test_bounds_increase_with_snr():
    c = C(3, 2, 4)
    real, power = sample_realization(c, 6), default_power(c)
    ladder = [10.0**k for k in range(0, 13)]
    for f in (
        lambda pt: coop_bound_rhs(real, power, (1, 1), pt),
        lambda pt: sideinfo_bound_rhs(real, power, pt),
        lambda pt: noisy_side_bound_rhs(real, power, pt),
        lambda pt: noise_treating_rate(real, power, pt, 0),
    ):
        vals = [f(operating_point(r, F(3, 10))) for r in ladder]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


def test_noise_rate_below_every_cooperation_bound():
    c = C(3, 2, 2)
    reals = [sample_realization(c, s) for s in np.random.SeedSequence(9).spawn(10)]
    power = default_power(c)
    pt = operating_point(1e4, F(3, 4))
    rate = np.mean([noise_treating_rate(r, power, pt, 0) for r in reals])
    for part in ((1, 0), (1, 1), (2, 1), (1, 2), (3, 0), (0, 2)):
        bound = np.mean([coop_bound_rhs(r, power, part, pt) for r in reals]) / sum(part)
        assert rate <= bound


def test_chain_order_relabels_users():
    terms = noisy_side_terms(3, [2, 0, 1])
    assert terms[0].target.receivers == (2,) and terms[0].given == (Observation((1,), (2,)),)
    assert len(end_pair_orders(4)) == 6
    assert all(o[0] < o[-1] for o in end_pair_orders(4))


def _slope(c, f, normalizer, seed=0, n=10):
    reals = [sample_realization(c, s) for s in np.random.SeedSequence(seed).spawn(n)]
    power = default_power(c)
    return estimate_slope(
        lambda rho: [f(r, power, operating_point(rho, F(3, 10))) for r in reals], normalizer=normalizer
    ).slope


def test_sideinfo_slope_ignores_ordering():
    c = C(3, 2, 2)
    base = _slope(c, lambda r, p, pt: sideinfo_bound_rhs(r, p, pt), 4)
    swapped = _slope(c, lambda r, p, pt: sideinfo_bound_rhs(r, p, pt, [1, 2, 0]), 4)
    averaged = _slope(c, lambda r, p, pt: sideinfo_bound_rhs(r, p, pt, average=True), 4)
    assert abs(base - swapped) <= 0.05 and abs(base - averaged) <= 0.05
    assert abs(averaged - 1.4) <= 0.05


def test_chained_slope_ignores_ordering():
    c = C(3, 2, 4)
    base = _slope(c, lambda r, p, pt: noisy_side_bound_rhs(r, p, pt), 4)
    swapped = _slope(c, lambda r, p, pt: noisy_side_bound_rhs(r, p, pt, [2, 0, 1]), 4)
    assert abs(base - 1.7) <= 0.05 and abs(base - swapped) <= 0.05


def test_cooperation_slope_ignores_which_users_form_groups():
    c = C(3, 2, 2)

    def rhs(users):
        def f(r, p, pt):
            return sum(term_bits(t, r, p, pt) for t in coop_terms(3, (1, 1), users))
        return f

    a = _slope(c, rhs(None), 2)
    b = _slope(c, rhs([2, 0, 1]), 2)
    assert abs(a - b) <= 0.05
    assert abs(a - float(lemma1_partition_value(c, F(3, 10), (1, 1)))) <= 0.05
