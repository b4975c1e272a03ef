import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbtv.core import CONSTANTS, ParamVec, Pmf, binom_pmf, sup_distance, tv
from pbtv.errors import (
    BadPartition,
    BadSplit,
    EmptyPart,
    EmptyVector,
    LengthMismatch,
    SupportTooLarge,
    TooLargeForBruteforce,
)
from pbtv.homog import (
    HOMOG_CSV_COLUMNS,
    Partition,
    averaged_family,
    binom_tv,
    binom_tv_family,
    delete_trial_kernel,
    homog_certificate,
    homogenize,
    mixture_law,
    mixture_weights,
    phi_monotonicity,
    pooled_mean,
    split_bound_check,
)
from pbtv.oracle import product_tv_bruteforce

from strategies import pairs, prob


def binom2_tv(a, b):
    """TV(Bin(2, a), Bin(2, b)) written out term by term."""
    pa = [(1 - a) ** 2, 2 * a * (1 - a), a * a]
    pb = [(1 - b) ** 2, 2 * b * (1 - b), b * b]
    return 0.5 * sum(abs(x - y) for x, y in zip(pa, pb))


# --- Partition / homogenize ----------------------------------------------


def test_partition_validation():
    part = Partition(4, (2, 0), (3, 1))
    assert part.I == (0, 2) and part.J == (1, 3)
    with pytest.raises(BadPartition):
        Partition(3, (0, 1), (1, 2))
    with pytest.raises(BadPartition):
        Partition(3, (0,), (1,))
    assert Partition.from_mask([True, False, True]) == Partition(3, (0, 2), (1,))


def test_homogenize_examples():
    m, h = homogenize([0.2, 0.8])
    assert m == 0.5 and h == ParamVec([0.5, 0.5])
    m, h = homogenize([0.3, 0.3, 0.3])
    assert h == ParamVec([0.3, 0.3, 0.3])
    m, h = homogenize([1.0, 0.0, 0.5])
    assert m == 0.5 and h == ParamVec([0.5] * 3)
    with pytest.raises(EmptyVector):
        homogenize([])


@given(st.lists(prob, min_size=1, max_size=50))
def test_homogenize_keeps_the_mean_in_range(p):
    m, h = homogenize(p)
    assert 0.0 <= m <= 1.0
    assert abs(m * len(p) - math.fsum(p)) <= 1e-12


# --- binomial TV ----------------------------------------------------------


def test_binom_tv_examples():
    assert binom_tv(7, 0.3, 0.3) == 0.0
    assert binom_tv(1, 0.0, 1.0) == 1.0
    assert binom_tv(2, 0.5, 0.6) == pytest.approx(0.11, abs=1e-15)
    assert binom_tv(0, 0.1, 0.9) == 0.0


def test_binom_tv_family_examples():
    assert np.all(binom_tv_family(0.4, 0.4, 10) == 0.0)
    assert binom_tv_family(0.0, 1.0, 3).tolist() == [0.0, 1.0, 1.0, 1.0]
    f = binom_tv_family(0.5, 0.6, 20)
    assert np.all(np.diff(f) >= -1e-12)
    for m in range(21):
        for k in range(21 - m):
            assert f[m + k] <= f[m] + f[k] + 1e-12


@given(prob, prob, st.integers(0, 60))
def test_binom_tv_family_matches_pointwise(a, b, m_max):
    f = binom_tv_family(a, b, m_max)
    assert f.shape == (m_max + 1,)
    for m in {0, m_max // 2, m_max}:
        assert abs(f[m] - binom_tv(m, a, b)) <= 1e-12


@given(prob, prob, st.integers(1, 80))
def test_binom_tv_family_is_monotone_and_subadditive(a, b, m_max):
    f = binom_tv_family(a, b, m_max)
    assert np.all(np.diff(f) >= -1e-12)
    i, j = np.meshgrid(np.arange(m_max + 1), np.arange(m_max + 1))
    ok = i + j <= m_max
    assert np.all(f[(i + j)[ok]] <= f[i[ok]] + f[j[ok]] + 1e-12)


# --- split lemma ----------------------------------------------------------


def test_split_equal_vectors():
    chk = split_bound_check([0.2, 0.7, 0.1], [0.2, 0.7, 0.1], Partition(3, (0,), (1, 2)))
    assert chk.delta_N == chk.delta_I == chk.delta_J == 0.0
    assert chk.holds_factor2


def test_split_example():
    chk = split_bound_check([1.0, 0.0], [0.0, 0.0], Partition(2, (0,), (1,)))
    assert chk.delta_I == 1.0 and chk.delta_J == 0.0
    # TV(Bin(2, 1/2), Bin(2, 0)) = 1 - 1/4
    assert chk.delta_N == pytest.approx(0.75, abs=1e-15)
    assert chk.holds_factor2
    assert chk.conjecture_slack == pytest.approx(0.25, abs=1e-15)


def test_split_errors():
    with pytest.raises(EmptyPart):
        split_bound_check([0.1, 0.2], [0.3, 0.4], Partition(2, (0, 1), ()))
    with pytest.raises(BadPartition):
        split_bound_check([0.1, 0.2], [0.3, 0.4], Partition(3, (0, 1), (2,)))
    with pytest.raises(LengthMismatch):
        split_bound_check([0.1, 0.2], [0.3], Partition(2, (0,), (1,)))


@given(pairs(min_size=2, max_size=40), st.data())
def test_split_factor_two(pq, data):
    p, q = pq
    n = len(p)
    mask = data.draw(st.lists(st.booleans(), min_size=n, max_size=n).filter(lambda m: 0 < sum(m) < n))
    chk = split_bound_check(p, q, Partition.from_mask(mask))
    assert chk.holds_factor2
    assert chk.factor2_slack >= -1e-9


# --- mixture representation -----------------------------------------------


def test_mixture_weights_are_binomial():
    w = mixture_weights(6, 2)
    assert np.max(np.abs(w - binom_pmf(6, 1 / 3).dense(0, 6))) == 0.0


def test_mixture_examples():
    x = mixture_law(2, 1, 0.2, 0.8)
    assert np.max(np.abs(x.dense(0, 2) - [0.25, 0.5, 0.25])) <= 1e-15
    x = mixture_law(9, 4, 0.35, 0.35)
    assert sup_distance(x, binom_pmf(9, 0.35)) <= 1e-15
    x = mixture_law(6, 2, 0.0, 0.0)
    assert x.offset == 0 and len(x) == 1
    assert x(0) == pytest.approx(1.0, abs=1e-12)


def test_mixture_bad_split():
    for size in (0, 5):
        with pytest.raises(BadSplit):
            mixture_law(5, size, 0.1, 0.2)


@given(st.integers(2, 120), st.data(), prob, prob)
def test_mixture_identity(n, data, a, b):
    size = data.draw(st.integers(1, n - 1))
    x = mixture_law(n, size, a, b)
    assert sup_distance(x, binom_pmf(n, pooled_mean(n, size, a, b))) <= 1e-12
    assert abs(x.mean() - (size * a + (n - size) * b)) <= 1e-9


# --- deletion kernel ------------------------------------------------------


def test_delete_kernel_examples():
    y = delete_trial_kernel(binom_pmf(2, 0.5), 1)
    assert y.mass.tolist() == [0.5, 0.5]
    y = delete_trial_kernel(Pmf.point(0), 4)
    assert y.offset == 0 and y.mass.tolist() == [1.0]
    y = delete_trial_kernel(binom_pmf(4, 0.3), 3)
    assert sup_distance(y, binom_pmf(3, 0.3)) <= 1e-14


def test_delete_kernel_support_errors():
    with pytest.raises(SupportTooLarge):
        delete_trial_kernel(binom_pmf(4, 0.3), 2)
    with pytest.raises(SupportTooLarge):
        delete_trial_kernel(Pmf.point(-1), 3)
    with pytest.raises(SupportTooLarge):
        delete_trial_kernel(Pmf.point(0), -1)


@pytest.mark.parametrize("m", [0, 1, 5, 30])
def test_delete_kernel_over_theta_grid(m):
    for theta in np.linspace(0.0, 1.0, 41):
        y = delete_trial_kernel(binom_pmf(m + 1, theta), m)
        assert sup_distance(y, binom_pmf(m, theta)) <= 1e-13


# --- averaging bound ------------------------------------------------------


@given(st.integers(1, 150), st.data(), prob, prob)
def test_averaging_bound(n, data, a, b):
    size = data.draw(st.integers(1, n))
    avg, twice = averaged_family(a, b, n, size)
    assert avg <= twice + 1e-9


def test_averaging_bad_size():
    with pytest.raises(BadSplit):
        averaged_family(0.1, 0.2, 5, 0)


# --- homogenization certificate -------------------------------------------


def test_phi_monotonicity():
    mono = phi_monotonicity([1.0, 0.0, 0.5], [0.0, 1.0, 0.6])
    assert mono.delta == pytest.approx(2.1)
    assert mono.delta_hom == pytest.approx(0.1)
    assert mono.holds()


@given(pairs(min_size=1, max_size=40))
def test_phi_monotonicity_property(pq):
    assert phi_monotonicity(*pq).holds(1e-12)


def test_certificate_equal_vectors():
    rep = homog_certificate([0.4, 0.1], [0.4, 0.1])
    assert rep.tv_product_lb == 0.0 and rep.tv_binom == 0.0
    assert rep.ratio is None
    assert rep.constant_check


def test_certificate_single_coordinate():
    rep = homog_certificate([0.7], [0.2])
    assert rep.tv_product_lb == pytest.approx(0.5, abs=1e-15)
    assert rep.tv_binom == pytest.approx(0.5, abs=1e-15)
    assert rep.ratio == pytest.approx(1.0, abs=1e-14)
    assert rep.constant_check


def test_certificate_tightness_family():
    eps = 0.01
    rep = homog_certificate([1 - 2 * eps, 0.5], [1.0, 0.5 + eps])
    # the product TV is 2 eps, the binomial side is explicit
    assert rep.tv_product_lb == pytest.approx(2 * eps, abs=1e-15)
    expected = 2 * eps / binom2_tv(0.75 - eps, 0.75 + eps / 2)
    assert rep.ratio == pytest.approx(expected, rel=1e-12)
    assert rep.ratio == pytest.approx(0.8918617614269783, rel=1e-12)
    assert abs(rep.ratio - 8 / 9) < 0.01


def test_certificate_paths():
    p = np.linspace(0.05, 0.95, 25)
    q = p[::-1].copy()
    with pytest.raises(TooLargeForBruteforce):
        homog_certificate(p, q, use_bruteforce=True)
    rep = homog_certificate(p, q, use_bruteforce=False)
    assert rep.path == "analytic"
    assert rep.constant_check
    assert homog_certificate(p[:6], q[:6]).path == "bruteforce"
    with pytest.raises(EmptyVector):
        homog_certificate([], [])


def test_certificate_csv_row():
    rep = homog_certificate([0.4, 0.1], [0.4, 0.1])
    row = dict(zip(HOMOG_CSV_COLUMNS, rep.csv_row()))
    assert row["ratio"] == ""
    assert row["constant_check"] is True


@given(pairs(min_size=1, max_size=10))
def test_certificate_holds(pq):
    rep = homog_certificate(*pq)
    assert rep.slack == rep.tv_product_lb - CONSTANTS.homog_c * rep.tv_binom
    assert rep.constant_check
    assert 0.0 <= rep.tv_binom <= 1.0


@given(st.integers(1, 10), prob, prob)
def test_sufficiency_of_the_sum(n, a, b):
    # for iid products the sum is sufficient, so no information is lost
    full = product_tv_bruteforce(np.full(n, a), np.full(n, b))
    assert abs(full - tv(binom_pmf(n, a), binom_pmf(n, b))) <= 1e-9


def test_homog_constant_value():
    assert CONSTANTS.homog_c == pytest.approx(1 / (48 * 1.2123507747416045), rel=1e-15)
