"""Classical interval tests.

Each non-trivial formula is checked against an independent straight-line
transcription written here with no shared code, plus frozen values computed
from those transcriptions.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffprop import (
    CLASSICAL_METHODS,
    ConfidenceLevel,
    Counts,
    DegenerateCountsError,
    Design,
    MethodId,
    ci_k1,
    ci_k2,
    ci_k2_prime,
    ci_k3,
    ci_k4,
    ci_k5,
    ci_k6,
    ci_k7,
    ci_mee_anbar,
    classical_interval,
    truncate,
    wilson_bounds,
)

Z95 = 1.9599639845400545
LEVEL = ConfidenceLevel(0.95)
D50 = Design(50, 10)
D100 = Design(100, 100)
D10 = Design(10, 10)


# ----------------------------------------------------------------------
# independent transcription oracles

def oracle_k4(x1, x2, n1, n2, jeffreys_perks=False):
    th = x1 / n1 - x2 / n2
    u = 0.25 * (1 / n1 + 1 / n2)
    nu = 0.25 * (1 / n1 - 1 / n2)
    if jeffreys_perks:
        psi = 0.5 * ((x1 + 0.5) / (n1 + 1) + (x2 + 0.5) / (n2 + 1))
    else:
        psi = 0.5 * (x1 / n1 + x2 / n2)
    z2 = Z95 * Z95
    center = th + z2 * nu * (1 - 2 * psi) / (1 + z2 * u)
    w = Z95 / (1 + z2 * u) * math.sqrt(
        u * (4 * psi * (1 - psi) - th * th)
        + 2 * nu * (1 - 2 * psi) * th
        + 4 * z2 * u * u * (1 - psi) * psi
        + z2 * nu * nu * (1 - 2 * psi) ** 2
    )
    return center - w, center + w


def oracle_edgeworth(x1, x2, n1, n2):
    n = n1 + n2
    sigma = math.sqrt(n) * math.sqrt(x1 * (n1 - x1) / n1**3 + x2 * (n2 - x2) / n2**3)
    delta = ((n / n1) ** 2 * x1 * (n1 - x1) * (n1 - 2 * x1) / n1**3
             - (n / n2) ** 2 * x2 * (n2 - x2) * (n2 - 2 * x2) / n2**3)
    a = delta / (6 * sigma**2)
    b = n * (n1 - 2 * x1) / (2 * n1**2) - a
    return n, sigma, a, b


def oracle_k6(x1, x2, n1, n2):
    n, sigma, a, b = oracle_edgeworth(x1, x2, n1, n2)
    th = x1 / n1 - x2 / n2
    q = (a + b * Z95**2) / sigma
    rt = math.sqrt(n)
    return th - sigma / rt * (Z95 - q / rt), th + sigma / rt * (Z95 + q / rt)


def oracle_k7(x1, x2, n1, n2):
    n, sigma, a, b = oracle_edgeworth(x1, x2, n1, n2)
    th = x1 / n1 - x2 / n2
    rt = math.sqrt(n)
    bs = b * sigma

    def ginv(t):
        r = 1 + 3 * bs * (t / rt - a * sigma / n)
        return rt / bs * (math.copysign(abs(r) ** (1 / 3), r) - 1)

    return th - sigma / rt * ginv(Z95), th - sigma / rt * ginv(-Z95)


def oracle_wilson(x, n):
    ph = x / n
    z2 = Z95 * Z95
    disc = Z95 * math.sqrt(z2 + 4 * n * ph * (1 - ph))
    return ((2 * n * ph + z2 - disc) / (2 * (n + z2)),
            (2 * n * ph + z2 + disc) / (2 * (n + z2)))


# ----------------------------------------------------------------------
# K1

@pytest.mark.parametrize(
    "x1,x2,design,expected",
    [
        (16, 0, D50, (0.01975, 0.62025)),
        (21, 1, D50, (-0.00719, 0.64719)),
        (46, 6, D50, (0.08920, 0.55080)),
        (98, 1, D100, (0.831417, 1.10858)),
    ],
)
def test_k1_published(x1, x2, design, expected):
    iv = ci_k1(Counts(x1, x2, design), LEVEL)
    assert iv.lower == pytest.approx(expected[0], abs=1e-4)
    assert iv.upper == pytest.approx(expected[1], abs=1e-4)
    assert not iv.truncated


def test_k1_zero_counts_collapse():
    iv = ci_k1(Counts(0, 0, D10), LEVEL)
    assert iv.lower == 0.0 and iv.upper == 0.0


def test_k1_can_exit_parameter_space():
    iv = ci_k1(Counts(98, 1, D100), LEVEL)
    assert iv.upper > 1.0 and not iv.truncated


# ----------------------------------------------------------------------
# K2 / Mee-Anbar / K2'

@pytest.mark.parametrize(
    "x1,x2,design,expected",
    [
        (31, 3, D50, (0.00571, 0.63429)),
        (26, 2, D50, (0.03602, 0.60398)),
        (98, 1, D100, (0.936337, 1.00366)),
    ],
)
def test_k2_published(x1, x2, design, expected):
    iv = ci_k2(Counts(x1, x2, design), LEVEL)
    assert iv.lower == pytest.approx(expected[0], abs=1e-4)
    assert iv.upper == pytest.approx(expected[1], abs=1e-4)


def test_k2_degenerate_width_zero():
    iv = ci_k2(Counts(50, 0, D50), LEVEL)
    assert iv.lower == 1.0 and iv.upper == 1.0


@pytest.mark.parametrize("x1,x2", [(31, 3), (16, 0), (0, 0)])
def test_mee_anbar_identical_to_k2(x1, x2):
    k2 = ci_k2(Counts(x1, x2, D50), LEVEL)
    ma = ci_mee_anbar(Counts(x1, x2, D50), LEVEL)
    assert ma.lower == pytest.approx(k2.lower, abs=1e-12)
    assert ma.upper == pytest.approx(k2.upper, abs=1e-12)


@given(x1=st.integers(0, 50), x2=st.integers(0, 10))
@settings(max_examples=80, deadline=None)
def test_mee_anbar_identity_random(x1, x2):
    counts = Counts(x1, x2, D50)
    k2 = ci_k2(counts, LEVEL)
    ma = ci_mee_anbar(counts, LEVEL)
    assert abs(ma.lower - k2.lower) < 1e-12
    assert abs(ma.upper - k2.upper) < 1e-12


def test_k2_prime_radius_ratio():
    counts = Counts(31, 3, D50)
    k2 = ci_k2(counts, LEVEL)
    k2p = ci_k2_prime(counts, LEVEL)
    assert k2p.width == pytest.approx(k2.width * math.sqrt(60 / 59), rel=1e-12)
    zero = ci_k2_prime(Counts(0, 0, D50), LEVEL)
    assert zero.lower == 0.0 and zero.upper == 0.0


# ----------------------------------------------------------------------
# K3

def test_k3_published_extreme():
    iv = ci_k3(Counts(98, 1, D100), LEVEL)
    assert iv.lower == pytest.approx(0.771134, abs=1e-4)
    assert iv.upper == pytest.approx(1.16887, abs=1e-4)


def test_k3_zero_counts():
    # radius z * sqrt(0.5 * (1/10 + 1/10)) = z * sqrt(0.1)
    expected = Z95 * math.sqrt(0.1)
    assert expected == pytest.approx(0.6197950323045617, abs=1e-12)
    iv = ci_k3(Counts(0, 0, D10), LEVEL)
    assert iv.lower == pytest.approx(-expected, abs=1e-4)
    assert iv.upper == pytest.approx(expected, abs=1e-4)


@given(x1=st.integers(0, 50), x2=st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_k3_at_least_as_wide_as_k2(x1, x2):
    counts = Counts(x1, x2, D50)
    assert ci_k3(counts, LEVEL).width >= ci_k2(counts, LEVEL).width - 1e-12


# ----------------------------------------------------------------------
# K4

def test_k4_haldane_published_extreme():
    iv = ci_k4(Counts(98, 1, D100), LEVEL, "haldane")
    assert iv.lower == pytest.approx(0.931973, abs=1e-4)
    assert iv.upper == pytest.approx(1.00803, abs=1e-4)
    assert not iv.truncated


def test_k4_symmetric_counts_center_zero():
    iv = ci_k4(Counts(4, 4, D10), LEVEL, "haldane")
    assert iv.lower == pytest.approx(-iv.upper, abs=1e-12)


def test_k4_jeffreys_perks_against_transcription():
    expected = oracle_k4(16, 0, 50, 10, jeffreys_perks=True)
    # frozen from the transcription oracle
    assert expected[0] == pytest.approx(0.10435420967443956, abs=1e-12)
    assert expected[1] == pytest.approx(0.4487043620768668, abs=1e-12)
    iv = ci_k4(Counts(16, 0, D50), LEVEL, "jeffreys-perks")
    assert iv.lower == pytest.approx(expected[0], abs=1e-12)
    assert iv.upper == pytest.approx(expected[1], abs=1e-12)


@given(x1=st.integers(0, 50), x2=st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_k4_matches_transcription_random(x1, x2):
    for variant, jp in (("haldane", False), ("jeffreys-perks", True)):
        iv = ci_k4(Counts(x1, x2, D50), LEVEL, variant)
        lo, hi = oracle_k4(x1, x2, 50, 10, jeffreys_perks=jp)
        assert iv.lower == pytest.approx(lo, abs=1e-12)
        assert iv.upper == pytest.approx(hi, abs=1e-12)


def test_k4_unknown_variant():
    with pytest.raises(ValueError):
        ci_k4(Counts(1, 1, D10), LEVEL, "haldane-jp")


# ----------------------------------------------------------------------
# K5

def test_wilson_single_proportion_reference():
    lo, hi = wilson_bounds(5, 10, Z95)
    ref = oracle_wilson(5, 10)
    assert ref == (pytest.approx(0.23659309051256394, abs=1e-12),
                   pytest.approx(0.7634069094874361, abs=1e-12))
    assert lo == pytest.approx(ref[0], abs=1e-12)
    assert hi == pytest.approx(ref[1], abs=1e-12)
    assert lo == pytest.approx(0.2366, abs=1e-3)
    assert hi == pytest.approx(0.7634, abs=1e-3)


def test_wilson_forced_bounds():
    lo, hi = wilson_bounds(0, 10, Z95)
    assert lo == 0.0
    lo_c, hi_c = wilson_bounds(0, 10, Z95, corrected=True)
    assert lo_c == 0.0
    lo, hi = wilson_bounds(10, 10, Z95)
    assert hi == 1.0
    lo_c, hi_c = wilson_bounds(10, 10, Z95, corrected=True)
    assert hi_c == 1.0


def test_k5_zero_counts_structure():
    iv = ci_k5(Counts(0, 0, D10), LEVEL)
    u1 = wilson_bounds(0, 10, Z95)[1]
    u2 = wilson_bounds(0, 10, Z95)[1]
    assert iv.lower == pytest.approx(-Z95 * math.sqrt(u2 * (1 - u2) / 10), abs=1e-12)
    assert iv.upper == pytest.approx(Z95 * math.sqrt(u1 * (1 - u1) / 10), abs=1e-12)


@given(x1=st.integers(0, 10), x2=st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_k5_delta_identity_uncorrected(x1, x2):
    # the two displayed expressions for delta agree for uncorrected bounds
    l1, u1 = wilson_bounds(x1, 10, Z95)
    l2, u2 = wilson_bounds(x2, 10, Z95)
    t1, t2 = x1 / 10, x2 / 10
    lhs = math.sqrt((t1 - l1) ** 2 + (u2 - t2) ** 2)
    rhs = Z95 * math.sqrt(l1 * (1 - l1) / 10 + u2 * (1 - u2) / 10)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_k5_corrected_bounds_clamped():
    for x in range(11):
        lo, hi = wilson_bounds(x, 10, Z95, corrected=True)
        assert 0.0 <= lo <= hi <= 1.0


# ----------------------------------------------------------------------
# K6 / K7

def test_k6_symmetric_counts():
    # equal counts at equal sizes kill the skew terms entirely
    n, sigma, a, b = oracle_edgeworth(50, 50, 100, 100)
    assert a == 0.0 and b == 0.0
    iv = ci_k6(Counts(50, 50, D100), LEVEL)
    half = sigma / math.sqrt(n) * Z95
    assert iv.lower == pytest.approx(-half, abs=1e-12)
    assert iv.upper == pytest.approx(half, abs=1e-12)


def test_k6_against_transcription():
    expected = oracle_k6(31, 3, 50, 10)
    assert expected[0] == pytest.approx(0.01238914477362768, abs=1e-12)
    assert expected[1] == pytest.approx(0.640948097291806, abs=1e-12)
    iv = ci_k6(Counts(31, 3, D50), LEVEL)
    assert iv.lower == pytest.approx(expected[0], abs=1e-12)
    assert iv.upper == pytest.approx(expected[1], abs=1e-12)


def test_k6_contains_point_estimate_when_offsets_positive():
    counts = Counts(31, 3, D50)
    n, sigma, a, b = oracle_edgeworth(31, 3, 50, 10)
    q = (a + b * Z95**2) / sigma
    assert Z95 > q / math.sqrt(n)
    iv = ci_k6(counts, LEVEL)
    assert iv.lower < counts.theta_hat < iv.upper


def test_k7_against_transcription():
    expected = oracle_k7(31, 3, 50, 10)
    assert expected[0] == pytest.approx(0.015227386552576772, abs=1e-12)
    assert expected[1] == pytest.approx(0.6455232179273391, abs=1e-12)
    iv = ci_k7(Counts(31, 3, D50), LEVEL)
    assert iv.lower == pytest.approx(expected[0], abs=1e-12)
    assert iv.upper == pytest.approx(expected[1], abs=1e-12)
    assert iv.note is None


def test_k7_fallback_at_vanishing_cubic_coefficient():
    # b*sigma = 0 exactly for equal counts at equal sizes
    k6 = ci_k6(Counts(50, 50, D100), LEVEL)
    k7 = ci_k7(Counts(50, 50, D100), LEVEL)
    assert k7.note == "k6-fallback"
    assert k7.method is MethodId.K7
    assert k7.lower == k6.lower and k7.upper == k6.upper


def test_k7_taylor_limit_near_threshold():
    # g_inv(t) -> t - a*sigma/sqrt(n) as b*sigma -> 0; at the fallback
    # threshold the two differ by far less than 1e-6
    n, sigma, a = 60.0, 0.8, 0.3
    rt = math.sqrt(n)
    for bs in (1e-8, -1e-8):
        def ginv(t):
            r = 1 + 3 * bs * (t / rt - a * sigma / n)
            return rt / bs * (math.copysign(abs(r) ** (1 / 3), r) - 1)
        for t in (Z95, -Z95):
            limit = t - a * sigma / rt
            assert abs(ginv(t) - limit) < 1e-6


def test_k7_ordering_scan():
    # all counts at (10,10) except the four fully degenerate corners
    for x1 in range(11):
        for x2 in range(11):
            if x1 in (0, 10) and x2 in (0, 10):
                continue
            iv = ci_k7(Counts(x1, x2, D10), LEVEL)
            assert iv.lower < iv.upper


@pytest.mark.parametrize("x1,x2", [(0, 0), (10, 0), (0, 10), (10, 10)])
def test_edgeworth_degenerate_counts_raise(x1, x2):
    with pytest.raises(DegenerateCountsError):
        ci_k6(Counts(x1, x2, D10), LEVEL)
    with pytest.raises(DegenerateCountsError):
        ci_k7(Counts(x1, x2, D10), LEVEL)


def test_k6_k7_printed_formulas_are_not_relabeling_antisymmetric():
    # the cubic coefficient carries group-1 skew only, so swapping the
    # groups does not negate it; generic counts exhibit a macroscopic defect
    iv = ci_k6(Counts(31, 3, D50), LEVEL)
    swapped = ci_k6(Counts(3, 31, Design(10, 50)), LEVEL)
    defect = abs(iv.lower + swapped.upper)
    assert defect > 1e-3


# ----------------------------------------------------------------------
# shared properties

def counts_strategy():
    return st.tuples(st.integers(0, 50), st.integers(0, 10)).map(
        lambda t: Counts(t[0], t[1], D50)
    )


@given(c=counts_strategy())
@settings(max_examples=60, deadline=None)
def test_wald_family_centers_at_theta_hat(c):
    for method in (MethodId.K1, MethodId.K2, MethodId.K2_PRIME, MethodId.K3):
        iv = classical_interval(method, c, LEVEL)
        assert (iv.lower + iv.upper) / 2 == pytest.approx(c.theta_hat, abs=1e-12)


RELABEL_SYMMETRIC = tuple(
    m for m in CLASSICAL_METHODS if m not in (MethodId.K6, MethodId.K7)
)


@given(x1=st.integers(0, 12), x2=st.integers(0, 7))
@settings(max_examples=60, deadline=None)
def test_relabeling_antisymmetry(x1, x2):
    design = Design(12, 7)
    swapped_design = Design(7, 12)
    for method in RELABEL_SYMMETRIC:
        iv = classical_interval(method, Counts(x1, x2, design), LEVEL)
        sw = classical_interval(method, Counts(x2, x1, swapped_design), LEVEL)
        assert sw.lower == pytest.approx(-iv.upper, abs=1e-12)
        assert sw.upper == pytest.approx(-iv.lower, abs=1e-12)


def test_table2_rows_share_observed_difference():
    from fractions import Fraction

    for j in range(7):
        x1, x2 = 16 + 5 * j, j
        assert Fraction(x1, 50) - Fraction(x2, 10) == Fraction(8, 25)
        counts = Counts(x1, x2, D50)
        assert counts.theta_hat == pytest.approx(0.32, abs=1e-15)


# ----------------------------------------------------------------------
# truncation

def test_truncate_clamps_upper():
    iv = ci_k1(Counts(98, 1, D100), LEVEL)
    clamped = truncate(iv)
    assert clamped.upper == 1.0
    assert clamped.lower == iv.lower
    assert clamped.truncated


def test_truncate_noop_inside():
    iv = ci_k2(Counts(5, 5, D10), LEVEL)
    assert not truncate(iv).truncated
    assert truncate(iv).lower == iv.lower


def test_truncate_full_clamp():
    from diffprop import IntervalEstimate

    iv = IntervalEstimate(-1.2, -1.1, LEVEL, MethodId.K1)
    clamped = truncate(iv)
    assert clamped.lower == -1.0 and clamped.upper == -1.0
    assert clamped.truncated


def test_counts_validation():
    with pytest.raises(ValueError):
        Counts(51, 0, D50)
    with pytest.raises(ValueError):
        Counts(0, -1, D50)
