import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qenvelope import distributions as D
from qenvelope.errors import InfeasibleMoments, ParseError, ValidationError


def two_point():
    return D.PacketSizeDistribution((40, 1500), (0.5, 0.5), "half")


def test_trimodal_moments_match_published():
    d = D.trimodal()
    assert D.mean_bytes(d) == pytest.approx(340.33, abs=0.01)
    assert D.std_bytes(d) == pytest.approx(428.01, abs=0.01)
    assert D.scv(d) == pytest.approx(1.58, abs=0.01)


def test_hand_computed_moments():
    # mean (40+1500)/2, sd half the spread
    d = two_point()
    assert D.mean_bytes(d) == 770
    assert D.std_bytes(d) == pytest.approx(730, rel=1e-12)


def test_single_point():
    d = D.PacketSizeDistribution((1500,), (1.0,))
    assert D.mean_bytes(d) == 1500
    assert D.std_bytes(d) == 0
    assert D.scv(d) == 0


@pytest.mark.parametrize("name,mean,sd,scv", [
    ("amsix", 1019.03, 1161.66, 1.30),
    ("sfmix", 1750.41, 2062.69, 1.39),
    ("amsix-2pt", 1019.03, 1161.66, 1.30),
    ("sfmix-2pt", 1750.41, 2062.69, 1.39),
])
def test_ixp_builtins_reproduce_published_moments(name, mean, sd, scv):
    d = D.builtin(name)
    assert math.fsum(d.probs) == pytest.approx(1, abs=1e-9)
    assert D.mean_bytes(d) == pytest.approx(mean, rel=1e-6)
    assert D.std_bytes(d) == pytest.approx(sd, rel=1e-6)
    assert D.scv(d) == pytest.approx(scv, abs=0.01)


def test_builtin_unknown():
    with pytest.raises(ValidationError):
        D.builtin("nope")


@pytest.mark.parametrize("sizes,probs", [
    ((), ()),
    ((40, 40), (0.5, 0.5)),
    ((1500, 40), (0.5, 0.5)),
    ((0, 40), (0.5, 0.5)),
    ((40, 1500), (0.5, 0.4)),
    ((40, math.inf), (0.5, 0.5)),
])
def test_invariants_enforced(sizes, probs):
    with pytest.raises(ValidationError):
        D.PacketSizeDistribution(sizes, probs)


def test_sample_degenerate():
    d = D.PacketSizeDistribution((1500,), (1.0,))
    rng = np.random.default_rng(7)
    assert D.sample(d, rng) == 1500
    assert set(D.sample(d, rng, 100)) == {1500}


def test_sample_frequencies_law_of_large_numbers():
    d = D.trimodal()
    draws = D.sample(d, np.random.default_rng(2024), 1_000_000)
    freq = [np.mean(draws == s) for s in (40, 576, 1500)]
    assert freq == pytest.approx([7 / 12, 4 / 12, 1 / 12], abs=0.01)


def test_sample_deterministic():
    d = D.trimodal()
    a = D.sample(d, np.random.default_rng(3), 1000)
    b = D.sample(d, np.random.default_rng(3), 1000)
    assert np.array_equal(a, b)
    # one uniform per draw: batching does not change the sequence
    rng = np.random.default_rng(3)
    c = [D.sample(d, rng) for _ in range(1000)]
    assert np.array_equal(a, c)


def test_load_round_trip(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("40,0.5833333\n576,0.3333333\n1500,0.0833334\n")
    d = D.load_distribution(p)
    assert d.sizes == (40, 576, 1500)
    assert math.fsum(d.probs) == pytest.approx(1, abs=1e-12)
    assert d.probs == pytest.approx(D.trimodal().probs, abs=1e-6)


def test_load_renormalizes_within_tolerance(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("# rounded histogram\n\n1500,0.5005\n40,0.5\n")
    d = D.load_distribution(p)
    assert d.sizes == (40, 1500)
    assert math.fsum(d.probs) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("text,exc", [
    ("", ParseError),
    ("# only a comment\n", ParseError),
    ("40;0.5\n1500;0.5\n", ParseError),
    ("40,abc\n", ParseError),
    ("40,0.5\n1500,0.4\n", ValidationError),
    ("40,0.5\n40,0.5\n", ValidationError),
    ("-40,0.5\n1500,0.5\n", ValidationError),
    ("1,000,0.5\n", ParseError),
])
def test_load_errors(tmp_path, text, exc):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    with pytest.raises(exc):
        D.load_distribution(p)


def test_format_parse_round_trip():
    d = D.builtin("sfmix")
    back = D.parse_distribution(D.format_distribution(d), d.name)
    assert back == d


def test_moment_matched_recovers_two_point():
    # s_big = 770 + 730^2/730 = 1500, p = 730/1460
    d = D.moment_matched(770, 730, 40)
    assert d.sizes == (40, 1500)
    assert d.probs == pytest.approx((0.5, 0.5), abs=1e-12)


def test_moment_matched_amsix():
    d = D.moment_matched(1019.03, 1161.66, 64)
    assert D.mean_bytes(d) == pytest.approx(1019.03, abs=1e-3)
    assert D.std_bytes(d) == pytest.approx(1161.66, abs=1e-3)


def test_moment_matched_zero_sd():
    d = D.moment_matched(800, 0, 64)
    assert d.entries == [(800, 1.0)]


@pytest.mark.parametrize("mean,sd,anchor", [(100, 10, 100), (100, 10, 200), (100, -1, 40), (0, 1, 1)])
def test_moment_matched_infeasible(mean, sd, anchor):
    with pytest.raises(InfeasibleMoments):
        D.moment_matched(mean, sd, anchor)


@settings(max_examples=200, deadline=None)
@given(
    mean=st.floats(100, 5000),
    cv=st.floats(0.01, 3),
    frac=st.floats(0.01, 0.99),
)
def test_moment_matched_round_trip(mean, cv, frac):
    sd = cv * mean
    anchor = frac * mean
    d = D.moment_matched(mean, sd, anchor)
    assert D.mean_bytes(d) == pytest.approx(mean, rel=1e-6)
    assert D.std_bytes(d) == pytest.approx(sd, rel=1e-6)
    again = D.moment_matched(D.mean_bytes(d), D.std_bytes(d), anchor)
    assert D.mean_bytes(again) == pytest.approx(mean, rel=1e-6)
    assert D.std_bytes(again) == pytest.approx(sd, rel=1e-6)


def test_max_entropy_form():
    # log p must be quadratic in size: second differences of log p / size
    # along the support are consistent with one (a, b) pair.
    d = D.builtin("amsix")
    s, lp = d.size_array, np.log(d.prob_array)
    coef = np.polyfit(s, lp, 2)
    assert np.allclose(np.polyval(coef, s), lp, atol=1e-8)


def test_max_entropy_infeasible():
    with pytest.raises(InfeasibleMoments):
        D.max_entropy_on_support(1000, 5000, (64, 576, 1500))
