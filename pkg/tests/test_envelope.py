import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qenvelope.des import DelaySample
from qenvelope.envelope import (CANDIDATE_LOADS, PERCENTILES, envelope_quantiles, find_envelope_load,
                                grid, verify_dominance)
from qenvelope.errors import EmptySample, NoEnvelopeFound, ValidationError
from qenvelope.queueing import Mm1Params, mm1_quantile


def brute_force_envelope(data, ex):
    """Scalar re-statement of the search: loop loads, loop percentiles."""
    srt = np.sort(data)
    n = len(srt)
    for rho in [round(0.01 * k, 2) for k in range(1, 100)]:
        ok = True
        for i in range(50, 100):
            p = i / 100
            h = (n - 1) * p
            lo = int(np.floor(h))
            hi = min(lo + 1, n - 1)
            real = srt[lo] + (h - lo) * (srt[hi] - srt[lo])
            if not real < mm1_quantile(p, Mm1Params(ex, rho)):
                ok = False
                break
        if ok:
            return rho
    return None


def test_grids_match_published_sequences():
    assert len(PERCENTILES) == 50 and PERCENTILES[0] == 0.5 and PERCENTILES[-1] == 0.99
    assert len(CANDIDATE_LOADS) == 99 and CANDIDATE_LOADS[0] == 0.01 and CANDIDATE_LOADS[-1] == 0.99
    assert np.allclose(np.diff(PERCENTILES), 0.01)
    assert list(grid(0.1, 0.9, 0.1)) == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def test_zero_delays_take_first_candidate():
    res = find_envelope_load(np.zeros(100), 1e-6)
    assert res.rho_env == 0.01
    assert res.mean_env == pytest.approx(1e-6 / 0.99, rel=1e-15)


def test_empty_sample():
    with pytest.raises(EmptySample):
        find_envelope_load(np.empty(0), 1e-6)
    with pytest.raises(EmptySample):
        find_envelope_load(DelaySample(np.empty(0)), 1e-6)


def test_bad_inputs():
    with pytest.raises(ValidationError):
        find_envelope_load(np.ones(10), 0)
    with pytest.raises(ValidationError):
        find_envelope_load(np.ones(10), 1.0, candidate_loads=[0.5, 0.4])


def test_no_envelope_found():
    # delays of 1000 * E(X) everywhere need 1/(1-ρ) > 1000/ln 2
    with pytest.raises(NoEnvelopeFound):
        find_envelope_load(np.full(1000, 1000.0), 1.0)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_self_consistency_on_exponential_sample(seed):
    ex = 1.4e-6
    data = np.random.default_rng(seed).exponential(ex / (1 - 0.6), 1_000_000)
    res = find_envelope_load(data, ex)
    assert 0.60 <= res.rho_env <= 0.64
    assert verify_dominance(data, res, ex).dominated


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.05, 0.9), st.integers(200, 3000))
def test_search_matches_brute_force(seed, rho, n):
    ex = 2.0
    rng = np.random.default_rng(seed)
    # mixture: exponential body plus deterministic service, roughly M/G/1 shaped
    data = rng.exponential(ex / (1 - rho), n) + ex * rng.integers(0, 2, n)
    expected = brute_force_envelope(data, ex)
    if expected is None:
        with pytest.raises(NoEnvelopeFound):
            find_envelope_load(data, ex)
        return
    res = find_envelope_load(data, ex)
    assert res.rho_env == expected
    assert verify_dominance(data, res, ex).dominated
    if expected > 0.01:
        assert not verify_dominance(data, round(expected - 0.01, 2), ex).dominated


def test_result_invariants(sfmix_07):
    cfg, s = sfmix_07
    res = find_envelope_load(s, cfg.mean_service, mean_real=s.mean)
    assert res.mean_env == pytest.approx(cfg.mean_service / (1 - res.rho_env), rel=1e-12)
    assert np.all(res.env_quantiles > res.real_quantiles)
    first = int(np.flatnonzero(res.dominated)[0])
    assert res.candidates[first] == res.rho_env
    d = res.to_dict()
    assert set(d) >= {"rho_env", "mean_env_seconds", "grid", "margins"}
    assert len(d["grid"]) == 50 and min(d["margins"].values()) > 0


def test_sfmix_worked_example(sfmix_07):
    cfg, s = sfmix_07
    res = find_envelope_load(s, cfg.mean_service)
    assert res.rho_env == pytest.approx(0.78, abs=0.02)
    check = verify_dominance(s, res, cfg.mean_service)
    assert check.dominated and check.min_margin > 0
    # minimality witness
    assert not verify_dominance(s, round(res.rho_env - 0.01, 2), cfg.mean_service).dominated
    # margin at the 99th percentile is positive, like 29.31 - 24.77 μs
    assert check.margins[-1] > 0


def test_envelope_quantiles_examples():
    res = find_envelope_load(np.zeros(10), 1.40e-6)
    res.rho_env = 0.78
    q = envelope_quantiles(res, 1.40e-6, [0.0, 0.90, 0.99])
    assert q[0] == 0
    assert q[1] == pytest.approx(14.65e-6, rel=0.005)
    assert q[2] == pytest.approx(29.31e-6, rel=0.005)


def test_finer_grid_within_one_coarse_step(sfmix_07):
    cfg, s = sfmix_07
    coarse = find_envelope_load(s, cfg.mean_service).rho_env
    fine = find_envelope_load(s, cfg.mean_service, candidate_loads=grid(0.005, 0.99, 0.005)).rho_env
    assert coarse - 0.01 <= fine <= coarse + 1e-12
