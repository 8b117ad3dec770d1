import io
import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.stats

from arithcode import sim
from arithcode.codec import encode_interval
from arithcode.exact import DomainError
from arithcode.moments import mean_closed_form, length_moment
from arithcode.sim import (
    SimConfig,
    binary_entropy,
    brute_force_moments,
    compression_rate_experiment,
    concentration_experiment,
    exact_tail,
    gen_message,
    gen_messages,
    ks_statistic,
    mgf_check,
    mgf_exact,
    run_distribution_experiment,
)


def test_gen_message_basics():
    assert gen_message(5, 0, 0, F(1, 3)) == ""
    assert gen_message(5, 17, 50, F(1, 3)) == gen_message(5, 17, 50, F(1, 3))
    assert gen_message(5, 17, 50, F(1, 3)) != gen_message(5, 18, 50, F(1, 3))
    batch = gen_messages(5, 50, F(1, 3), 20)
    assert gen_message(5, 17, 50, F(1, 3)) == "".join(map(str, batch[17]))


def test_gen_message_frequency_million_bits():
    msg = gen_message(123, 0, 10**6, F(1, 3))
    frac = msg.count("1") / 10**6
    assert abs(frac - 1 / 3) <= 4 * math.sqrt((1 / 3) * (2 / 3) / 10**6)


def test_sim_config_validation():
    with pytest.raises(DomainError):
        SimConfig(F(1, 3), 513, 10)
    SimConfig(F(1, 3), 513, 10, backend="exact")
    with pytest.raises(DomainError):
        SimConfig(F(1, 3), 5, 0)
    with pytest.raises(DomainError):
        SimConfig(F(1), 5, 1)
    with pytest.raises(DomainError):
        SimConfig(F(1, 3), 5, 1, seed=-1)
    with pytest.raises(DomainError):
        SimConfig(F(1, 3), 5, 1, backend="gpu")


def test_brute_force_guard_and_start():
    with pytest.raises(DomainError):
        brute_force_moments(2, 15, F(1, 2))
    assert brute_force_moments(3, 0, F(1, 3)).components == (0, 0, 0, 1)


@pytest.mark.parametrize("p", [F(1, 3), F(2, 5)], ids=str)
def test_brute_force_matches_codec_enumeration(p):
    n, m = 7, 3
    q = 1 - p
    comps = [F(0)] * (m + 1)
    for tup in itertools.product("01", repeat=n):
        msg = "".join(tup)
        ones = msg.count("1")
        w = p**ones * q ** (n - ones)
        iv = encode_interval(msg, p)
        for r in range(m + 1):
            comps[r] += w * iv.low ** (m - r) * iv.high**r
    assert brute_force_moments(m, n, p).components == tuple(comps)


def test_ks_statistic_examples():
    assert ks_statistic([0.5]) == 0.5
    N = 10
    assert ks_statistic([(k / N) - 1 / (2 * N) for k in range(1, N + 1)]) == pytest.approx(1 / (2 * N))
    assert ks_statistic([i / N for i in range(1, N + 1)]) == pytest.approx(1 / N)
    with pytest.raises(DomainError):
        ks_statistic([])


def test_ks_statistic_matches_scipy():
    rng = np.random.default_rng(0)
    for size in (1, 7, 1000):
        u = rng.random(size)
        assert ks_statistic(u) == pytest.approx(scipy.stats.kstest(u, "uniform").statistic, abs=1e-15)


def test_binary_entropy():
    assert round(binary_entropy(F(1, 3)), 4) == 0.9183
    assert binary_entropy(F(1, 2)) == 1.0
    assert round(binary_entropy(F(1, 4)), 4) == 0.8113
    assert binary_entropy(F(0)) == 0.0 and binary_entropy(F(1)) == 0.0


def test_single_trial_report():
    rep = run_distribution_experiment(SimConfig(F(1, 3), 10, 1, seed=9))
    x = rep.empirical_moments[1]
    u = (x[0] + x[1]) / 2
    assert rep.ks_statistic == pytest.approx(max(u, 1 - u))
    assert all(0 <= v <= 1 for vs in rep.empirical_moments.values() for v in vs)


def test_report_is_deterministic():
    cfg = SimConfig(F(2, 5), 40, 3000, seed=77)
    assert run_distribution_experiment(cfg).to_json() == run_distribution_experiment(cfg).to_json()


def test_midpoint_mean_clt_band():
    rep = run_distribution_experiment(SimConfig(F(1, 2), 64, 100_000, seed=42))
    assert abs(rep.midpoint_moments[1] - 0.5) <= 4 * math.sqrt(1 / 12 / 100_000)


@pytest.mark.parametrize("p", [F(1, 3), F(1, 2), F(9, 10)], ids=str)
def test_float_and_exact_backends_agree(p):
    n, trials = 32, 400
    xf, yf, _ = sim.simulate_intervals(SimConfig(p, n, trials, seed=5))
    xe, ye, bits = sim.simulate_intervals(SimConfig(p, n, trials, seed=5, backend="exact"))
    assert np.max(np.abs(0.5 * (xf + yf) - 0.5 * (xe + ye))) <= 2**-40
    assert len(bits) == trials


def test_exact_backend_reports_code_bits():
    rep = run_distribution_experiment(SimConfig(F(1, 3), 64, 50, seed=1, backend="exact"))
    assert rep.mean_code_bits is not None and 0.5 < rep.mean_code_bits < 1.3


def test_empirical_moments_match_exact_values():
    # three-way chain at small n: samples -> exact moment vector -> enumeration
    p, n, trials = F(2, 5), 8, 100_000
    rep = run_distribution_experiment(SimConfig(p, n, trials, seed=3), max_order=3)
    for m in (1, 2, 3):
        exact = brute_force_moments(m, n, p).components
        for got, se, want in zip(rep.empirical_moments[m], rep.moment_std_errors[m], exact):
            assert abs(got - float(want)) <= 5 * se


def test_samples_csv():
    buf = io.StringIO()
    run_distribution_experiment(SimConfig(F(1, 3), 12, 5, seed=2, backend="exact"), samples_csv=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "trial,x,y,midpoint,code_bits"
    assert len(lines) == 6
    assert lines[1].split(",")[-1].isdigit()


def test_exact_tail_against_enumeration():
    p, eps = F(1, 3), F(1, 10)
    for n in range(9):
        direct = F(0)
        for tup in itertools.product("01", repeat=n):
            a = tup.count("1")
            L = p**a * (1 - p) ** (n - a)
            if L > eps:
                direct += L
        assert exact_tail(n, p, eps) == direct


def test_concentration_edge_cases():
    rep = concentration_experiment(SimConfig(F(1, 2), 20, 2000, seed=4), eps_values=("1/10",))
    rows = {r.n: r for r in rep.rows}
    assert rows[0].empirical == 1.0
    assert all(F(r.chebyshev_bound) == 0 for r in rep.rows)  # L_n is deterministic at p = 1/2
    assert rows[3].empirical == 1.0 and rows[4].empirical == 0.0  # (1/2)**3 > 0.1 > (1/2)**4
    assert rows[20].empirical == 0.0
    assert rep.nonincreasing


def test_concentration_tail_vanishes():
    rep = concentration_experiment(SimConfig(F(1, 3), 30, 20_000, seed=8))
    last = [r for r in rep.rows if r.n == 30 and r.eps == 0.1][0]
    assert last.empirical == 0.0
    bound = (F(1, 3) ** 30 - F(5, 9) ** 60) / F(1, 100)  # E[L^2] = (p^3 + q^3)^n
    assert F(last.chebyshev_bound) == bound


def test_mgf_at_origin_is_exact():
    c = mgf_check(SimConfig(F(1, 3), 8, 1000, seed=1), 0.0, 0.0)
    assert c.lhs == 1.0 and c.rhs == 1.0 and c.z_score == 0.0


def test_mgf_one_step_by_hand():
    p, u, v = F(1, 3), 0.4, -0.9
    pf, qf = float(p), float(1 - p)
    assert mgf_exact(0, p, u, v) == pytest.approx(math.exp(v))
    rhs = qf * math.exp(qf * v) + pf * math.exp(qf * u + v)
    assert mgf_exact(1, p, u, v) == pytest.approx(rhs, rel=1e-14)


@pytest.mark.parametrize("u,v", [(0.5, -0.3), (1.0, 1.0), (-0.7, 0.2), (2.0, -2.0)])
def test_functional_equation_exact_enumeration(u, v):
    p = F(2, 5)
    pf, qf = float(p), float(1 - p)
    for n in range(9):
        lhs = mgf_exact(n + 1, p, u, v)
        rhs = qf * mgf_exact(n, p, u + pf * v, qf * v) + pf * mgf_exact(n, p, pf * u, qf * u + v)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_mgf_check_statistical():
    c = mgf_check(SimConfig(F(1, 3), 8, 100_000, seed=42), 0.5, -0.3)
    assert abs(c.z_score) <= 4
    assert c.lhs == pytest.approx(mgf_exact(9, F(1, 3), 0.5, -0.3), rel=5e-3)


def test_mgf_check_domain():
    with pytest.raises(DomainError):
        mgf_check(SimConfig(F(1, 3), 8, 10), 2.5, 0.0)


def test_rate_needs_exact_backend():
    with pytest.raises(DomainError):
        compression_rate_experiment(SimConfig(F(1, 3), 64, 10))


def test_rate_skewed_source():
    rep = compression_rate_experiment(SimConfig(F(9, 10), 1024, 200, seed=42, backend="exact"))
    assert round(rep.entropy, 3) == 0.469
    assert abs(rep.mean_bits_per_symbol - rep.entropy) <= 0.02


def test_rate_fair_source():
    rep = compression_rate_experiment(SimConfig(F(1, 2), 1024, 20, seed=42, backend="exact"))
    # L_n = 2**-n exactly, so the stream codeword has exactly n bits
    assert rep.mean_bits_per_symbol == 1.0


def test_mean_deviation_slope():
    for p in (F(1, 3), F(2, 5), F(9, 10)):
        ns = np.arange(1, 200)
        logs = [math.log(F(1, 2) - mean_closed_form(int(n), p)[0]) for n in ns]
        slope = np.polyfit(ns, logs, 1)[0]
        assert abs(slope - math.log(1 - 2 * p * (1 - p))) < 1e-9


def test_length_moment_vs_simulation():
    p, n = F(1, 3), 10
    x, y, _ = sim.simulate_intervals(SimConfig(p, n, 50_000, seed=6))
    L = y - x
    assert abs(L.mean() - float(length_moment(n, p))) < 5 * L.std() / math.sqrt(L.size)
