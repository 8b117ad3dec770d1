"""End-to-end verification criteria, shared by ``arithcode check`` and the test suite."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Callable, List, Optional

from . import codec, moments, sim
from .exact import binary_expansion, dyadic_value
from .linalg import RationalMatrix

SEED = 42


@dataclass
class CriterionResult:
    number: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>3} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def example_reproduction() -> tuple:
    want = [
        (F(0), F(1, 3)),
        (F(1, 9), F(1, 3)),
        (F(5, 27), F(1, 3)),
        (F(19, 81), F(1, 3)),
        (F(19, 81), F(65, 243)),
        (F(179, 729), F(65, 243)),
    ]
    res = codec.encode("011101", F(2, 3))
    got = [(iv.low, iv.high) for iv in res.trace]
    fd = codec.first_disagreement_codeword(res.final)
    sub = codec.subinterval_codeword(res.final)
    mid = binary_expansion(res.final.midpoint, 11)
    t = min(_time(lambda: codec.encode("011101", F(2, 3))) for _ in range(50))
    ok = got == want and fd == "01" and sub == "010000" and mid == "01000001101" and t < 1e-3
    return ok, f"final=[{res.final.low}, {res.final.high}] fd={fd} sub={sub} mid={mid}... encode {t * 1e6:.0f}us"


def _time(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def roundtrip(max_n: int = 12, ps=(F(1, 3), F(1, 2), F(2, 3), F(2, 5))) -> tuple:
    count = 0
    for p in ps:
        for n in range(max_n + 1):
            for tup in itertools.product("01", repeat=n):
                msg = "".join(tup)
                w = codec.subinterval_codeword(codec.encode_interval(msg, p))
                if codec.decode(dyadic_value(w), n, p) != msg:
                    return False, f"roundtrip failed for {msg} at p={p}"
                count += 1
    return True, f"{count} messages decoded exactly"


def doubly_stochastic() -> tuple:
    for p in (F(1, 3), F(1, 2), F(2, 5), F(9, 10)):
        for m in range(1, 11):
            rep = moments.stochasticity_check(moments.build_w(m, p))
            if not rep.regular:
                return False, f"m={m} p={p}: {rep.failures}"
    return True, "W_m regular doubly stochastic for m=1..10, 4 values of p"


def spectral_identities(max_m: int = 8) -> tuple:
    for p in (F(1, 3), F(1, 2), F(2, 5), F(9, 10)):
        for m in range(1, max_m + 1):
            try:
                rep = moments.conjugate(m, p)
            except moments.ConsistencyError as exc:
                return False, str(exc)
            q = 1 - p
            want = sorted((p**k + q**k for k in range(1, m + 2)), reverse=True)
            if list(rep.eigenvalues) != want:
                return False, f"eigenvalues differ at m={m} p={p}"
    return True, f"all conjugation identities exact for m=1..{max_m}"


def oracle_equality() -> tuple:
    checked = 0
    for p in (F(1, 3), F(1, 2), F(2, 5)):
        for m in range(1, 5):
            for n in range(13):
                if moments.moment_vector(m, n, p).components != sim.brute_force_moments(m, n, p).components:
                    return False, f"mismatch at m={m} n={n} p={p}"
                checked += 1
    return True, f"{checked} (m, n, p) moment vectors equal the enumeration"


def closed_forms() -> tuple:
    for p in (F(1, 3), F(1, 2), F(2, 5), F(9, 10)):
        q = 1 - p
        for mv in moments.moment_trajectory(1, p, 200):
            ex, ey = mv.components
            if (ex, ey) != moments.mean_closed_form(mv.n, p):
                return False, f"mean closed form fails at n={mv.n} p={p}"
            if ey - ex != (2 * p * p - 2 * p + 1) ** mv.n:
                return False, f"E[L_n] fails at n={mv.n} p={p}"
        for mv in moments.moment_trajectory(2, p, 60):
            ex2, exy, ey2 = mv.components
            ex, ey = moments.mean_closed_form(mv.n, p)
            var_l = (ex2 - 2 * exy + ey2) - (ey - ex) ** 2
            if var_l != (p**3 + q**3) ** mv.n - (p**2 + q**2) ** (2 * mv.n):
                return False, f"V[L_n] fails at n={mv.n} p={p}"
    return True, "means n<=200, E[L_n] n<=200, V[L_n] n<=60 all exact"


def uniform_limit_exact() -> tuple:
    worst_dev, worst_gap = F(0), F(0)
    for p in (F(1, 3), F(1, 2), F(2, 5)):
        lam2 = 1 - 2 * p * (1 - p)
        for m in range(1, 7):
            devs = moments.deviation_profile(m, p, 100)
            worst_dev = max(worst_dev, devs[100])
            if devs[100] >= F(1, 10**20):
                return False, f"deviation {float(devs[100]):.3g} at m={m} p={p}"
            for n in range(60, 101):
                gap = abs(devs[n] / devs[n - 1] - lam2)
                worst_gap = max(worst_gap, gap)
                if gap >= F(1, 10**6):
                    return False, f"ratio off by {float(gap):.3g} at m={m} n={n} p={p}"
    return True, f"max deviation at n=100 {float(worst_dev):.3g}; max ratio gap n>=60 {float(worst_gap):.3g}"


def uniform_limit_statistical(trials: int = 100_000, n: int = 64) -> tuple:
    parts = []
    for p in (F(1, 3), F(1, 2), F(2, 5), F(9, 10)):
        rep = sim.run_distribution_experiment(sim.SimConfig(p, n, trials, SEED))
        if rep.ks_statistic >= rep.ks_critical:
            return False, f"KS {rep.ks_statistic:.5f} >= {rep.ks_critical:.5f} at p={p}"
        worst = 0.0
        for m in range(1, 7):
            target = 1 / (m + 1)
            zs = [abs(v - target) / se for v, se in zip(rep.empirical_moments[m], rep.moment_std_errors[m])]
            zs.append(abs(rep.midpoint_moments[m] - target) / rep.midpoint_std_errors[m])
            worst = max(worst, max(zs))
        if worst > 5:
            return False, f"moment off by {worst:.2f} SE at p={p}"
        parts.append(f"p={p}: KS={rep.ks_statistic:.5f} maxz={worst:.2f}")
    return True, "; ".join(parts) + f" (critical {sim.KS_CRITICAL_01 / trials ** 0.5:.5f})"


def functional_equation(trials: int = 100_000, n: int = 8, p: F = F(1, 3)) -> tuple:
    cfg = sim.SimConfig(p, n, trials, SEED)
    checks = [sim.mgf_check(cfg, u, v) for u, v in ((0.5, -0.3), (1.0, 1.0), (-0.7, 0.2))]
    ok = all(abs(c.z_score) <= 4 for c in checks)
    return ok, ", ".join(f"z({c.u},{c.v})={c.z_score:+.2f}" for c in checks)


def compression_rate(trials: int = 200, n: int = 1024, p: F = F(1, 3)) -> tuple:
    rep = sim.compression_rate_experiment(sim.SimConfig(p, n, trials, SEED, backend="exact"))
    ok = abs(rep.mean_bits_per_symbol - rep.entropy) <= 0.02
    return ok, f"{rep.mean_bits_per_symbol:.4f} bits/symbol vs H={rep.entropy:.4f}"


def _concentration_report(trials: int, n: int, p: F):
    return sim.concentration_experiment(sim.SimConfig(p, n, trials, SEED))


def concentration(trials: int = 100_000, n: int = 30, p: F = F(1, 3)) -> tuple:
    """Tail at n=30 is zero and the Chebyshev bound V[L_n]/eps**2 dominates every tail."""
    rep = _concentration_report(trials, n, p)
    last = [r for r in rep.rows if r.n == n and r.eps == 0.1][0]
    bad = [r for r in rep.rows if r.empirical > F(r.chebyshev_bound)]
    ok = last.empirical == 0 and not bad
    detail = f"P(L_{n}>0.1)={last.empirical}"
    if bad:
        detail += "; V/eps^2 below empirical tail at " + ", ".join(
            f"(n={r.n}, eps={r.eps}: {r.empirical:.4f} > {float(F(r.chebyshev_bound)):.4f})" for r in bad
        )
    return ok, detail


def concentration_centered(trials: int = 100_000, n: int = 30, p: F = F(1, 3)) -> tuple:
    """Companion check with the centered Chebyshev bound V[L_n]/(eps - E[L_n])**2."""
    rep = _concentration_report(trials, n, p)
    ok = rep.all_dominated and rep.nonincreasing
    bad = [r for r in rep.rows if not r.empirical_within_centered]
    return ok, f"{len(rep.rows)} (n, eps) tails checked, {len(bad)} exceed the centered bound"


CRITERIA: List[tuple] = [
    ("1", "example reproduction", example_reproduction),
    ("2", "exhaustive roundtrip n<=12", roundtrip),
    ("3", "W_m regular doubly stochastic", doubly_stochastic),
    ("4", "spectral identities", spectral_identities),
    ("5", "moment vector = enumeration oracle", oracle_equality),
    ("6", "closed forms for means and lengths", closed_forms),
    ("7", "uniform limit, exact route", uniform_limit_exact),
    ("8", "uniform limit, statistical route", uniform_limit_statistical),
    ("9", "functional equation (MGF)", functional_equation),
    ("10", "compression rate vs entropy", compression_rate),
    ("11", "concentration, V/eps^2 bound", concentration),
    ("11b", "concentration, centered Chebyshev", concentration_centered),
]

STATISTICAL = {"8", "9", "10", "11", "11b"}


def run_criterion(number: str, name: str, fn: Callable[[], tuple]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not abort the whole run
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(ok), detail, time.perf_counter() - t0)


def run_all(skip_statistical: bool = False, only: Optional[List[str]] = None) -> List[CriterionResult]:
    out = []
    for number, name, fn in CRITERIA:
        if only and number not in only:
            continue
        if skip_statistical and number in STATISTICAL:
            continue
        out.append(run_criterion(number, name, fn))
    return out


def internal_consistency() -> List[CriterionResult]:
    """Cheap structural checks beyond the numbered criteria."""

    def p_q_symmetry():
        # swapping p and q mirrors the interval: (X, Y) -> (1 - Y, 1 - X)
        for p in (F(1, 3), F(2, 5)):
            for m in range(1, 5):
                if moments.moment_vector(m, 7, p).components != moments.mirrored_moments(m, 7, 1 - p):
                    return False, f"mirror symmetry fails m={m} p={p}"
        return True, "moments at p equal mirrored moments at 1-p"

    def eigenvector_orthogonality():
        for p in (F(1, 3), F(2, 5)):
            for m in range(1, 6):
                for lam, sums in moments.eigenvector_sums(m, p):
                    if lam != 1 and any(s != 0 for s in sums):
                        return False, f"eigenvector for {lam} not orthogonal to ones"
        return True, "non-principal eigenvectors sum to 0"

    def ones_eigenvector():
        for m in range(1, 8):
            W = moments.build_w(m, F(2, 7))
            ones = (F(1),) * (m + 1)
            if W.apply(ones) != ones or W.transpose().apply(ones) != ones:
                return False, f"ones is not a left/right eigenvector at m={m}"
        return True, "all-ones vector fixed on both sides"

    def w_equals_u_plus_l():
        for m in range(1, 9):
            for p in (F(1, 3), F(9, 10)):
                if moments.build_u(m, p) + moments.build_l(m, p) != moments.build_w(m, p):
                    return False, f"U+L != W at m={m} p={p}"
        return True, "U_m + L_m == W_m"

    def idempotents_m1():
        p = F(2, 5)
        lam = 1 - 2 * p * (1 - p)
        E1 = RationalMatrix([[F(1, 2)] * 2] * 2)
        E2 = RationalMatrix([[F(1, 2), F(-1, 2)], [F(-1, 2), F(1, 2)]])
        W = moments.build_w(1, p)
        for n in range(30):
            if W**n != E1 + E2.scale(lam**n):
                return False, f"W_1^n spectral form fails at n={n}"
        return True, "W_1^n == E1 + (1-2pq)^n E2"

    checks = [
        ("c1", "p<->q symmetry", p_q_symmetry),
        ("c2", "eigenvector orthogonality", eigenvector_orthogonality),
        ("c3", "principal eigenvector", ones_eigenvector),
        ("c4", "W = U + L", w_equals_u_plus_l),
        ("c5", "m=1 idempotent expansion", idempotents_m1),
    ]
    return [run_criterion(*c) for c in checks]
