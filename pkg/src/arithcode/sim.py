"""Seeded Monte Carlo experiments and exhaustive oracles for the coder.

Random bits come from a counter-based generator: bit ``j`` of trial ``t`` in
stream ``s`` is a pure function of ``(seed, s, t, j)``. Reports therefore do
not depend on how trials are batched, and the compiled and NumPy kernels
agree bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .codec import encode_interval, subinterval_codeword
from .exact import DomainError, RationalLike, as_probability, format_rational
from .moments import MomentVector, length_moment

FLOAT_MAX_N = 512
MAX_ORDER = 6
BRUTE_FORCE_MAX_N = 14
KS_CRITICAL_01 = 1.628  # asymptotic Kolmogorov constant at alpha = 0.01

# independent random streams under one seed
STREAM_MAIN = 0
STREAM_MGF_NEXT = 1
STREAM_MGF_PREV = 2

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    p: Fraction
    n: int
    trials: int
    seed: int = 0
    backend: str = "float"

    def __post_init__(self):
        object.__setattr__(self, "p", as_probability(self.p))
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")
        if not 0 <= self.seed <= _SEED_MASK:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.backend not in ("float", "exact"):
            raise DomainError(f"backend must be 'float' or 'exact', got {self.backend!r}")
        if self.backend == "float" and self.n > FLOAT_MAX_N:
            raise DomainError(f"n={self.n} exceeds the float backend limit of {FLOAT_MAX_N}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["p"] = format_rational(self.p)
        return d


def _threshold(p: Fraction) -> int:
    # P(bit = 1) = threshold / 2**53, within 2**-53 of p
    return (p.numerator << 53) // p.denominator


def gen_messages(
    seed: int, n: int, p: RationalLike, trials: int, start: int = 0, stream: int = STREAM_MAIN
) -> np.ndarray:
    """``(trials, n)`` array of message bits for trial indices ``start, start+1, ...``."""
    p = as_probability(p)
    return kernels.message_bits(kernels.stream_key(seed, stream), start, trials, n, _threshold(p))


def gen_message(seed: int, trial: int, n: int, p: RationalLike, stream: int = STREAM_MAIN) -> str:
    """Message bits of a single trial as a '0'/'1' string."""
    row = gen_messages(seed, n, p, 1, start=trial, stream=stream)[0]
    return row.tobytes().translate(bytes.maketrans(b"\x00\x01", b"01")).decode()


def simulate_intervals(
    cfg: SimConfig, stream: int = STREAM_MAIN, n: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray, Optional[List[int]]]:
    """Final ``(x, y)`` per trial; the exact backend also returns codeword lengths."""
    n = cfg.n if n is None else n
    key = kernels.stream_key(cfg.seed, stream)
    thr = _threshold(cfg.p)
    if cfg.backend == "float":
        x, y = kernels.encode_float(key, 0, cfg.trials, n, thr, float(1 - cfg.p))
        return x, y, None
    bits = kernels.message_bits(key, 0, cfg.trials, n, thr)
    xs = np.empty(cfg.trials)
    ys = np.empty(cfg.trials)
    code_bits = []
    for t, row in enumerate(bits):
        iv = encode_interval(row.tolist(), cfg.p)
        xs[t] = float(iv.low)
        ys[t] = float(iv.high)
        code_bits.append(len(subinterval_codeword(iv)))
    return xs, ys, code_bits


# ---------------------------------------------------------------- oracles


@lru_cache(maxsize=64)
def _leaves(n: int, p: Fraction) -> Tuple[Tuple[Fraction, Fraction, Fraction], ...]:
    """``(weight, X_n, Y_n)`` for every message of length n, by walking the step rule."""
    q = 1 - p
    level = [(Fraction(1), Fraction(0), Fraction(1))]
    for _ in range(n):
        nxt = []
        for w, x, y in level:
            s = x + q * (y - x)
            nxt.append((w * q, x, s))
            nxt.append((w * p, s, y))
        level = nxt
    return tuple(level)


def brute_force_moments(m: int, n: int, p: RationalLike) -> MomentVector:
    """Exact mixed moments of order m by summing over all ``2**n`` messages."""
    if n > BRUTE_FORCE_MAX_N:
        raise DomainError(f"brute force enumeration refuses n={n} > {BRUTE_FORCE_MAX_N}")
    if m < 1 or n < 0:
        raise DomainError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    p = as_probability(p)
    comps = [Fraction(0)] * (m + 1)
    for w, x, y in _leaves(n, p):
        for r in range(m + 1):
            comps[r] += w * x ** (m - r) * y**r
    return MomentVector(m, n, p, tuple(comps))


def exact_tail(n: int, p: RationalLike, eps: RationalLike) -> Fraction:
    """``P(L_n > eps)`` exactly, summing binomial weights of the lengths ``p**a q**(n-a)``."""
    p = as_probability(p)
    eps = Fraction(eps)
    q = 1 - p
    total = Fraction(0)
    for a in range(n + 1):
        L = p**a * q ** (n - a)
        if L > eps:
            total += math.comb(n, a) * L
    return total


def mgf_exact(n: int, p: RationalLike, u: float, v: float) -> float:
    """``E[exp(u X_n + v Y_n)]`` by enumeration (float summation of exact outcomes)."""
    if n > BRUTE_FORCE_MAX_N:
        raise DomainError(f"enumeration refuses n={n} > {BRUTE_FORCE_MAX_N}")
    p = as_probability(p)
    return math.fsum(float(w) * math.exp(u * float(x) + v * float(y)) for w, x, y in _leaves(n, p))


# ---------------------------------------------------------------- statistics


def ks_statistic(samples: Sequence[float]) -> float:
    """One-sample Kolmogorov-Smirnov distance to the Uniform[0,1] CDF."""
    u = np.sort(np.asarray(samples, dtype=float))
    N = u.size
    if N == 0:
        raise DomainError("ks_statistic needs a non-empty sample")
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - u), np.max(u - (i - 1) / N)))


def binary_entropy(p: RationalLike) -> float:
    """``-p log2 p - q log2 q``; taken as 0 at p in {0, 1} by continuity."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise DomainError(f"binary_entropy needs p in [0, 1], got {p}")
    if p in (0, 1):
        return 0.0
    pf, qf = float(p), float(1 - p)
    return -pf * math.log2(pf) - qf * math.log2(qf)


# ---------------------------------------------------------------- experiments


@dataclass
class MgfCheck:
    u: float
    v: float
    lhs: float
    rhs: float
    z_score: float


@dataclass
class SimReport:
    config: dict
    kernel_backend: str
    empirical_moments: Dict[int, List[float]]
    moment_std_errors: Dict[int, List[float]]
    midpoint_moments: Dict[int, float]
    midpoint_std_errors: Dict[int, float]
    ks_statistic: float
    ks_critical: float
    mean_code_bits: Optional[float]
    mgf_checks: List[MgfCheck] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("empirical_moments", "moment_std_errors", "midpoint_moments", "midpoint_std_errors"):
            d[key] = {str(k): v for k, v in d[key].items()}
        return d


def _mean_and_se(values: np.ndarray) -> Tuple[float, float]:
    N = values.size
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(N)) if N > 1 else 0.0
    return mean, se


def run_distribution_experiment(
    cfg: SimConfig,
    max_order: int = MAX_ORDER,
    mgf_points: Sequence[Tuple[float, float]] = (),
    samples_csv: Optional[io.TextIOBase] = None,
) -> SimReport:
    """Encode ``cfg.trials`` random messages and compare the ends and midpoint with Uniform[0,1]."""
    x, y, code_bits = simulate_intervals(cfg)
    mid = 0.5 * (x + y)
    moments: Dict[int, List[float]] = {}
    ses: Dict[int, List[float]] = {}
    mid_m: Dict[int, float] = {}
    mid_se: Dict[int, float] = {}
    for m in range(1, max_order + 1):
        comps = [_mean_and_se(x ** (m - r) * y**r) for r in range(m + 1)]
        moments[m] = [c[0] for c in comps]
        ses[m] = [c[1] for c in comps]
        mid_m[m], mid_se[m] = _mean_and_se(mid**m)
    mean_bits = None
    if code_bits is not None and cfg.n > 0:
        mean_bits = sum(code_bits) / (len(code_bits) * cfg.n)
    if samples_csv is not None:
        write_samples_csv(samples_csv, x, y, code_bits)
    return SimReport(
        config=cfg.to_json(),
        kernel_backend=kernels.BACKEND,
        empirical_moments=moments,
        moment_std_errors=ses,
        midpoint_moments=mid_m,
        midpoint_std_errors=mid_se,
        ks_statistic=ks_statistic(mid),
        ks_critical=KS_CRITICAL_01 / math.sqrt(cfg.trials),
        mean_code_bits=mean_bits,
        mgf_checks=[mgf_check(cfg, u, v) for u, v in mgf_points],
    )


def write_samples_csv(fh, x, y, code_bits=None) -> None:
    """Columns ``trial, x, y, midpoint, code_bits`` (code_bits empty for the float backend)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["trial", "x", "y", "midpoint", "code_bits"])
    for t in range(len(x)):
        cb = "" if code_bits is None else code_bits[t]
        w.writerow([t, repr(float(x[t])), repr(float(y[t])), repr(float(0.5 * (x[t] + y[t]))), cb])


def mgf_check(cfg: SimConfig, u: float, v: float) -> MgfCheck:
    """z-score of ``phi_{n+1}(u, v) - [q phi_n(u+pv, qv) + p phi_n(pu, qu+v)]``.

    The two sides are estimated from independent sample sets (separate random
    streams) of ``cfg.trials`` trials each.
    """
    if abs(u) > 2 or abs(v) > 2:
        raise DomainError("mgf_check keeps |u|, |v| <= 2")
    pf = float(cfg.p)
    qf = 1.0 - pf
    x1, y1, _ = simulate_intervals(cfg, STREAM_MGF_NEXT, n=cfg.n + 1)
    x0, y0, _ = simulate_intervals(cfg, STREAM_MGF_PREV, n=cfg.n)
    left = np.exp(u * x1 + v * y1)
    right = qf * np.exp((u + pf * v) * x0 + qf * v * y0) + pf * np.exp(pf * u * x0 + (qf * u + v) * y0)
    lm, ls = _mean_and_se(left)
    rm, rs = _mean_and_se(right)
    se = math.hypot(ls, rs)
    z = (lm - rm) / se if se > 0 else 0.0
    return MgfCheck(u, v, lm, rm, z)


@dataclass
class TailRow:
    n: int
    eps: float
    empirical: float
    exact: str
    chebyshev_bound: str
    centered_chebyshev_bound: str
    exact_within_chebyshev: bool
    empirical_within_centered: bool


@dataclass
class ConcentrationReport:
    config: dict
    rows: List[TailRow]
    nonincreasing: bool

    @property
    def all_dominated(self) -> bool:
        return all(r.empirical_within_centered for r in self.rows)

    def to_json(self) -> dict:
        return asdict(self)


def centered_chebyshev_bound(n: int, p: RationalLike, eps: RationalLike) -> Fraction:
    """``V[L_n] / (eps - E[L_n])**2`` when ``E[L_n] < eps``, else the trivial bound 1."""
    eps = Fraction(eps)
    mean = length_moment(n, p, 1)
    if mean >= eps:
        return Fraction(1)
    var = length_moment(n, p, 2) - mean**2
    return min(Fraction(1), var / (eps - mean) ** 2)


def concentration_experiment(
    cfg: SimConfig, eps_values: Sequence[RationalLike] = ("1/10", "1/100")
) -> ConcentrationReport:
    """Empirical ``P(L_k > eps)`` for ``k = 0..cfg.n`` against exact tails and Chebyshev bounds.

    Each trial's lengths along the way come from one message: ``L_k`` is
    ``p**ones * q**zeros`` over its first ``k`` bits.
    """
    p = cfg.p
    bits = gen_messages(cfg.seed, cfg.n, p, cfg.trials)
    ones = np.concatenate([np.zeros((cfg.trials, 1), dtype=np.int64), np.cumsum(bits, axis=1, dtype=np.int64)], axis=1)
    q = 1 - p
    rows = []
    nonincreasing = True
    for eps in eps_values:
        eps = Fraction(eps)
        prev = None
        for k in range(cfg.n + 1):
            # exact comparison of each attainable length with eps, indexed by ones count
            exceeds = np.array([p**a * q ** (k - a) > eps for a in range(k + 1)])
            emp = float(np.mean(exceeds[ones[:, k]]))
            exact = exact_tail(k, p, eps)
            var = length_moment(k, p, 2) - length_moment(k, p, 1) ** 2
            cheb = var / eps**2
            centered = centered_chebyshev_bound(k, p, eps)
            rows.append(
                TailRow(
                    n=k,
                    eps=float(eps),
                    empirical=emp,
                    exact=format_rational(exact),
                    chebyshev_bound=format_rational(cheb),
                    centered_chebyshev_bound=format_rational(centered),
                    exact_within_chebyshev=exact <= cheb,
                    empirical_within_centered=emp <= centered,
                )
            )
            if prev is not None and emp > prev:
                nonincreasing = False
            prev = emp
    return ConcentrationReport(cfg.to_json(), rows, nonincreasing)


@dataclass
class RateReport:
    config: dict
    mean_bits_per_symbol: float
    std_error: float
    entropy: float

    @property
    def gap(self) -> float:
        return self.mean_bits_per_symbol - self.entropy

    def to_json(self) -> dict:
        d = asdict(self)
        d["gap"] = self.gap
        return d


def compression_rate_experiment(cfg: SimConfig) -> RateReport:
    """Mean stream-codeword length per message bit, next to the binary entropy."""
    if cfg.backend != "exact":
        raise DomainError("compression_rate_experiment needs the exact backend")
    if cfg.n < 1:
        raise DomainError("compression_rate_experiment needs n >= 1")
    bits = gen_messages(cfg.seed, cfg.n, cfg.p, cfg.trials)
    rates = np.array(
        [len(subinterval_codeword(encode_interval(row.tolist(), cfg.p))) / cfg.n for row in bits]
    )
    mean, se = _mean_and_se(rates)
    return RateReport(cfg.to_json(), mean, se, binary_entropy(cfg.p))
