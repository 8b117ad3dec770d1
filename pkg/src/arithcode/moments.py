"""Exact moment matrices of the coder's interval ends and their spectra.

Index ``r`` in ``0..m`` of an order-``m`` vector or matrix row stands for the
mixed moment ``E[X**(m-r) * Y**r]``, so row 0 is ``E[X**m]`` and the last row
is ``E[Y**m]``. One coder step maps the order-``m`` moment vector ``v`` to
``W_m v``; starting from ``(0, ..., 0, 1)`` (the interval ``[0, 1]``).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, List, Optional, Tuple

from .exact import DomainError, RationalLike, as_probability, format_rational
from .linalg import RationalMatrix, Vector


class ConsistencyError(RuntimeError):
    """A closed form disagreed with the matrix it should describe."""


def _binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def _check_order(m: int) -> None:
    if m < 1:
        raise DomainError(f"moment order m must be >= 1, got {m}")


def build_w(m: int, p: RationalLike) -> RationalMatrix:
    """One-step moment map of order ``m``, assembled straight from the recurrence."""
    _check_order(m)
    p = as_probability(p)
    q = 1 - p
    rows = []
    for r in range(m + 1):
        i, j = m - r, r
        row = [Fraction(0)] * (m + 1)
        # bit 0: Y' = pX + qY, X' = X
        for k in range(j + 1):
            row[j - k] += q * comb(j, k) * p**k * q ** (j - k)
        # bit 1: X' = pX + qY, Y' = Y
        for l in range(i + 1):
            row[m - l] += p * comb(i, l) * p**l * q ** (i - l)
        rows.append(row)
    return RationalMatrix._wrap(rows)


def build_l(m: int, p: RationalLike) -> RationalMatrix:
    _check_order(m)
    p = as_probability(p)
    q = 1 - p
    return RationalMatrix.from_function(
        m + 1, lambda i, j: _binom(i, i - j) * p ** max(i - j, 0) * q ** (j + 1) if j <= i else 0
    )


def build_u(m: int, p: RationalLike) -> RationalMatrix:
    _check_order(m)
    p = as_probability(p)
    q = 1 - p
    return RationalMatrix.from_function(
        m + 1, lambda i, j: _binom(m - i, j - i) * p ** (m + 1 - j) * q ** (j - i) if j >= i else 0
    )


def modal_matrix(m: int) -> RationalMatrix:
    """Unit upper-triangular matrix of eigenvectors of ``U_m``."""
    _check_order(m)
    return RationalMatrix.from_function(m + 1, lambda i, j: _binom(m - i, j - i))


def modal_inverse(m: int) -> RationalMatrix:
    _check_order(m)
    return RationalMatrix.from_function(
        m + 1, lambda i, j: (-1) ** ((j - i) & 1) * _binom(m - i, j - i)
    )


@dataclass(frozen=True)
class SpectrumReport:
    m: int
    p: Fraction
    eigenvalues: Tuple[Fraction, ...]
    modal: RationalMatrix
    modal_inverse: RationalMatrix
    triangular_conjugate: RationalMatrix

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p": format_rational(self.p),
            "eigenvalues": [format_rational(x) for x in self.eigenvalues],
            "modal": self.modal.to_json(),
            "modal_inverse": self.modal_inverse.to_json(),
            "triangular_conjugate": self.triangular_conjugate.to_json(),
        }


def _closed_eigenvalues(m: int, p: Fraction) -> Tuple[Fraction, ...]:
    q = 1 - p
    return tuple(p**k + q**k for k in range(1, m + 2))


def conjugate(m: int, p: RationalLike) -> SpectrumReport:
    """Triangularize ``W_m`` by the modal matrix and check every closed form.

    Raises ConsistencyError if the conjugated ``L_m`` or ``U_m`` differs from
    its closed form, or if ``P^-1 W P`` is not lower triangular with the
    expected diagonal.
    """
    _check_order(m)
    p = as_probability(p)
    q = 1 - p
    P, Pinv = modal_matrix(m), modal_inverse(m)
    if P @ Pinv != RationalMatrix.identity(m + 1):
        raise ConsistencyError(f"modal matrix inverse is wrong for m={m}")
    T = Pinv @ build_l(m, p) @ P
    T_closed = RationalMatrix.from_function(
        m + 1, lambda i, j: _binom(i, j) * p ** max(i - j, 0) * q ** (m + 1 - i) if j <= i else 0
    )
    if T != T_closed:
        raise ConsistencyError(f"P^-1 L P differs from its closed form (m={m}, p={p})")
    D = Pinv @ build_u(m, p) @ P
    D_closed = RationalMatrix.from_function(
        m + 1, lambda i, j: p ** (m + 1 - j) if i == j else 0
    )
    if D != D_closed:
        raise ConsistencyError(f"P^-1 U P is not diag(p^(m+1-j)) (m={m}, p={p})")
    C = Pinv @ build_w(m, p) @ P
    if C != T + D:
        raise ConsistencyError("P^-1 W P is not the sum of the conjugated parts")
    diag = tuple(p ** (m + 1 - j) + q ** (m + 1 - j) for j in range(m + 1))
    if not C.is_lower_triangular() or C.diagonal() != diag:
        raise ConsistencyError(f"P^-1 W P is not triangular with the expected diagonal (m={m})")
    return SpectrumReport(
        m=m,
        p=p,
        eigenvalues=tuple(sorted(diag, reverse=True)),
        modal=P,
        modal_inverse=Pinv,
        triangular_conjugate=C,
    )


def eigenvalues(m: int, p: RationalLike) -> List[Fraction]:
    """``p**k + q**k`` for ``k = 1..m+1``, largest first (the first is exactly 1)."""
    p = as_probability(p)
    closed = sorted(_closed_eigenvalues(m, p), reverse=True)
    if list(conjugate(m, p).eigenvalues) != closed:
        raise ConsistencyError("closed-form eigenvalues disagree with the triangularization")
    return closed


def eigenvector_sums(m: int, p: RationalLike) -> List[Tuple[Fraction, List[Fraction]]]:
    """For each eigenvalue, the coordinate sums of an exact eigenbasis of ``W_m``."""
    p = as_probability(p)
    W = build_w(m, p)
    out = []
    for lam in eigenvalues(m, p):
        basis = (W - RationalMatrix.identity(m + 1).scale(lam)).nullspace()
        out.append((lam, [sum(v) for v in basis]))
    return out


@dataclass(frozen=True)
class MomentVector:
    m: int
    n: int
    p: Fraction
    components: Vector

    @property
    def limit(self) -> Fraction:
        return Fraction(1, self.m + 1)

    def max_deviation(self) -> Fraction:
        return max(abs(c - self.limit) for c in self.components)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "p": format_rational(self.p),
            "components": [format_rational(c) for c in self.components],
        }


def _start_vector(m: int) -> Vector:
    return (Fraction(0),) * m + (Fraction(1),)


def moment_vector(m: int, n: int, p: RationalLike) -> MomentVector:
    """``(E[X_n**m], E[X_n**(m-1) Y_n], ..., E[Y_n**m])`` via exact repeated squaring."""
    if n < 0:
        raise DomainError(f"step count n must be >= 0, got {n}")
    p = as_probability(p)
    W = build_w(m, p)
    return MomentVector(m, n, p, (W**n).apply(_start_vector(m)))


def moment_trajectory(m: int, p: RationalLike, n_max: int) -> Iterator[MomentVector]:
    """Moment vectors for ``n = 0..n_max`` by repeated one-step application."""
    p = as_probability(p)
    W = build_w(m, p)
    v = _start_vector(m)
    for n in range(n_max + 1):
        yield MomentVector(m, n, p, v)
        v = W.apply(v)


def trajectory_csv(m: int, p: RationalLike, n_max: int) -> str:
    """CSV with columns ``n, x{m}y0, ..., x0y{m}, max_deviation`` (exact ``a/b`` values)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + [f"x{m - r}y{r}" for r in range(m + 1)] + ["max_deviation"])
    for mv in moment_trajectory(m, p, n_max):
        w.writerow(
            [mv.n]
            + [format_rational(c) for c in mv.components]
            + [format_rational(mv.max_deviation())]
        )
    return buf.getvalue()


def mean_closed_form(n: int, p: RationalLike) -> Tuple[Fraction, Fraction]:
    """``(E[X_n], E[Y_n]) = ((1 - (1-2pq)**n) / 2, (1 + (1-2pq)**n) / 2)``."""
    if n < 0:
        raise DomainError(f"step count n must be >= 0, got {n}")
    p = as_probability(p)
    lam = 1 - 2 * p * (1 - p)
    t = lam**n
    return (1 - t) / 2, (1 + t) / 2


def length_moment(n: int, p: RationalLike, k: int = 1) -> Fraction:
    """``E[(Y_n - X_n)**k] = (p**(k+1) + q**(k+1))**n``.

    Each step multiplies the length by p with probability p and by q with
    probability q, independently of the past.
    """
    if n < 0 or k < 1:
        raise DomainError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    p = as_probability(p)
    q = 1 - p
    return (p ** (k + 1) + q ** (k + 1)) ** n


def variance_covariance(n: int, p: RationalLike) -> RationalMatrix:
    """``[[V[X_n], Cov], [Cov, V[Y_n]]]`` from the order-2 moments and the means."""
    p = as_probability(p)
    ex2, exy, ey2 = moment_vector(2, n, p).components
    ex, ey = mean_closed_form(n, p)
    cov = exy - ex * ey
    return RationalMatrix._wrap([[ex2 - ex * ex, cov], [cov, ey2 - ey * ey]])


def length_variance(n: int, p: RationalLike) -> Fraction:
    """``V[Y_n - X_n]`` assembled from the covariance matrix (not from the length law)."""
    vc = variance_covariance(n, p)
    return vc[0, 0] + vc[1, 1] - 2 * vc[0, 1]


def principal_idempotent(m: int) -> RationalMatrix:
    _check_order(m)
    return RationalMatrix.constant(m + 1, Fraction(1, m + 1))


def deviation_profile(m: int, p: RationalLike, n_max: int) -> List[Fraction]:
    """``max |(W_m**n)_ij - 1/(m+1)|`` for ``n = 0..n_max``."""
    p = as_probability(p)
    W = build_w(m, p)
    J = principal_idempotent(m)
    M = RationalMatrix.identity(m + 1)
    out = [M.max_abs_deviation(J)]
    for _ in range(n_max):
        M = M @ W
        out.append(M.max_abs_deviation(J))
    return out


def asymptotic_check(m: int, p: RationalLike, n: int) -> Tuple[Fraction, Optional[Fraction]]:
    """Deviation of ``W_m**n`` from the principal idempotent and its ratio to step ``n-1``."""
    if n < 0:
        raise DomainError(f"step count n must be >= 0, got {n}")
    p = as_probability(p)
    J = principal_idempotent(m)
    W = build_w(m, p)
    dev = (W**n).max_abs_deviation(J)
    if n == 0:
        return dev, None
    prev = (W ** (n - 1)).max_abs_deviation(J)
    return dev, (dev / prev if prev else None)


@dataclass
class StochasticityReport:
    row_sums_ok: bool
    column_sums_ok: bool
    positive: bool
    failures: List[str] = field(default_factory=list)

    @property
    def doubly_stochastic(self) -> bool:
        return self.row_sums_ok and self.column_sums_ok and not any(
            f.startswith("negative") for f in self.failures
        )

    @property
    def regular(self) -> bool:
        return self.doubly_stochastic and self.positive

    @property
    def ok(self) -> bool:
        return self.regular


def stochasticity_check(M: RationalMatrix) -> StochasticityReport:
    """Exact row/column sums and entry signs; failures name the offending line."""
    failures = []
    for i, s in enumerate(M.row_sums()):
        if s != 1:
            failures.append(f"row {i} sums to {s}")
    rows_ok = not failures
    n_before = len(failures)
    for j, s in enumerate(M.column_sums()):
        if s != 1:
            failures.append(f"column {j} sums to {s}")
    cols_ok = len(failures) == n_before
    positive = True
    for i in range(M.size):
        for j in range(M.size):
            x = M[i, j]
            if x < 0:
                failures.append(f"negative entry ({i},{j}) = {x}")
            if x <= 0:
                positive = False
    return StochasticityReport(rows_ok, cols_ok, positive, failures)


def mirrored_moments(m: int, n: int, p: RationalLike) -> Vector:
    """Order-``m`` moments of ``(1 - Y_n, 1 - X_n)`` computed from the moments at ``p``.

    Swapping p and q reflects the coder about 1/2, so this equals
    ``moment_vector(m, n, 1 - p).components``.
    """
    p = as_probability(p)
    by_order = {0: (Fraction(1),)}
    for k in range(1, m + 1):
        by_order[k] = moment_vector(k, n, p).components

    def mixed(a: int, b: int) -> Fraction:
        return by_order[a + b][b]  # E[X**a Y**b]

    out = []
    for r in range(m + 1):
        a, b = m - r, r  # E[(1-Y)**a (1-X)**b]
        total = Fraction(0)
        for s in range(a + 1):
            for t in range(b + 1):
                coef = comb(a, s) * comb(b, t) * (-1) ** (s + t)
                total += coef * mixed(t, s)
        out.append(total)
    return tuple(out)
