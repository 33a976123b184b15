"""Exact q-expansions of level-1 modular forms and normalized Hecke eigenvalues.

All coefficient arithmetic is exact (arbitrary-precision integers); floats
only appear in the normalized eigenvalues lambda(n) = a(n) * n**(-(k-1)/2),
which are computed with the exponent in log domain so large weights and
indices cannot overflow.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import IO, Iterable

import numpy as np

from .intpoly import mul_trunc, square_trunc

__all__ = [
    "QExpansion",
    "EigenForm",
    "UnsupportedWeightError",
    "eisenstein_qexp",
    "delta_qexp",
    "delta_qexp_from_eisenstein",
    "eigenform",
    "hecke_verify",
    "HeckeReport",
    "dump_csv",
    "SUPPORTED_EIGEN_WEIGHTS",
]

SUPPORTED_EIGEN_WEIGHTS = (12, 16, 18, 20, 22, 26)

# Normalizing constants -2k/B_k of the classical Eisenstein series.
_EISENSTEIN_CONST = {4: 240, 6: -504}

LN2 = math.log(2.0)


class UnsupportedWeightError(ValueError):
    pass


@dataclass(frozen=True)
class QExpansion:
    """Truncated q-series with exact integer coefficients a(0..cutoff)."""

    weight: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.weight < 0 or self.weight % 2:
            raise ValueError(f"weight must be a nonnegative even integer, got {self.weight}")
        if not self.coeffs:
            raise ValueError("empty coefficient list")

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    def a(self, n: int) -> int:
        if not 0 <= n <= self.cutoff:
            raise IndexError(f"coefficient index {n} outside [0, {self.cutoff}]")
        return self.coeffs[n]

    def is_cusp(self) -> bool:
        return self.coeffs[0] == 0

    def truncate(self, cutoff: int) -> "QExpansion":
        if cutoff > self.cutoff:
            raise ValueError(f"cannot extend cutoff {self.cutoff} to {cutoff}")
        return QExpansion(self.weight, self.coeffs[: cutoff + 1])

    def mul(self, other: "QExpansion") -> "QExpansion":
        n = min(len(self.coeffs), len(other.coeffs))
        prod = mul_trunc(list(self.coeffs), list(other.coeffs), n)
        return QExpansion(self.weight + other.weight, tuple(prod))


def _divisor_power_sums(power: int, cutoff: int) -> list[int]:
    """sigma_power(n) for n in 1..cutoff by direct divisor accumulation."""
    sums = [0] * (cutoff + 1)
    for d in range(1, cutoff + 1):
        dp = d**power
        for m in range(d, cutoff + 1, d):
            sums[m] += dp
    return sums


def eisenstein_qexp(weight: int, cutoff: int) -> QExpansion:
    """Normalized Eisenstein series E_k, constant term 1.

    E4 and E6 come from the divisor-sum formulas; E8, E10 and E14 are built
    as truncated products of those two (each weight-k space with k in
    {8, 10, 14} is one-dimensional, so the product with constant term 1 is
    the Eisenstein series).
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if weight in _EISENSTEIN_CONST:
        const = _EISENSTEIN_CONST[weight]
        sig = _divisor_power_sums(weight - 1, cutoff)
        coeffs = [1] + [const * sig[n] for n in range(1, cutoff + 1)]
        return QExpansion(weight, tuple(coeffs))
    if weight == 8:
        e4 = eisenstein_qexp(4, cutoff)
        return QExpansion(8, tuple(square_trunc(list(e4.coeffs), cutoff + 1)))
    if weight == 10:
        return eisenstein_qexp(4, cutoff).mul(eisenstein_qexp(6, cutoff))
    if weight == 14:
        e4 = eisenstein_qexp(4, cutoff)
        e8 = QExpansion(8, tuple(square_trunc(list(e4.coeffs), cutoff + 1)))
        return e8.mul(eisenstein_qexp(6, cutoff))
    raise UnsupportedWeightError(f"Eisenstein weight {weight} not in (4, 6, 8, 10, 14)")


def _eta_cubed_sparse(cutoff: int) -> list[int]:
    """q-free part of eta^3: sum_k (-1)^k (2k+1) q^{k(k+1)/2}, truncated."""
    out = [0] * (cutoff + 1)
    k = 0
    while k * (k + 1) // 2 <= cutoff:
        out[k * (k + 1) // 2] = (2 * k + 1) if k % 2 == 0 else -(2 * k + 1)
        k += 1
    return out


def delta_qexp(cutoff: int) -> QExpansion:
    """The discriminant form Delta = q prod (1-q^n)^24.

    Built as q * (eta^3)^8 with eta^3 given by its sparse classical
    expansion; the first square is a direct sparse convolution, the rest go
    through the exact packed product.  Construction is cross-checked against
    (E4^3 - E6^2)/1728 on an initial segment; the full-range comparison
    lives in delta_qexp_from_eisenstein.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    n = cutoff  # coefficients of (eta^3)^8 up to q^(cutoff-1), shifted by q
    e3 = _eta_cubed_sparse(n - 1) if n > 1 else [1]
    support = [i for i, c in enumerate(e3) if c]
    e6 = [0] * n
    for pos, i in enumerate(support):
        ci = e3[i]
        for j in support[pos:]:
            s = i + j
            if s >= n:
                break
            e6[s] += ci * e3[j] if i == j else 2 * ci * e3[j]
    e12 = square_trunc(e6, n)
    e24 = square_trunc(e12, n)
    coeffs = tuple([0] + e24)
    delta = QExpansion(12, coeffs)
    check_to = min(cutoff, 200)
    reference = delta_qexp_from_eisenstein(check_to)
    if delta.coeffs[: check_to + 1] != reference.coeffs:
        raise AssertionError("eta-product and Eisenstein constructions of Delta disagree")
    return delta


def delta_qexp_from_eisenstein(cutoff: int) -> QExpansion:
    """Delta via (E4^3 - E6^2)/1728, the independent construction."""
    n = cutoff + 1
    e4 = list(eisenstein_qexp(4, cutoff).coeffs)
    e6 = list(eisenstein_qexp(6, cutoff).coeffs)
    e4cubed = mul_trunc(square_trunc(e4, n), e4, n)
    e6sq = square_trunc(e6, n)
    coeffs = []
    for x, y in zip(e4cubed, e6sq):
        q, r = divmod(x - y, 1728)
        if r:
            raise AssertionError("E4^3 - E6^2 not divisible by 1728")
        coeffs.append(q)
    return QExpansion(12, tuple(coeffs))


@dataclass(frozen=True)
class EigenForm:
    """Normalized Hecke eigencuspform of level 1: a(1) = 1, exact a(n)."""

    weight: int
    qexp: QExpansion
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.qexp.cutoff < 1 or self.qexp.a(1) != 1:
            raise ValueError("eigenform must be normalized with a(1) = 1")
        if self.qexp.a(0) != 0:
            raise ValueError("eigenform must be cuspidal: a(0) = 0")

    @property
    def cutoff(self) -> int:
        return self.qexp.cutoff

    def a(self, n: int) -> int:
        return self.qexp.a(n)

    def eigenvalue(self, n: int) -> float:
        """lambda(n) = a(n) * n**(-(k-1)/2), exponent taken in log domain."""
        if not 1 <= n <= self.cutoff:
            raise IndexError(f"index {n} outside [1, {self.cutoff}]")
        return _scaled_coefficient(self.a(n), n, self.weight)

    def eigenvalue_array(self, limit: int) -> np.ndarray:
        """Signed lambda(n) for n = 0..limit as float64 (index 0 is 0)."""
        if limit > self.cutoff:
            raise ValueError(f"limit {limit} beyond cutoff {self.cutoff}")
        key = ("eig", limit)
        if key not in self._cache:
            arr = np.zeros(limit + 1)
            for n in range(1, limit + 1):
                arr[n] = _scaled_coefficient(self.qexp.coeffs[n], n, self.weight)
            arr.setflags(write=False)
            self._cache[key] = arr
        return self._cache[key]

    def abs_eigenvalue_array(self, limit: int) -> np.ndarray:
        arr = np.abs(self.eigenvalue_array(limit))
        arr.setflags(write=False)
        return arr

    def truncate(self, cutoff: int) -> "EigenForm":
        return EigenForm(self.weight, self.qexp.truncate(cutoff))


def _scaled_coefficient(a: int, n: int, weight: int) -> float:
    """a * n**(-(weight-1)/2) via bit-length + leading-64-bit log of a."""
    if a == 0:
        return 0.0
    mag = -a if a < 0 else a
    bits = mag.bit_length()
    shift = bits - 64 if bits > 64 else 0
    log_a = math.log(mag >> shift) + shift * LN2
    value = math.exp(log_a - 0.5 * (weight - 1) * math.log(n))
    return -value if a < 0 else value


def eigenform(weight: int, cutoff: int) -> EigenForm:
    """The unique normalized eigenform of the given one-dimensional weight.

    Delta for weight 12, Delta * E_{k-12} otherwise; the cusp spaces for
    weights 16, 18, 20, 22, 26 are one-dimensional, so the normalized
    product is automatically the Hecke eigenform.
    """
    if weight not in SUPPORTED_EIGEN_WEIGHTS:
        raise UnsupportedWeightError(
            f"weight {weight} unsupported: cusp space is not one-dimensional "
            f"(supported: {SUPPORTED_EIGEN_WEIGHTS})"
        )
    delta = delta_qexp(cutoff)
    if weight == 12:
        return EigenForm(12, delta)
    return EigenForm(weight, delta.mul(eisenstein_qexp(weight - 12, cutoff)))


@dataclass
class HeckeReport:
    """Violation log from hecke_verify; empty lists mean all checks passed."""

    weight: int
    cutoff: int
    multiplicativity_violations: list[tuple[int, int]] = field(default_factory=list)
    recursion_violations: list[tuple[int, int]] = field(default_factory=list)
    deligne_violations: list[int] = field(default_factory=list)
    pairs_checked: int = 0
    recursions_checked: int = 0
    primes_checked: int = 0
    max_abs_lambda_p: float = 0.0

    @property
    def ok(self) -> bool:
        return not (
            self.multiplicativity_violations
            or self.recursion_violations
            or self.deligne_violations
        )


def hecke_verify(form: EigenForm, cutoff: int | None = None) -> HeckeReport:
    """Exact-integer Hecke checks plus the floating Deligne bound.

    Verifies a(m*n) = a(m)*a(n) for all coprime 2 <= m <= n with m*n below
    the cutoff, the prime-power recursion
    a(p)*a(p^j) = a(p^{j+1}) + p^{k-1}*a(p^{j-1}), and |lambda(p)| <= 2.
    Violations are collected, not raised.
    """
    limit = form.cutoff if cutoff is None else min(cutoff, form.cutoff)
    coeffs = form.qexp.coeffs
    report = HeckeReport(weight=form.weight, cutoff=limit)

    for m in range(2, isqrt(limit) + 1):
        am = coeffs[m]
        for n in range(m + 1, limit // m + 1):
            if gcd(m, n) == 1:
                report.pairs_checked += 1
                if coeffs[m * n] != am * coeffs[n]:
                    report.multiplicativity_violations.append((m, n))

    pk = form.weight - 1
    primes = _primes_upto(limit)
    for p in primes:
        ppow = p * p
        j = 1
        pk_pow = p**pk
        while ppow <= limit:
            report.recursions_checked += 1
            lhs = coeffs[p] * coeffs[ppow // p]
            rhs = coeffs[ppow] + pk_pow * coeffs[ppow // (p * p)]
            if lhs != rhs:
                report.recursion_violations.append((p, j))
            ppow *= p
            j += 1

    for p in primes:
        report.primes_checked += 1
        lam = abs(form.eigenvalue(p))
        if lam > report.max_abs_lambda_p:
            report.max_abs_lambda_p = lam
        if lam > 2.0:
            report.deligne_violations.append(p)
    return report


def _primes_upto(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def dump_csv(form: EigenForm, dest: IO[str], limit: int | None = None) -> None:
    """Rows n, a_f(n) (decimal string), lambda(n) (15 significant digits)."""
    limit = form.cutoff if limit is None else min(limit, form.cutoff)
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["n", "a_f", "lambda"])
    for n in range(1, limit + 1):
        writer.writerow([n, str(form.a(n)), f"{form.eigenvalue(n):.15g}"])


def dump_rows(form: EigenForm, limit: int | None = None) -> Iterable[dict]:
    limit = form.cutoff if limit is None else min(limit, form.cutoff)
    for n in range(1, limit + 1):
        yield {"n": n, "a_f": str(form.a(n)), "lambda": float(f"{form.eigenvalue(n):.15g}")}
