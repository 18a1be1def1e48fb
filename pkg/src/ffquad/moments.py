"""Ensemble sweeps over H_{2g+1} and exact moment computations.

The sweep computes, for every monic square-free D of degree 2g+1, the full
integer coefficient vector of 𝓛(u, χ_D) — vectorized over the whole ensemble:

- square-free sieve: D survives iff D mod P² ≠ 0 for every irreducible P of
  degree ≤ g, each test one batched linear reduction plus a table gather;
- coefficients: 𝓛(u,χ_D) = Π_P (1 − χ_D(P) u^{deg P})^(−1) truncated past
  u^{2g}, accumulated prime by prime with the complete-knapsack recurrence
  c_n += χ_D(P)·c_{n−deg P}, where the vector χ_D(P) = (D/P) over all D is a
  single gather from the prime's residue-symbol table.

From the integer matrix of coefficients everything downstream is exact:
L(1/2) = (A + B√q)/q^g with integer A, B, so k-th moments are big-integer
sums, and the two-sided d₄ expansion of L(1/2)⁴ is checked as an identity
in ℚ(√q) with no tolerance anywhere.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from . import __version__, cache
from .characters import _prime_symbol_table, _qpowers, power_residue_digits, require_field
from .lfun import LPolynomial, value_at_half
from .poly import (
    DEFAULT_ENUM_BUDGET,
    BudgetExceededError,
    Poly,
    arithmetic_functions,
    deg,
    factor,
    from_code,
    h_cardinality,
    irreducibles,
    mul,
)
from .quadfield import SqrtQ

# ---------------------------------------------------------------------------
# the vectorized sweep
# ---------------------------------------------------------------------------


def _code_digits(codes: np.ndarray, width: int, q: int) -> np.ndarray:
    return (codes[:, None] // _qpowers(width, q)[None, :]) % q


def _reduce_gather(fdigits: np.ndarray, f: Poly, q: int) -> np.ndarray:
    """Codes of (D mod f) for a batch of D given as float64 digit rows."""
    rows = power_residue_digits(fdigits.shape[1], f, q).astype(np.float64)
    res = (fdigits @ rows) % q
    return (res @ _qpowers(deg(f), q).astype(np.float64)).astype(np.int64)


def _sweep_range(q: int, g: int, lo: int, hi: int) -> np.ndarray:
    """Rows [D_code, c₀..c_{2g}] for square-free D with code in [lo, hi)."""
    m = 2 * g + 1
    codes = np.arange(lo, hi, dtype=np.int64)
    fdig = _code_digits(codes, m + 1, q).astype(np.float64)

    keep = np.ones(len(codes), dtype=bool)
    for d_p in range(1, g + 1):
        for P in irreducibles(d_p, q):
            keep &= _reduce_gather(fdig, mul(P, P, q), q) != 0
    codes = codes[keep]
    fdig = fdig[keep]

    n_d = len(codes)
    coeffs = np.zeros((n_d, 2 * g + 1), dtype=np.int64)
    coeffs[:, 0] = 1
    for d_p in range(1, 2 * g + 1):
        for P in irreducibles(d_p, q):
            sym = _prime_symbol_table(P, q)[_reduce_gather(fdig, P, q)].astype(
                np.int64
            )
            for n in range(d_p, 2 * g + 1):
                coeffs[:, n] += sym * coeffs[:, n - d_p]
    return np.hstack([codes[:, None], coeffs])


def sweep_arrays(
    q: int,
    g: int,
    cache_root=None,
    shards: int = 1,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> np.ndarray:
    """Rows [D_code, c₀..c_{2g}] for all of H_{2g+1}, cached and resumable.

    The monic code range [q^(2g+1), 2q^(2g+1)) is split into `shards`
    contiguous pieces; each piece is computed only if its shard file is
    missing, so an interrupted sweep resumes where it stopped.
    """
    require_field(q)
    total = q ** (2 * g + 1)
    if total > budget:
        raise BudgetExceededError(f"ensemble of {total} monics exceeds budget")
    meta = cache.read_meta(q, g, cache_root)
    if meta is not None and meta["n_shards"] != shards:
        # a complete sweep with different sharding is still a valid answer
        shards = meta["n_shards"]
    else:
        cache.write_meta(q, g, shards, cache_root)
    bounds = np.linspace(total, 2 * total, shards + 1).astype(np.int64)
    parts = []
    for i in range(shards):
        rows = cache.load_shard(q, g, i, cache_root)
        if rows is None:
            rows = _sweep_range(q, g, int(bounds[i]), int(bounds[i + 1]))
            cache.store_shard(q, g, i, rows, cache_root)
        parts.append(rows)
    out = np.vstack(parts)
    expected = h_cardinality(2 * g + 1, q)
    if len(out) != expected:
        raise ArithmeticError(
            f"sweep produced {len(out)} rows, expected |H| = {expected}"
        )
    return out


def ensemble_sweep(
    q: int, g: int, cache_root=None, shards: int = 1
) -> Iterator[tuple[Poly, LPolynomial]]:
    """Stream (D, 𝓛(·,χ_D)) over every D ∈ H_{2g+1}, exactly once each."""
    rows = sweep_arrays(q, g, cache_root, shards)
    for row in rows:
        D = from_code(int(row[0]), q)
        yield D, LPolynomial(q=q, D=D, g=g, coeffs=tuple(int(c) for c in row[1:]))


# ---------------------------------------------------------------------------
# exact critical values and moments
# ---------------------------------------------------------------------------


def _half_value_pairs(rows: np.ndarray, q: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer pairs (A, B) per row with L(1/2) = (A + B√q)/q^g."""
    coeffs = rows[:, 1:]
    a = np.zeros(len(rows), dtype=np.int64)
    b = np.zeros(len(rows), dtype=np.int64)
    for n in range(2 * g + 1):
        if n % 2 == 0:
            a += coeffs[:, n] * q ** (g - n // 2)
        else:
            b += coeffs[:, n] * q ** (g - (n + 1) // 2)
    return a, b


def _pair_power(a: int, b: int, q: int, k: int) -> tuple[int, int]:
    """(a + b√q)^k as an exact integer pair (rational part, √q part)."""
    ra, rb = 1, 0
    for _ in range(k):
        ra, rb = ra * a + q * rb * b, ra * b + rb * a
    return ra, rb


@dataclass(frozen=True)
class MomentReport:
    """One exact ensemble moment next to its theoretical predictions."""

    q: int
    g: int
    k: int
    exact_sum: SqrtQ
    float_value: float
    ensemble_size: int
    theory_thm1: float | None
    theory_conjecture: float | None
    seconds: float
    provenance: dict = field(repr=False)


def kth_moment(
    q: int,
    g: int,
    k: int,
    cache_root=None,
    shards: int = 1,
    theory: bool = True,
    series_cutoff: int = 20,
) -> MomentReport:
    """Exact Σ_{D∈H_{2g+1}} L(1/2,χ_D)^k with theory columns.

    k must be even (odd powers of a signed real value are not treated).
    theory_thm1 is the three-term genus polynomial q^(2g+1)·(a₁₀g¹⁰ + a₉g⁹
    + a₈g⁸); theory_conjecture evaluates the full degree-10 prediction at
    this genus.  Both are attached only for k = 4, where they apply.
    """
    if k < 0 or k % 2 != 0:
        raise ValueError("moment order k must be a nonnegative even integer")
    t0 = time.perf_counter()
    rows = sweep_arrays(q, g, cache_root, shards)
    a_vec, b_vec = _half_value_pairs(rows, q, g)
    tot_r, tot_i = 0, 0
    for a, b in zip(a_vec.tolist(), b_vec.tolist()):
        ra, rb = _pair_power(a, b, q, k)
        tot_r += ra
        tot_i += rb
    den = q ** (g * k)
    exact = SqrtQ(q, Fraction(tot_r, den), Fraction(tot_i, den))
    theory_thm1 = theory_conjecture = None
    if theory and k == 4:
        from .eulerprod import coefficients, conjectured_moment

        cs = coefficients(q, series_cutoff)
        theory_thm1 = q ** (2 * g + 1) * (
            float(cs.a10) * g**10 + float(cs.a9) * g**9 + float(cs.a8) * g**8
        )
        theory_conjecture = conjectured_moment(q, g, series_cutoff)
    return MomentReport(
        q=q,
        g=g,
        k=k,
        exact_sum=exact,
        float_value=float(exact.to_mpf()),
        ensemble_size=len(rows),
        theory_thm1=theory_thm1,
        theory_conjecture=theory_conjecture,
        seconds=time.perf_counter() - t0,
        provenance={
            "package_version": __version__,
            "shards": shards,
            "series_cutoff": series_cutoff,
        },
    )


# ---------------------------------------------------------------------------
# approximate functional equation, exact per D
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AFECheck:
    """L(1/2)⁴ against its two-sided d₄ expansion, both exact in ℚ(√q)."""

    D: Poly
    lhs: SqrtQ
    rhs: SqrtQ

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def fourth_power_layers(L: LPolynomial) -> tuple[int, ...]:
    """Exact coefficients t_n of 𝓛(u,χ_D)⁴ = Σ t_n uⁿ (big integers).

    Because χ_D is completely multiplicative, t_n is simultaneously the
    d₄-weighted character sum Σ_{f∈M_n} d₄(f)χ_D(f); the convolution route
    here and the literal enumeration are cross-checked in the test suite.
    """
    c = [int(x) for x in L.coeffs]
    out = [0] * (8 * L.g + 1)
    # two successive self-convolutions in exact integer arithmetic
    sq = [0] * (4 * L.g + 1)
    for i, ci in enumerate(c):
        for j, cj in enumerate(c):
            sq[i + j] += ci * cj
    for i, si in enumerate(sq):
        for j, sj in enumerate(sq):
            out[i + j] += si * sj
    return tuple(out)


def afe_check(D: Poly, q: int) -> AFECheck:
    """Exact identity L(1/2)⁴ = Σ_{n≤4g} t_n q^(−n/2) + Σ_{n≤4g−1} t_n q^(−n/2).

    The right side folds the upper half of the degree-8g expansion through
    the functional-equation symmetry t_{8g−n} = q^(4g−n)·t_n, leaving the two
    truncated sums; each layer lands exactly in ℚ(√q).
    """
    from .lfun import compute_L

    L = compute_L(D, q)
    g = L.g
    lhs = value_at_half(L) ** 4
    t = fourth_power_layers(L)
    rhs = SqrtQ.zero(q)
    for bound in (4 * g, 4 * g - 1):
        for n in range(bound + 1):
            if n % 2 == 0:
                rhs = rhs + SqrtQ(q, Fraction(t[n], q ** (n // 2)), 0)
            else:
                rhs = rhs + SqrtQ(q, 0, Fraction(t[n], q ** ((n + 1) // 2)))
    return AFECheck(D=D, lhs=lhs, rhs=rhs)


# ---------------------------------------------------------------------------
# moments on the critical circle and diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedMomentPoint:
    """Σ_D |𝓛(e^(iθ)/√q, χ_D)|^k with the model mean and variance of log|𝓛|."""

    theta: float
    k: float
    value: float
    mean_model: float
    var_model: float


def _unit_circle_values(rows: np.ndarray, q: int, g: int, theta: float) -> np.ndarray:
    u = np.exp(1j * theta) / math.sqrt(q)
    powers = u ** np.arange(2 * g + 1)
    return rows[:, 1:].astype(np.complex128) @ powers


def mean_variance_model(theta: float, g: int) -> tuple[float, float]:
    """(𝓜, 𝓥): predicted mean and variance of log|𝓛(e^(iθ)/√q)| at angle θ."""
    cap = min(g, 1.0 / (2.0 * theta)) if theta > 0 else g
    m = 0.5 * math.log(cap)
    return m, m + math.log(g) / 2.0


def shifted_moment(
    q: int, g: int, theta: float, k: float, cache_root=None
) -> ShiftedMomentPoint:
    """Moment of |𝓛| at the point e^(iθ)/√q on the critical circle."""
    if not 0 <= theta < math.pi:
        raise ValueError("theta must lie in [0, π)")
    rows = sweep_arrays(q, g, cache_root)
    vals = np.abs(_unit_circle_values(rows, q, g, theta))
    value = float((vals**k).sum()) if k else float(len(vals))
    m, v = mean_variance_model(theta, g)
    return ShiftedMomentPoint(theta=theta, k=k, value=value, mean_model=m, var_model=v)


@dataclass(frozen=True)
class DistributionStats:
    """Empirical distribution of log|𝓛| over the ensemble at angle θ."""

    q: int
    g: int
    theta: float
    mean: float
    variance: float
    mean_model: float
    var_model: float
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    n_excluded: int


def distribution_stats(
    q: int, g: int, theta: float = 0.0, bins: int = 25, cache_root=None
) -> DistributionStats:
    """Mean/variance/histogram of log|𝓛(e^(iθ)/√q)|, zeros excluded and counted."""
    rows = sweep_arrays(q, g, cache_root)
    vals = np.abs(_unit_circle_values(rows, q, g, theta))
    nonzero = vals > 1e-12
    logs = np.log(vals[nonzero])
    m, v = mean_variance_model(theta, g)
    counts, edges = np.histogram(logs, bins=bins)
    return DistributionStats(
        q=q,
        g=g,
        theta=theta,
        mean=float(logs.mean()),
        variance=float(logs.var()),
        mean_model=m,
        var_model=v,
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        n_excluded=int((~nonzero).sum()),
    )


def main_term_direct(q: int, g: int, y: int) -> float:
    """Leading-term sum: q^(2g+1)(1−1/q)·Σ_{f=l², deg f ≤ 4g} d₄(f)φ(f)/|f|^(3/2)
    · Σ_{C | f^∞, deg C ≤ y} |C|^(−2), evaluated exactly and returned as float.

    |f|^(3/2) = q^(3·deg l) is an integer for f = l², so every term is
    rational; y = 0 reduces the inner sum to 1.
    """
    require_field(q)
    if y > g:
        raise ValueError("truncation height y must not exceed g")
    total = Fraction(0)
    for dl in range(0, 2 * g + 1):
        for code in range(q**dl, 2 * q**dl):
            l = from_code(code, q)
            f = mul(l, l, q)
            fns = arithmetic_functions(f, q)
            # inner sum over C supported on the primes of l, counted by degree
            counts = [0] * (y + 1)
            counts[0] = 1
            for P, _ in factor(l, q)[1]:
                for t in range(deg(P), y + 1):
                    counts[t] += counts[t - deg(P)]
            inner = sum(Fraction(n_c, q ** (2 * t)) for t, n_c in enumerate(counts))
            total += Fraction(fns.d4 * fns.euler_phi, q ** (3 * dl)) * inner
    total *= Fraction(q ** (2 * g + 1)) * (1 - Fraction(1, q))
    return float(total)


def export_csv(q: int, g: int, path, cache_root=None) -> int:
    """Write per-D rows {D_code, g, a, b} with exact fraction strings for
    L(1/2) = a + b√q; returns the row count."""
    rows = sweep_arrays(q, g, cache_root)
    a_vec, b_vec = _half_value_pairs(rows, q, g)
    den = q**g
    n = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["D_code", "g", "a", "b"])
        for code, a, b in zip(rows[:, 0].tolist(), a_vec.tolist(), b_vec.tolist()):
            writer.writerow([code, g, str(Fraction(a, den)), str(Fraction(b, den))])
            n += 1
    return n
