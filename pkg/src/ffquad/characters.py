"""Quadratic residue symbols, Gauss sums, and character-sum identities over 𝔽_q[x].

Conventions.  The residue symbol (A/B) takes the varying argument on top: for
monic irreducible P it is the Euler power (A mod P)^((|P|-1)/2), giving a value
in {0, +1, -1}, and it extends multiplicatively in the bottom argument.  All of
this module requires q ≡ 1 (mod 4), under which reciprocity reads (A/B) = (B/A)
for monic A, B with no sign factor (both sides vanish on a shared factor).
That symmetry is what lets one function serve every role below: the quadratic
character attached to D is χ_D(f) = (D/f), while the genuine Dirichlet
character modulo f that enters Gauss sums is V ↦ (V/f) on residues V mod f.
On the monic arguments where both readings are in play they agree.

The additive character is e(a) = exp(2πi·a₁/q) where a₁ is the coefficient of
1/x in the Laurent expansion of a at infinity; for a = u/f this coefficient is
produced by carrying the long division of u by f past the polynomial part.

Fast engines: a residue table of χ_f is assembled multiplicatively from
per-prime square tables, the 1/x pairing ⟨V, r⟩ = a₁(Vr/f) is the bilinear
form of an explicit n×n matrix over ℤ/q, and G(V,χ_f) for *all* V mod f is
the multidimensional DFT of the character table evaluated along that form.
Each engine is validated against slow literal definitions in the test suite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .poly import (
    DEFAULT_ENUM_BUDGET,
    ONE,
    X,
    BudgetExceededError,
    Poly,
    deg,
    div_rem,
    factor,
    from_code,
    is_irreducible,
    is_monic,
    mod,
    monic_scale,
    mul,
    norm,
    pow_mod,
    squarefree_monics,
    to_digit_string,
)

#: residue-count ceiling for the literal (pure-Python) Gauss sum loop
DEFAULT_DIRECT_BUDGET = 10**6


@lru_cache(maxsize=None)
def require_field(q: int) -> None:
    """Validate the base field size: q must be an odd prime ≡ 1 (mod 4)."""
    if q < 5 or q % 4 != 1:
        raise ValueError(f"q = {q} is not ≡ 1 (mod 4)")
    if any(q % p == 0 for p in range(2, math.isqrt(q) + 1)):
        raise ValueError(f"q = {q} is not prime")


def legendre_const(c: int, q: int) -> int:
    """Quadratic character of the scalar c in 𝔽_q: 0 on 0, else ±1."""
    c %= q
    if c == 0:
        return 0
    return 1 if pow(c, (q - 1) // 2, q) == 1 else -1


def residue_symbol(f: Poly, P: Poly, q: int) -> int:
    """(f/P) for monic irreducible P, by Euler's criterion in 𝔽_q[x]/P.

    This is the definitional oracle: a plain power in the quotient ring,
    independent of reciprocity.  Raises ValueError if P is not irreducible.
    """
    require_field(q)
    if not is_irreducible(P, q):
        raise ValueError(f"modulus {to_digit_string(P)} is not irreducible")
    e = (norm(P, q) - 1) // 2
    s = pow_mod(mod(f, P, q), e, P, q)
    if s == ():
        return 0
    if s == (1,):
        return 1
    if s == (q - 1,):
        return -1
    raise ValueError(f"Euler power {s} not in {{0, ±1}}; modulus not prime?")


def jacobi_symbol(A: Poly, B: Poly, q: int) -> int:
    """(A/B) for monic B, extended multiplicatively over the factors of B.

    Computed by reciprocity descent — strip the leading unit of A (its symbol
    is legendre_const(unit)^deg(B)), swap via (Â/B) = (B/Â), reduce, repeat —
    with no factoring.  (A/1) = 1 for every A, including A = 0.
    """
    require_field(q)
    if not is_monic(B):
        raise ValueError("jacobi_symbol: bottom argument must be monic")
    result = 1
    while deg(B) >= 1:
        A = mod(A, B, q)
        if A == ():
            return 0
        c, A_hat = monic_scale(A, q)
        if deg(B) % 2 == 1:
            result *= legendre_const(c, q)
        A, B = B, A_hat
    return result


def chi(D: Poly, f: Poly, q: int) -> int:
    """χ_D(f) = (D/f), the quadratic character attached to D."""
    return jacobi_symbol(D, f, q)


# ---------------------------------------------------------------------------
# the additive character e(u/f)
# ---------------------------------------------------------------------------


def laurent_digits(u: Poly, f: Poly, q: int, depth: int = 2) -> tuple[int, ...]:
    """Coefficients (a₁, …, a_depth) of x⁻¹, …, x^(-depth) in u/f at infinity.

    Long division of u by f carried depth terms past the polynomial part:
    after u = f·s + r, each extra step multiplies r by x and extracts the
    next quotient digit, which is a constant because deg(r·x) ≤ deg f.
    """
    if f == ():
        raise ZeroDivisionError("Laurent expansion of u/0")
    _, r = div_rem(u, f, q)
    out = []
    for _ in range(depth):
        s, r = div_rem(mul(r, X, q), f, q)
        out.append(s[0] if s else 0)
    return tuple(out)


def exponential(u: Poly, f: Poly, q: int) -> complex:
    """e(u/f) = exp(2πi·a₁/q), a₁ the 1/x Laurent coefficient of u/f."""
    a1 = laurent_digits(u, f, q, depth=1)[0]
    return cmath.exp(2j * cmath.pi * a1 / q)


# ---------------------------------------------------------------------------
# Gauss sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussSum:
    """Value of G(V, χ_f) = Σ_{r mod f} (r/f) e(Vr/f) with its arguments."""

    value: complex
    modulus_f: Poly
    shift_V: Poly


def gauss_sum(
    V: Poly, f: Poly, q: int, budget: int = DEFAULT_DIRECT_BUDGET
) -> GaussSum:
    """G(V, χ_f) by literal summation over all |f| residues.

    This is the slow definitional route used to validate every faster engine;
    each term is an independent jacobi_symbol and long-division exponential.
    """
    require_field(q)
    if f == ():
        raise ZeroDivisionError("Gauss sum needs a nonzero modulus")
    if not is_monic(f):
        raise ValueError("Gauss sum modulus must be monic")
    n = deg(f)
    count = q**n
    if count > budget:
        raise BudgetExceededError(f"|f| = {count} residues exceeds budget {budget}")
    total = 0j
    for code in range(count):
        r = from_code(code, q)
        s = jacobi_symbol(r, f, q)
        if s:
            total += s * exponential(mul(V, r, q), f, q)
    return GaussSum(value=total, modulus_f=f, shift_V=V)


def polynomial_valuation(V: Poly, P: Poly, q: int) -> tuple[float, Poly | None]:
    """(α, V₁) with V = V₁·P^α and P ∤ V₁; (inf, None) when V = 0."""
    if V == ():
        return math.inf, None
    alpha = 0
    while True:
        quo, rem = div_rem(V, P, q)
        if rem != ():
            return alpha, V
        V = quo
        alpha += 1


def gauss_sum_closed(V: Poly, P: Poly, i: int, q: int) -> GaussSum:
    """Closed form of G(V, χ_{P^i}) for monic irreducible P, by cases on
    α = ord_P(V):

        i ≤ α, i odd   → 0                     i = α+1, i even → −|P|^{i−1}
        i ≤ α, i even  → φ(P^i)                i = α+1, i odd  → (V₁/P)·|P|^{i−1}·√|P|
        i ≥ α+2        → 0
    """
    require_field(q)
    if i < 1:
        raise ValueError("prime-power exponent must be ≥ 1")
    if not is_irreducible(P, q):
        raise ValueError("closed form needs an irreducible modulus base")
    alpha, V1 = polynomial_valuation(V, P, q)
    absP = norm(P, q)
    modulus = _pow(P, i, q)
    if i <= alpha:
        value = complex(absP**i - absP ** (i - 1)) if i % 2 == 0 else 0j
    elif i == alpha + 1:
        if i % 2 == 0:
            value = complex(-(absP ** (i - 1)))
        else:
            value = residue_symbol(V1, P, q) * absP ** (i - 1) * math.sqrt(absP) + 0j
    else:
        value = 0j
    return GaussSum(value=value, modulus_f=modulus, shift_V=V)


def _pow(f: Poly, e: int, q: int) -> Poly:
    out = ONE
    for _ in range(e):
        out = mul(out, f, q)
    return out


def gauss_sum_closed_all(P: Poly, i: int, q: int) -> np.ndarray:
    """Closed-form G(V, χ_{P^i}) for every residue code V mod P^i at once.

    Vectorized version of gauss_sum_closed: the P-adic valuation of every
    code is peeled off one division at a time (division by P inverted via a
    lookup table of the linear multiplication-by-P map), then the five cases
    are filled in by masks.  Used for exhaustive sweeps where a per-V Python
    loop would be quadratic in |P^i|.
    """
    require_field(q)
    d = deg(P)
    n = d * i
    count = q**n
    absP = q**d
    values = np.zeros(count, dtype=np.complex128)
    JP = _prime_symbol_table(P, q)

    # alpha[v] = ord_P(V) capped at i; v1_code[v] = code of (V / P^alpha) mod P
    alpha = np.zeros(count, dtype=np.int64)
    v1_code = np.zeros(count, dtype=np.int64)
    live = np.arange(count, dtype=np.int64)  # original codes still undecided
    cur = live.copy()  # current quotients V / P^t, width n - t*d
    for t in range(i + 1):
        width = n - t * d
        if width == 0:
            # V exactly divisible by P^i: only the zero quotient remains
            alpha[live] = i
            v1_code[live] = 0
            break
        red = reduce_codes(width, P, q)
        res = red[cur]
        stops = res != 0
        alpha[live[stops]] = t
        v1_code[live[stops]] = res[stops]
        if t == i or not (~stops).any():
            alpha[live[~stops]] = i  # valuation ≥ i behaves like i everywhere
            break
        # invert multiplication by P on the exact multiples
        sub_width = width - d
        mul_map = _mul_by_codes(P, sub_width, q)
        inv = np.zeros(q**width, dtype=np.int64)
        inv[mul_map] = np.arange(q**sub_width, dtype=np.int64)
        live = live[~stops]
        cur = inv[cur[~stops]]

    for t in range(i + 1):
        m = alpha == t
        if not m.any():
            continue
        if i <= t:  # includes V = 0 through the capped valuation
            values[m] = absP**i - absP ** (i - 1) if i % 2 == 0 else 0.0
        elif i == t + 1:
            if i % 2 == 0:
                values[m] = -float(absP ** (i - 1))
            else:
                values[m] = JP[v1_code[m]].astype(np.float64) * (
                    absP ** (i - 1) * math.sqrt(absP)
                )
        # i ≥ t + 2: stays zero
    return values


@lru_cache(maxsize=None)
def _mul_by_codes(P: Poly, src_width: int, q: int) -> np.ndarray:
    """codes of P·W for every code W of digit width src_width."""
    d = deg(P)
    digits = digit_matrix(q**src_width, src_width, q)
    out = np.zeros((q**src_width, src_width + d), dtype=np.int64)
    for j, c in enumerate(P):
        if c:
            out[:, j : j + src_width] += c * digits
    return (out % q) @ _qpowers(src_width + d, q)


def gauss_sum_factored(V: Poly, f: Poly, q: int) -> GaussSum:
    """G(V, χ_f) assembled as Π G(V, χ_{P^e}) over the prime powers of f.

    The factorization across coprime moduli is exact for q ≡ 1 (mod 4): the
    CRT twist factors are (f₁/f₂)(f₂/f₁) = (f₁/f₂)² = 1 by reciprocity.
    """
    if not is_monic(f):
        raise ValueError("Gauss sum modulus must be monic")
    _, factors = factor(f, q)
    value = 1 + 0j
    for P, e in factors:
        value *= gauss_sum_closed(V, P, e, q).value
    return GaussSum(value=value, modulus_f=f, shift_V=V)


# ---------------------------------------------------------------------------
# vectorized residue machinery: digit matrices, character tables, DFT engine
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _qpowers(width: int, q: int) -> np.ndarray:
    return np.array([q**i for i in range(width)], dtype=np.int64)


@lru_cache(maxsize=16)
def digit_matrix(count: int, width: int, q: int) -> np.ndarray:
    """Rows = base-q digit vectors (low digit first) of codes 0..count-1."""
    codes = np.arange(count, dtype=np.int64)
    return (codes[:, None] // _qpowers(width, q)[None, :]) % q


def power_residue_digits(src_width: int, f: Poly, q: int) -> np.ndarray:
    """Matrix whose row j is the digit vector of x^j mod f (deg f columns).

    Left-multiplying a coefficient row vector by this matrix reduces the
    polynomial mod f; reduction is linear, so this works on whole batches.
    """
    d = deg(f)
    rows = np.zeros((src_width, max(d, 0)), dtype=np.int64)
    r = ONE
    for j in range(src_width):
        rows[j, : len(r)] = r
        r = mod(mul(r, X, q), f, q)
    return rows


@lru_cache(maxsize=512)
def reduce_codes(codes_width: int, f: Poly, q: int) -> np.ndarray:
    """Array mapping every code of width codes_width to code(poly mod f)."""
    d = deg(f)
    count = q**codes_width
    digits = digit_matrix(count, codes_width, q)
    red = (digits @ power_residue_digits(codes_width, f, q)) % q
    return red @ _qpowers(d, q)


@lru_cache(maxsize=None)
def _prime_symbol_table(P: Poly, q: int) -> np.ndarray:
    """Table of (r/P) over all residues r mod P, for irreducible P.

    Built by enumerating the squares of all residues — no symbol evaluations —
    and marking nonsquares −1, the zero residue 0.
    """
    d = deg(P)
    count = q**d
    digits = digit_matrix(count, d, q)
    square = np.zeros((count, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            square[:, i + j] += digits[:, i] * digits[:, j]
    red = (square @ power_residue_digits(2 * d - 1, P, q)) % q
    square_codes = red @ _qpowers(d, q)
    table = np.full(count, -1, dtype=np.int8)
    table[square_codes] = 1
    table[0] = 0
    return table


def character_table(f: Poly, q: int, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """Table of the character V ↦ (V/f) over all residue codes mod f.

    Assembled multiplicatively: (V/f) = Π_P (V mod P / P)^e over the prime
    powers P^e of f, each factor a gather from a cached per-prime table.
    Results are cached; treat the returned array as read-only.
    """
    require_field(q)
    if not is_monic(f):
        raise ValueError("character modulus must be monic")
    if q ** deg(f) > budget:
        raise BudgetExceededError(
            f"character table of size {q ** deg(f)} exceeds budget"
        )
    return _character_table_cached(f, q)


@lru_cache(maxsize=256)
def _character_table_cached(f: Poly, q: int) -> np.ndarray:
    n = deg(f)
    table = np.ones(q**n, dtype=np.int8)
    _, factors = factor(f, q)
    for P, e in factors:
        vals = _prime_symbol_table(P, q)[reduce_codes(n, P, q)]
        table *= np.abs(vals) if e % 2 == 0 else vals
    return table


def bilinear_matrix(f: Poly, q: int) -> np.ndarray:
    """n×n matrix M over ℤ/q with vᵀMr = a₁(V·r/f) for monic f of degree n.

    Entry M[i,j] is the x^(n−1) coefficient of x^(i+j) mod f; the 1/x Laurent
    coefficient of a product over f is this bilinear form in the two digit
    vectors, which turns additive-character sums into plain DFTs.
    """
    n = deg(f)
    col = power_residue_digits(2 * n - 1, f, q)[:, n - 1]
    return np.array([[col[i + j] for j in range(n)] for i in range(n)], dtype=np.int64)


def gauss_sum_all(f: Poly, q: int, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """G(V, χ_f) for every residue code V mod f, via one multidimensional DFT.

    G(V) = Σ_r χ_f(r) ω^(vᵀMr) is the DFT of the character table over (ℤ/q)ⁿ
    evaluated at frequency Mᵀv, so the whole family costs one FFT plus a
    batched index map instead of |f|² term-by-term work.
    """
    n = deg(f)
    if n == 0:
        return np.ones(1, dtype=np.complex128)
    if q**n > budget:
        raise BudgetExceededError(f"Gauss DFT of size {q**n} exceeds budget")
    return _gauss_sum_all_cached(f, q)


@lru_cache(maxsize=64)
def _gauss_sum_all_cached(f: Poly, q: int) -> np.ndarray:
    n = deg(f)
    count = q**n
    table = _character_table_cached(f, q)
    spectrum = np.conj(np.fft.fftn(table.reshape((q,) * n).astype(np.float64)))
    # The C-order reshape pairs axis a with digit n-1-a on both the residue
    # and frequency sides, so a frequency digit vector flattens back to its
    # ordinary code: flat index Σ_a k_a q^(n-1-a) = Σ_j w_j q^j.
    flat = spectrum.reshape(-1)
    freq = (digit_matrix(count, n, q) @ bilinear_matrix(f, q)) % q
    return flat[freq @ _qpowers(n, q)]


# ---------------------------------------------------------------------------
# exact character sums, Poisson summation, and the ensemble character sum
# ---------------------------------------------------------------------------


def char_sum(f: Poly, m: int, q: int, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Exact Σ_{h ∈ M_m} χ_f(h) as an integer.

    Monic h of degree m < deg f are residue codes q^m..2q^m−1, so the sum is
    a slice of the character table; for m ≥ deg f every residue class holds
    exactly q^(m−deg f) monics of degree m, so the full table sum scales.
    """
    if m < 0:
        return 0
    if not is_monic(f):
        raise ValueError("char_sum modulus must be monic")
    n = deg(f)
    if n == 0:
        return q**m
    table = character_table(f, q, budget)
    if m < n:
        return int(table[q**m : 2 * q**m].sum(dtype=np.int64))
    return q ** (m - n) * int(table.sum(dtype=np.int64))


@dataclass(frozen=True)
class PoissonCheck:
    """One Poisson-summation identity instance: exact lhs vs Gauss-sum rhs."""

    f: Poly
    m: int
    lhs: int
    rhs: complex
    abs_error: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.abs_error <= self.tol


def poisson_check(f: Poly, m: int, q: int, tol_scale: float = 1e-9) -> PoissonCheck:
    """Verify Σ_{h∈M_m} χ_f(h) against its Gauss-sum dual for one (f, m).

    deg f even:  (q^m/|f|)·[G(0,χ_f) + (q−1)·Σ_{V monic, d(V) ≤ n−m−2} G(V,χ_f)
                                      − Σ_{V monic, d(V) = n−m−1} G(V,χ_f)]
    deg f odd:   (q^m/|f|)·√q · Σ_{V monic, d(V) = n−m−1} G(V,χ_f)

    Empty V-ranges are dropped, which handles m ≥ n exactly: the even case
    degenerates to q^(m−n)·G(0) and the odd case to 0.
    """
    require_field(q)
    n = deg(f)
    if n < 1 or m < 1:
        raise ValueError("poisson_check needs deg f ≥ 1 and m ≥ 1")
    lhs = char_sum(f, m, q)
    g_all = gauss_sum_all(f, q)

    def monic_slice_sum(t: int) -> complex:
        if t < 0:
            return 0j
        return complex(g_all[q**t : 2 * q**t].sum())

    scale = q**m / q**n
    if n % 2 == 0:
        mid = sum(monic_slice_sum(t) for t in range(0, n - m - 1))
        rhs = scale * (complex(g_all[0]) + (q - 1) * mid - monic_slice_sum(n - m - 1))
    else:
        rhs = scale * math.sqrt(q) * monic_slice_sum(n - m - 1)
    err = abs(lhs - rhs)
    return PoissonCheck(
        f=f, m=m, lhs=lhs, rhs=rhs, abs_error=err, tol=tol_scale * math.sqrt(q**n)
    )


def _c_divisor_degree_counts(f: Poly, q: int, max_deg: int) -> list[int]:
    """counts[t] = #{monic C : every prime of C divides f, deg C = t}."""
    counts = [0] * (max_deg + 1)
    counts[0] = 1
    _, factors = factor(f, q)
    for P, _ in factors:
        d = deg(P)
        # knapsack update: allow any power of P, one prime at a time
        for t in range(d, max_deg + 1):
            counts[t] += counts[t - d]
    return counts


@dataclass(frozen=True)
class SumdCheck:
    """Ensemble character sum Σ_{D∈H_{2g+1}} χ_D(f): enumeration vs duality."""

    f: Poly
    g: int
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def sumd_check(
    f: Poly, g: int, q: int, budget: int = DEFAULT_ENUM_BUDGET
) -> SumdCheck:
    """Check Σ_{D ∈ H_{2g+1}} χ_D(f) against its square-free-sieve dual.

    lhs enumerates the ensemble; rhs is
    Σ_{C | f^∞} [ Σ_{h∈M_{2g+1−2 deg C}} χ_f(h) − q·Σ_{h∈M_{2g−1−2 deg C}} χ_f(h) ],
    where only deg C matters, so C's are counted by degree.  Both sides are
    exact integers.
    """
    require_field(q)
    if not is_monic(f):
        raise ValueError("sumd_check needs monic f")
    if q ** (2 * g + 1) > budget:
        raise BudgetExceededError("ensemble enumeration exceeds budget")
    lhs = sum(jacobi_symbol(D, f, q) for D in squarefree_monics(2 * g + 1, q, budget))
    counts = _c_divisor_degree_counts(f, q, g)
    rhs = 0
    for t, n_c in enumerate(counts):
        if n_c == 0:
            continue
        rhs += n_c * (char_sum(f, 2 * g + 1 - 2 * t, q) - q * char_sum(f, 2 * g - 1 - 2 * t, q))
    return SumdCheck(f=f, g=g, lhs=lhs, rhs=rhs)
