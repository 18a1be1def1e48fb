"""L-polynomials of quadratic characters over 𝔽_q[x] and their analytic checks.

For monic square-free D of degree 2g+1 the Dirichlet series of χ_D is the
polynomial 𝓛(u, χ_D) = Σ_{n ≤ 2g} c_n uⁿ with c_n = Σ_{f ∈ M_n} χ_D(f); under
u = q^(−s) this is L(s, χ_D).  Everything desk-checkable about it lives here:

- exact integer coefficients and the coefficient-level functional equation
  c_{2g−n} = q^(g−n)·c_n, equivalent to 𝓛(u) = (qu²)^g·𝓛(1/(qu));
- the exact critical value L(1/2) = a + b√q in ℚ(√q);
- the 2g inverse roots α_j = e^(2πiθ_j) on the unit circle (a theorem in
  this setting, so ‖α_j| − 1‖ is a hard numerical assertion, not a hope);
- the completed functional equation Λ(s) = q^(g(s−1/2))·L(s) = Λ(1−s);
- the zeros-vs-primes explicit formula for even trigonometric test functions;
- the exact log-modulus identity relating log|L(α+it)| on the critical strip
  to its value at Re s = 5/2 through the zero angles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import character_table, chi, require_field
from .poly import (
    Poly,
    deg,
    irreducibles,
    is_monic,
    is_squarefree,
    to_digit_string,
)
from .quadfield import SqrtQ

ZERO_MODULUS_TOL = 1e-8


@dataclass(frozen=True)
class LPolynomial:
    """𝓛(u, χ_D) = Σ c_n uⁿ for one D: exact integer coefficients."""

    q: int
    D: Poly
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 2 * self.g + 1:
            raise ValueError("coefficient vector must have length 2g+1")
        if self.coeffs[0] != 1:
            raise ValueError("c₀ must be 1")

    def eval(self, u: complex) -> complex:
        """𝓛(u) by Horner's rule."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def eval_L(self, s: complex) -> complex:
        """L(s) = 𝓛(q^(−s)), principal power for complex s."""
        return self.eval(cmath.exp(-complex(s) * math.log(self.q)))


def compute_L(D: Poly, q: int) -> LPolynomial:
    """Exact 𝓛(u, χ_D) for monic square-free D of odd degree.

    Each c_n = Σ_{f∈M_n} χ_D(f) is a slice sum of the character table mod D:
    monic f of degree n < deg D are exactly the residue codes qⁿ..2qⁿ−1, and
    (D/f) = (f/D) on monic arguments.  Two sanity rows are enforced before
    returning: Σ_{f∈M_{2g+1}} χ_D(f) = 0, and the functional-equation
    symmetry c_{2g−n} = q^(g−n)·c_n, both exact.
    """
    require_field(q)
    if not is_monic(D):
        raise ValueError(f"D = {to_digit_string(D)} must be monic")
    n = deg(D)
    if n % 2 == 0 or n < 1:
        raise ValueError(f"deg D = {n} must be odd")
    if not is_squarefree(D, q):
        raise ValueError(f"D = {to_digit_string(D)} is not square-free")
    g = (n - 1) // 2
    table = character_table(D, q)
    coeffs = tuple(
        int(table[q**m : 2 * q**m].sum(dtype=np.int64)) for m in range(2 * g + 1)
    )
    if int(table.sum(dtype=np.int64)) != 0:
        raise ArithmeticError("degree-(2g+1) character sum must vanish")
    for m in range(2 * g + 1):
        if coeffs[2 * g - m] != q ** (g - m) * coeffs[m]:
            raise ArithmeticError("coefficient symmetry c_{2g-n} = q^(g-n) c_n failed")
    return LPolynomial(q=q, D=D, g=g, coeffs=coeffs)


def value_at_half(L: LPolynomial) -> SqrtQ:
    """L(1/2) = 𝓛(q^(−1/2)) as the exact pair a + b√q.

    Even-degree terms land in the rational part, odd-degree terms carry one
    factor of √q: a = Σ_{n even} c_n q^(−n/2), b = Σ_{n odd} c_n q^(−(n+1)/2).
    """
    q = L.q
    v = SqrtQ.zero(q)
    for n, c in enumerate(L.coeffs):
        if n % 2 == 0:
            v = v + SqrtQ(q, Fraction(c, q ** (n // 2)), 0)
        else:
            v = v + SqrtQ(q, 0, Fraction(c, q ** ((n + 1) // 2)))
    return v


@dataclass(frozen=True)
class ZeroSet:
    """Zero angles of one 𝓛: α_j = e^(2πiθ_j) with θ_j ∈ [0, 1), sorted."""

    thetas: tuple[float, ...]
    residual: float


def zeros(L: LPolynomial, tol: float = ZERO_MODULUS_TOL) -> ZeroSet:
    """All 2g inverse roots as angles, asserting they sit on the unit circle.

    Roots of 𝓛 are found from the companion matrix and polished with two
    Newton steps; α_j = 1/(u_j√q).  Raises if any ‖α_j| − 1‖ exceeds tol,
    reporting the residual max_j |𝓛(u_j)|.
    """
    q = L.q
    c = np.array(L.coeffs, dtype=np.float64)
    roots = np.roots(c[::-1])
    # Newton polish at full degree
    dcoef = c[1:] * np.arange(1, len(c))
    for _ in range(2):
        f = np.polyval(c[::-1], roots)
        fp = np.polyval(dcoef[::-1], roots)
        step = np.where(fp != 0, f / np.where(fp != 0, fp, 1), 0)
        roots = roots - step
    residual = float(np.abs(np.polyval(c[::-1], roots)).max()) if len(roots) else 0.0
    alphas = 1.0 / (roots * math.sqrt(q))
    mod_err = float(np.abs(np.abs(alphas) - 1.0).max()) if len(alphas) else 0.0
    if mod_err > tol:
        raise ArithmeticError(
            f"inverse roots off the unit circle by {mod_err:.3e} (residual {residual:.3e})"
        )
    thetas = np.angle(alphas) / (2 * math.pi)
    thetas = np.mod(thetas, 1.0)
    thetas[np.isclose(thetas, 1.0, atol=1e-12)] = 0.0
    return ZeroSet(thetas=tuple(sorted(float(t) for t in thetas)), residual=residual)


@dataclass(frozen=True)
class CompletedFECheck:
    """Λ(s) vs Λ(1−s) with Λ(s) = X_D(s)^(−1/2)·L(s)."""

    s: complex
    lhs: complex
    rhs: complex
    error: float
    branch_disagreement: float


def completed_fe_check(L: LPolynomial, s: complex) -> CompletedFECheck:
    """Check Λ(s) = Λ(1−s) where Λ(s) = |D|^((s−1/2)/2)·q^((1/2−s)/2)·L(s).

    X_D(s) = |D|^(1/2−s)·q^(s−1/2) collapses to q^(2g(1/2−s)), so the smooth
    (entire) branch of X_D(s)^(−1/2) is q^(g(s−1/2)).  The principal-branch
    square root is also evaluated; branch_disagreement records how far the
    two roots differ (0 or 2·|Λ| — a sign — whenever they differ at all).
    """
    q, g = L.q, L.g

    def lam_smooth(z: complex) -> complex:
        return cmath.exp(g * (z - 0.5) * math.log(q)) * L.eval_L(z)

    def lam_principal(z: complex) -> complex:
        x_d = cmath.exp(2 * g * (0.5 - z) * math.log(q))
        return L.eval_L(z) / cmath.sqrt(x_d)

    lhs, rhs = lam_smooth(s), lam_smooth(1 - s)
    branch = max(
        abs(lam_principal(s) - lam_smooth(s)),
        abs(lam_principal(1 - s) - lam_smooth(1 - s)),
    )
    return CompletedFECheck(
        s=s, lhs=lhs, rhs=rhs, error=abs(lhs - rhs), branch_disagreement=branch
    )


def raw_fe_residual(L: LPolynomial, u: complex) -> float:
    """|𝓛(u) − (qu²)^g·𝓛(1/(qu))| — the functional equation in the u frame."""
    q, g = L.q, L.g
    return abs(L.eval(u) - (q * u * u) ** g * L.eval(1.0 / (q * u)))


@dataclass(frozen=True)
class ExplicitFormulaCheck:
    """Σ_j h(θ_j) against the prime-power side, for one D and one h."""

    zero_side: float
    prime_side: float
    error: float


def explicit_formula_check(
    L: LPolynomial, hhat: tuple[float, ...]
) -> ExplicitFormulaCheck:
    """Verify the explicit formula for h(θ) = Σ_{|k|≤N} ĥ(k) e(kθ), ĥ even real.

    hhat lists ĥ(0), ĥ(1), …, ĥ(N).  Zero side: Σ_j h(θ_j) over the 2g
    angles.  Prime side: 2g·ĥ(0) − 2·Σ ĥ(d(f))·Λ(f)·χ_D(f)/√|f| over monic
    prime powers f = P^e with d(f) ≤ N, where Λ(P^e) = d(P).
    """
    q, g = L.q, L.g
    N = len(hhat) - 1

    def h(theta: float) -> float:
        return hhat[0] + 2 * sum(
            hhat[k] * math.cos(2 * math.pi * k * theta) for k in range(1, N + 1)
        )

    zs = zeros(L)
    zero_side = sum(h(t) for t in zs.thetas)
    prime_side = 2 * g * hhat[0]
    for dP in range(1, N + 1):
        for P in irreducibles(dP, q):
            sym = chi(L.D, P, q)
            e = 1
            while e * dP <= N:
                prime_side -= (
                    2 * hhat[e * dP] * dP * sym**e / math.sqrt(q ** (e * dP))
                )
                e += 1
    return ExplicitFormulaCheck(
        zero_side=zero_side, prime_side=prime_side, error=abs(zero_side - prime_side)
    )


@dataclass(frozen=True)
class LogModulusCheck:
    """log|L(α+it)| against its zero-angle expansion from Re s = 5/2."""

    alpha: float
    t: float
    lhs: float
    rhs: float
    error: float
    at_zero: bool


def log_modulus_identity(L: LPolynomial, alpha: float, t: float) -> LogModulusCheck:
    """Exact identity: with a = (q²−1)/(2q) and b = (q^(α−1/2)−1)/(2q^(α/2−1/4)),

        log|L(α+it)| = g(5/2−α)·log q + log|L(5/2+it)|
                       + ½ Σ_j log[(b² + sin²(πθ_j − t·log(q)/2))
                                  /(a² + sin²(πθ_j − t·log(q)/2))].

    Each factor |1 − q^(1/2−s)e^(2πiθ)|² equals 4q^(1/2−α)(b_α² + sin²(·)),
    so the identity is exact before any asymptotic step.  Evaluation at (or
    numerically indistinguishable from) a zero sets at_zero and leaves the
    comparison fields NaN.
    """
    q, g = L.q, L.g
    lq = math.log(q)
    val = L.eval(cmath.exp(-(alpha + 1j * t) * lq))
    if abs(val) < 1e-300:
        return LogModulusCheck(alpha, t, math.nan, math.nan, math.nan, True)
    lhs = math.log(abs(val))
    a = (q * q - 1) / (2 * q)
    b = (q ** (alpha - 0.5) - 1) / (2 * q ** (alpha / 2 - 0.25))
    ref = math.log(abs(L.eval(cmath.exp(-(2.5 + 1j * t) * lq))))
    zs = zeros(L)
    acc = 0.0
    for theta in zs.thetas:
        s2 = math.sin(math.pi * theta - t * lq / 2) ** 2
        acc += math.log((b * b + s2) / (a * a + s2))
    rhs = g * (2.5 - alpha) * lq + ref + 0.5 * acc
    return LogModulusCheck(alpha, t, lhs, rhs, abs(lhs - rhs), False)
