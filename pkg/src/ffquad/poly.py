"""Exact polynomial arithmetic over the prime field F_q.

Representation
--------------
A polynomial is a tuple of small ints ``(c0, c1, ..., cd)`` — coefficient of
x^i at index i, each reduced into [0, q), with no trailing zeros.  The zero
polynomial is the empty tuple ``()``.  Tuples are immutable and hashable, so
they can key dicts and sets directly.

The degree of the zero polynomial is the sentinel ``NEG_INF`` (an actual
-inf float), so identities like deg(f*g) = deg(f) + deg(g) hold verbatim.

Every polynomial also has an integer code ``code(f) = sum c_i * q**i``.
Code order is the canonical total order used everywhere (enumeration
streams, factorization ordering, cache indices): it sorts by degree first,
then lexicographically on coefficients read from the leading one down to
the constant term.

The base field size q is passed explicitly to every operation that needs
it; this module never holds global state besides memoized irreducible
tables.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

NEG_INF = float("-inf")

#: Default cap on the number of items a single enumeration may produce.
DEFAULT_ENUM_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured item budget."""


Poly = tuple  # alias for readability in signatures


# ----------------------------------------------------------------------
# basic structure

def normalize(coeffs: Sequence[int], q: int) -> Poly:
    """Reduce coefficients mod q and strip trailing zeros."""
    c = [x % q for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(f: Poly) -> int | float:
    """Degree of f; NEG_INF for the zero polynomial."""
    return len(f) - 1 if f else NEG_INF


def norm(f: Poly, q: int) -> int:
    """|f| = q^deg(f).  Raises on the zero polynomial."""
    if not f:
        raise ValueError("norm of the zero polynomial is undefined")
    return q ** (len(f) - 1)


def is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def constant(c: int, q: int) -> Poly:
    return ((c % q,) if c % q else ())


ONE: Poly = (1,)
X: Poly = (0, 1)


def to_code(f: Poly, q: int) -> int:
    """Integer code sum(c_i q^i); 0 encodes the zero polynomial."""
    code = 0
    for c in reversed(f):
        code = code * q + c
    return code


def from_code(code: int, q: int) -> Poly:
    """Inverse of to_code."""
    c = []
    while code:
        code, r = divmod(code, q)
        c.append(r)
    return tuple(c)


def to_digit_string(f: Poly) -> str:
    """Comma-separated base-q digits, constant coefficient first."""
    return ",".join(str(c) for c in f) if f else "0"


def from_digit_string(s: str, q: int) -> Poly:
    if s.strip() in ("", "0"):
        return ()
    return normalize([int(t) for t in s.split(",")], q)


# ----------------------------------------------------------------------
# ring operations

def add(f: Poly, g: Poly, q: int) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    c = list(f)
    for i, x in enumerate(g):
        c[i] = (c[i] + x) % q
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def neg(f: Poly, q: int) -> Poly:
    return tuple((-x) % q for x in f)


def sub(f: Poly, g: Poly, q: int) -> Poly:
    return add(f, neg(g, q), q)


def scalar_mul(a: int, f: Poly, q: int) -> Poly:
    a %= q
    if a == 0:
        return ()
    return tuple((a * x) % q for x in f)


def mul(f: Poly, g: Poly, q: int) -> Poly:
    if not f or not g:
        return ()
    c = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                c[i + j] += a * b
    # the leading coefficient f[-1]*g[-1] is nonzero in a field
    return tuple(x % q for x in c)


def div_rem(f: Poly, g: Poly, q: int) -> tuple[Poly, Poly]:
    """(quotient, remainder) with deg(remainder) < deg(g)."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    inv_lead = pow(g[-1], q - 2, q)
    rem = list(f)
    dq = len(f) - len(g)
    quot = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        coef = (rem[k + len(g) - 1] * inv_lead) % q
        quot[k] = coef
        if coef:
            for j, b in enumerate(g):
                rem[k + j] = (rem[k + j] - coef * b) % q
    r = rem[: len(g) - 1]
    while r and r[-1] == 0:
        r.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return tuple(quot), tuple(r)


def mod(f: Poly, g: Poly, q: int) -> Poly:
    return div_rem(f, g, q)[1]


def gcd(f: Poly, g: Poly, q: int) -> Poly:
    """Monic greatest common divisor."""
    while g:
        f, g = g, mod(f, g, q)
    if not f:
        return ()
    inv = pow(f[-1], q - 2, q)
    return tuple((inv * x) % q for x in f)


def derivative(f: Poly, q: int) -> Poly:
    c = [(i * f[i]) % q for i in range(1, len(f))]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def eval_poly(f: Poly, a: int, q: int) -> int:
    v = 0
    for c in reversed(f):
        v = (v * a + c) % q
    return v


def pow_mod(f: Poly, e: int, m: Poly, q: int) -> Poly:
    """f^e mod m by square-and-multiply."""
    result: Poly = (1,)
    base = mod(f, m, q)
    while e:
        if e & 1:
            result = mod(mul(result, base, q), m, q)
        base = mod(mul(base, base, q), m, q)
        e >>= 1
    return result


def monic_scale(f: Poly, q: int) -> tuple[int, Poly]:
    """Write f = unit * fhat with fhat monic; returns (unit, fhat)."""
    if not f:
        raise ValueError("zero polynomial has no monic associate")
    u = f[-1]
    if u == 1:
        return 1, f
    inv = pow(u, q - 2, q)
    return u, tuple((inv * x) % q for x in f)


# ----------------------------------------------------------------------
# enumeration

def _check_budget(n_items: int, budget: int | None) -> None:
    cap = DEFAULT_ENUM_BUDGET if budget is None else budget
    if n_items > cap:
        raise BudgetExceededError(
            f"enumeration of {n_items} items exceeds budget {cap}"
        )


def monics(n: int, q: int, budget: int | None = None) -> Iterator[Poly]:
    """All monic polynomials of degree n, in integer-code order."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    _check_budget(q**n, budget)
    if n == 0:
        yield (1,)
        return
    for j in range(q**n):
        c = []
        code = j
        for _ in range(n):
            code, r = divmod(code, q)
            c.append(r)
        c.append(1)
        yield tuple(c)


def monics_upto(n: int, q: int, budget: int | None = None) -> Iterator[Poly]:
    """All monic polynomials of degree 0..n, lowest degree first."""
    for d in range(n + 1):
        yield from monics(d, q, budget)


def squarefree_monics(n: int, q: int, budget: int | None = None) -> Iterator[Poly]:
    """The set H_n of monic square-free polynomials of degree n."""
    if n < 1:
        raise ValueError("H_n needs n >= 1")
    for f in monics(n, q, budget):
        if is_squarefree(f, q):
            yield f


def is_squarefree(f: Poly, q: int) -> bool:
    """True iff f has no repeated irreducible factor (gcd(f, f') = 1).

    Over F_q with deg(f) < q the derivative test needs no p-th power care:
    f' = 0 would force every exponent to be a multiple of q, impossible for
    the degrees this library enumerates (q >= 5, desk-scale degrees); the
    guard below keeps the general case honest anyway.
    """
    if not f:
        return False
    if len(f) == 1:
        return True
    d = derivative(f, q)
    if not d:
        return False  # f is a q-th power
    return gcd(f, d, q) == (1,)


@functools.lru_cache(maxsize=None)
def irreducibles(n: int, q: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree n, code order, memoized.

    Built by trial division against the cached tables of lower degree —
    a sieve over the enumeration stream.
    """
    if n < 1:
        raise ValueError("irreducibles need degree >= 1")
    if n == 1:
        return tuple((c, 1) for c in range(q))
    small = [P for d in range(1, n // 2 + 1) for P in irreducibles(d, q)]
    out = []
    for f in monics(n, q):
        if all(mod(f, P, q) for P in small):
            out.append(f)
    return tuple(out)


def is_irreducible(f: Poly, q: int) -> bool:
    """Irreducibility via x^(q^i) - x gcds (Rabin's test).

    f is irreducible of degree n iff x^(q^n) = x (mod f) and
    gcd(x^(q^(n/r)) - x, f) = 1 for every prime r | n.
    """
    if not is_monic(f):
        raise ValueError("irreducibility test expects a monic polynomial")
    n = len(f) - 1
    if n < 1:
        raise ValueError("constants are units, not irreducibles")
    if n == 1:
        return True
    for r in _prime_divisors(n):
        t = pow_mod(X, q ** (n // r), f, q)
        if gcd(sub(t, X, q), f, q) != (1,):
            return False
    return pow_mod(X, q**n, f, q) == mod(X, f, q)


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ----------------------------------------------------------------------
# factorization and arithmetic functions

def factor(f: Poly, q: int) -> tuple[int, tuple[tuple[Poly, int], ...]]:
    """Complete factorization f = unit * prod P_i^{e_i}.

    Trial division against the memoized irreducible tables, ascending in
    the canonical code order, so the output ordering is deterministic.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit, rest = monic_scale(f, q)
    pairs: list[tuple[Poly, int]] = []
    d = 1
    while len(rest) - 1 >= 2 * d:
        for P in irreducibles(d, q):
            if len(rest) - 1 < 2 * d:
                break
            e = 0
            while True:
                quot, r = div_rem(rest, P, q)
                if r:
                    break
                rest = quot
                e += 1
            if e:
                pairs.append((P, e))
        d += 1
    if len(rest) > 1:
        # whatever survives trial division up to half its degree is irreducible
        pairs.append((rest, 1))
    pairs.sort(key=lambda pe: to_code(pe[0], q))
    return unit, tuple(pairs)


@dataclass(frozen=True)
class ArithmeticData:
    """The standard multiplicative data of a monic polynomial."""

    moebius: int
    von_mangoldt: int          # deg(P) if f = P^k, else 0
    d4: int                    # number of ordered 4-part monic factorizations
    radical: Poly              # product of the distinct irreducible factors
    euler_phi: int             # |(F_q[x]/f)^*|
    is_squarefree: bool


def arithmetic_functions(f: Poly, q: int) -> ArithmeticData:
    """moebius, von Mangoldt, d4, radical, phi and square-freeness of f."""
    if not is_monic(f):
        raise ValueError("arithmetic functions expect a monic polynomial")
    _, pairs = factor(f, q)
    moeb = 0 if any(e > 1 for _, e in pairs) else (-1) ** len(pairs)
    vm = (len(pairs[0][0]) - 1) if len(pairs) == 1 else 0
    d4v = 1
    phi = 1
    rad: Poly = (1,)
    for P, e in pairs:
        d4v *= comb(e + 3, 3)
        dP = len(P) - 1
        phi *= q ** (dP * e) - q ** (dP * (e - 1))
        rad = mul(rad, P, q)
    return ArithmeticData(
        moebius=moeb,
        von_mangoldt=vm,
        d4=d4v,
        radical=rad,
        euler_phi=phi,
        is_squarefree=all(e == 1 for _, e in pairs),
    )


def moebius(f: Poly, q: int) -> int:
    return arithmetic_functions(f, q).moebius


def von_mangoldt(f: Poly, q: int) -> int:
    return arithmetic_functions(f, q).von_mangoldt


def d4(f: Poly, q: int) -> int:
    return arithmetic_functions(f, q).d4


def euler_phi(f: Poly, q: int) -> int:
    return arithmetic_functions(f, q).euler_phi


def radical(f: Poly, q: int) -> Poly:
    return arithmetic_functions(f, q).radical


# ----------------------------------------------------------------------
# prime counting

def _moebius_int(n: int) -> int:
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


def pi_q(n: int, q: int) -> int:
    """Number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}."""
    total = sum(_moebius_int(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    return total // n


@dataclass(frozen=True)
class PPTCheck:
    """Prime-count deviation record: |count - q^n/n| <= 2 q^{n/2} / n."""

    n: int
    q: int
    count: int
    main_term: float
    deviation: float
    bound: float
    within_bound: bool


def ppt_check(n: int, q: int, exhaustive: bool = False) -> PPTCheck:
    """Compare the degree-n irreducible count against its main term.

    With ``exhaustive`` the count is re-derived from the sieve table
    (identical by construction for small n; the closed formula is the
    primary route).
    """
    count = len(irreducibles(n, q)) if exhaustive else pi_q(n, q)
    main = q**n / n
    dev = abs(count - main)
    bound = 2 * q ** (n / 2) / n
    return PPTCheck(n, q, count, main, dev, bound, dev <= bound)


def h_cardinality(n: int, q: int) -> int:
    """|H_n| = q^{n-1}(q-1) for n >= 2 (all q linear monics for n = 1)."""
    if n < 1:
        raise ValueError("H_n needs n >= 1")
    return q if n == 1 else q ** (n - 1) * (q - 1)
